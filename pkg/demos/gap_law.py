"""Compare empirical gap CDFs of filtered Farey sets with their limit laws.

    python demos/gap_law.py [Q]
"""

import sys

import numpy as np

from fareygaps import FareyFilter
from fareygaps.analytic import Ftilde_cdf, Ktilde
from fareygaps.constrained import Fd_cdf
from fareygaps.empirical import gap_cdf, ks_distance

Q = int(sys.argv[1]) if len(sys.argv) > 1 else 500

cases = [
    ("numerators not divisible by 3", FareyFilter.numerator_not_divisible(3), lambda s: Ftilde_cdf(3, s)),
    ("denominators coprime to 4", FareyFilter.denominator_coprime(4), lambda s: Fd_cdf(4, s)),
    ("denominators coprime to 6", FareyFilter.denominator_coprime(6), lambda s: Fd_cdf(6, s)),
]

grid = np.array([0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
print(f"Q = {Q}")
print("s:      " + "".join(f"{s:>9.2f}" for s in grid))
for name, filt, curve in cases:
    emp = gap_cdf(Q, filt)
    print(f"\n{name}: {emp.n} gaps, KS distance {ks_distance(emp, curve):.4f}")
    print("  data  " + "".join(f"{v:9.4f}" for v in emp(grid)))
    print("  limit " + "".join(f"{v:9.4f}" for v in curve(grid)))

# the limit law for the numerator filter has no mass below Ktilde_3
print(f"\nsmallest normalized gap possible in the limit (ell=3): {float(Ktilde(3)):.5f}")
