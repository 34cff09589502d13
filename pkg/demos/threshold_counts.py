"""Threshold counts N_Q(xi) against their quadratic growth constant."""

from fareygaps import FareyFilter
from fareygaps.analytic import ZETA2, A
from fareygaps.constrained import C_d_curve
from fareygaps.empirical import case_decomposition, threshold_count

print(" xi    Q=250    Q=1000   limit    (all fractions)")
for xi in (1.5, 2, 4, 8):
    vals = [threshold_count(Q, FareyFilter.all(), xi) / Q**2 for Q in (250, 1000)]
    print(f"{xi:4}  {vals[0]:.5f}  {vals[1]:.5f}  {A(xi) / ZETA2:.5f}")

print("\n xi    Q=1000   limit    (denominators coprime to 6)")
for xi in (1.5, 2, 4, 8):
    v = threshold_count(1000, FareyFilter.denominator_coprime(6), xi) / 1000**2
    print(f"{xi:4}  {v:.5f}  {C_d_curve(6, xi):.5f}")

rep = case_decomposition(150, 3, "7/2")
print(f"\nell=3, Q=150, xi=7/2: {rep.direct} small gaps = {rep.N1} direct neighbours + {rep.N2} one-step skips")
