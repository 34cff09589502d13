"""Runs of denominators sharing a factor with d, and the polygons behind them."""

from fareygaps.bcz import Cyl, T, check_inclusion, word_region
from fareygaps.runs import certify_L, max_run

for d in (6, 10, 12, 30, 210):
    c = certify_L(d, 150)
    print(f"d={d:4d}: longest run {c.empirical_max:2d} (first at Q={c.attaining_Q}), "
          f"proven bound {c.proven_bound} [{c.bound_source}]")

r = max_run(6, 4)
print("\nthe run at d=6, Q=4:", r.denominators)

# why runs for two primes stop at five: the BCZ map pushes the tall cylinders into the first two
for lhs, rhs in [(T(Cyl(3) | Cyl(4)), Cyl(1) | Cyl(2)), (T(T(Cyl(3)) & Cyl(2)), Cyl(1) | Cyl(2))]:
    res = check_inclusion(lhs, rhs)
    print(f"{res.lhs} ⊆ {res.rhs}: {res.holds}")

reg = word_region((2, 3))
print("\nword (2,3): vertices", [(str(x), str(y)) for x, y in reg.polygon.vertices])
print("gap index along the word is", reg.linear_form[1], "= 2*3 - 1")
