"""Eta products, Eisenstein series and the classical identity checked exactly."""

from etacurves.arith import admissible_levels
from etacurves.forms import IDENTITIES, delta_N, form, j5

print("levels where Delta_N = (eta(t) eta(Nt))^k is a form of weight k with h = 1:")
for d in admissible_levels(20):
    print(f"  N = {d.N:2}  k = {str(d.k):>2}  mu = {d.mu}")

print("\nDelta  =", delta_N(1, 8))
print("E4     =", form("E4", 6))
print("j_5    =", j5(6))

for name in sorted(IDENTITIES):
    r = IDENTITIES[name](300)
    print(f"identity {name:9} vanishes to O(q^{r.prec}): {r.is_zero()}")
