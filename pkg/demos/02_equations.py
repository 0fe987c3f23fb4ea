"""Every catalog equation checked against its Eisenstein solutions up to the Sturm bound."""

from etacurves.odes import catalog, verify_all

for o in catalog():
    print(f"{o.id:10} {o.describe()}")

print()
reports = verify_all()
for r in reports:
    print(f"{r.ode_id:10} {r.candidate:16} checked to O(q^{r.checked_prec})  {'ok' if r.ok else 'FAIL'}")
print(f"\n{sum(r.ok for r in reports)}/{len(reports)} pairs pass")
