"""From each equation to a minimal Weierstrass model, its conductor and its newform."""

from etacurves.ellcurve import curve_report, from_ode, twist_relation
from etacurves.newform import UnknownGroup, modularity_check, newform_for
from etacurves.odes import catalog, get_ode

for o in catalog():
    rep = curve_report(o, 97)
    try:
        nf = newform_for(o.id)
        m = modularity_check(rep, nf, 97)
        mod = f"newform {nf.eta}: {m.matches} primes agree" + ("" if m.ok else f", {len(m.mismatches)} disagree")
    except UnknownGroup:
        mod = "no eta-quotient newform"
    print(f"{o.id:10} N = {rep.conductor:3}  {rep.minimal}  {mod}")

print()
for N in (1, 2, 5, 6):
    E, F = from_ode(get_ode(f"G0.{N}")), from_ode(get_ode(f"G0sharp.{N}"))
    print(f"G0.{N} vs G0sharp.{N}: {twist_relation(E, F)}")
