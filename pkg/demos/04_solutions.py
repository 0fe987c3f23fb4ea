"""Searching for all power-series solutions: levels 3 and 5 have non-Eisenstein ones."""

from etacurves.odes import get_ode, label_solution, search_solutions
from etacurves.qseries import QQ, QQi

for gid, field in (("G0.1", QQ), ("G0.3", QQ), ("G0.5", QQ), ("G0.5", QQi)):
    o = get_ode(gid)
    r = search_solutions(o, 12, field)
    print(f"{gid} over {field}: {len(r.solutions)} solutions, {len(r.stationary)} multiples of Delta_N")
    for s in r.solutions:
        print(f"   [{label_solution(o, s) or 'new'}] {s.truncate(6)}")
    if r.needs_extension:
        print("   some branches need a field extension")
