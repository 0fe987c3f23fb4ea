"""Command-line entry point: ``etacurves <command> ...``.

Exit codes: 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import ellcurve, newform, odes
from .arith import admissible_levels
from .forms import CATALOG, IDENTITIES, UnknownKey, form
from .qseries import QQ, QQi

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """``selector`` is the group tag, form key, identity name or level bound."""

    command: str
    selector: str = "all"
    prec: int | None = None
    safety: int | None = None
    pmax: int = 97
    field: str = QQ
    fmt: str = "text"
    out: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        sel = next(getattr(args, a) for a in ("selector", "key", "name", "bound") if hasattr(args, a))
        return cls(
            command=args.command,
            selector=sel,
            prec=getattr(args, "prec", None),
            safety=getattr(args, "safety", None),
            pmax=getattr(args, "pmax", 97),
            field=getattr(args, "field", QQ),
            fmt="json" if args.json else "text",
            out=args.out,
        )


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _select_odes(selector: str) -> tuple[odes.CubicODE, ...]:
    if selector == "all":
        return odes.catalog()
    try:
        return (odes.get_ode(selector),)
    except KeyError:
        ids = ", ".join(o.id for o in odes.catalog())
        raise UsageError(f"unknown group {selector!r}; expected 'all' or one of {ids}") from None


# Each command returns (exit code, text lines, json payload).


def cmd_levels(bound: int):
    rows = admissible_levels(bound) if bound >= 1 else []
    lines = [f"{'N':>4} {'k_N':>4} {'h_N':>4} {'mu_N':>5}"]
    lines += [f"{d.N:>4} {str(d.k):>4} {str(d.h):>4} {d.mu:>5}" for d in rows]
    payload = [{"N": d.N, "k": _num(d.k), "h": _num(d.h), "mu": d.mu} for d in rows]
    return EXIT_OK, lines, payload


def cmd_expand(key: str, prec: int):
    try:
        s = form(key, prec)
    except UnknownKey:
        raise UsageError(f"unknown form {key!r}; try one of {', '.join(sorted(CATALOG))}") from None
    return EXIT_OK, [s.to_string()], {"key": key, "series": s.to_json_obj()}


def cmd_verify(selector: str, safety: int | None = None, prec: int | None = None):
    reports = []
    for ode in _select_odes(selector):
        s = safety
        if prec is not None:
            s = prec - odes.sturm_bound(ode) - 1
            if s < 0:
                raise UsageError(f"--prec {prec} is below the bound {odes.sturm_bound(ode)} for {ode.id}")
        reports += [odes.verify(ode, key, s) for key in ode.candidates]
    lines = []
    for r in reports:
        status = "ok" if r.ok else f"FAIL at q^{r.first_bad[0]} ({r.first_bad[1]})"
        lines.append(f"{r.ode_id:<10} {r.candidate:<22} bound {r.sturm_bound:>3} prec {r.checked_prec:>3}  {status}")
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL
    return code, lines, [r.to_json_obj() for r in reports]


def cmd_curve(selector: str, pmax: int = 97):
    reports = [ellcurve.curve_report(ode, pmax) for ode in _select_odes(selector)]
    lines = []
    for r in reports:
        bad = ", ".join(f"{ld.p}:{ld.kodaira}/f={ld.f}" for ld in r.local)
        lines.append(f"{r.group:<10} N = {r.conductor:<4} {r.minimal}   [{bad}]")
    return EXIT_OK, lines, [r.to_json_obj() for r in reports]


def cmd_modularity(selector: str, pmax: int = 97):
    groups = newform.newform_groups() if selector == "all" else [selector]
    results = []
    for g in groups:
        try:
            ode = odes.get_ode(g)
            nf = newform.newform_for(g)
        except KeyError as exc:
            raise UsageError(f"no newform/curve pair for {g!r}: {exc}") from None
        results.append((nf, newform.modularity_check(ellcurve.curve_report(ode, pmax), nf, pmax)))
    lines = []
    for nf, m in results:
        status = "all match" if m.ok else f"{len(m.mismatches)} mismatches {m.mismatches}"
        lines.append(f"{m.group:<10} level {m.level:<4} {nf.eta}  {m.matches} primes, {status}")
    code = EXIT_OK if all(m.ok for _, m in results) else EXIT_FAIL
    return code, lines, [m.to_json_obj() for _, m in results]


def _series_obj(ode, s):
    return {"label": odes.label_solution(ode, s), "series": s.to_json_obj()}


def cmd_solve(selector: str, prec: int | None = None, field: str = QQ):
    lines, payload = [], []
    for ode in _select_odes(selector):
        p = prec if prec is not None else max(8, 2 * odes.sturm_bound(ode))
        try:
            r = odes.search_solutions(ode, p, field)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        lines.append(f"{ode.id} over {field}, prec {p}: {len(r.solutions)} solutions")
        for s in r.solutions:
            lines.append(f"  [{odes.label_solution(ode, s) or 'new'}] {s.to_string(8)}")
        for s in r.stationary:
            lines.append(f"  [stationary] {s.to_string(4)}")
        for i, f in r.needs_extension:
            lines.append(f"  [extension] a{i}: {f} = 0")
        if r.unresolved:
            lines.append(f"  [unresolved branches] {r.unresolved}")
        payload.append(
            {
                "id": ode.id,
                "field": field,
                "prec": p,
                "solutions": [_series_obj(ode, s) for s in r.solutions],
                "stationary": [s.to_json_obj() for s in r.stationary],
                "needs_extension": [[i, f] for i, f in r.needs_extension],
                "trivial": r.trivial,
                "unresolved": r.unresolved,
            }
        )
    return EXIT_OK, lines, payload


def cmd_identity(name: str, prec: int = 300):
    if name not in IDENTITIES:
        raise UsageError(f"unknown identity {name!r}; expected one of {', '.join(IDENTITIES)}")
    r = IDENTITIES[name](prec)
    ok = r.is_zero()
    line = f"{name}: {'pass' if ok else 'FAIL'} to prec {prec}"
    if not ok:
        line += f" (first nonzero q^{r.valuation}: {r.leading_coefficient()})"
    return (EXIT_OK if ok else EXIT_FAIL), [line], {"identity": name, "prec": prec, "ok": ok}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", help="write output to this file")

    parser = argparse.ArgumentParser(prog="etacurves", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("levels", parents=[common], help="admissible levels and their data")
    p.add_argument("bound", nargs="?", type=int, default=20)

    p = sub.add_parser("expand", parents=[common], help="q-expansion of a catalog form")
    p.add_argument("key")
    p.add_argument("--prec", type=int, default=10)

    p = sub.add_parser("verify", parents=[common], help="check the differential equations")
    p.add_argument("selector", nargs="?", default="all")
    p.add_argument("--safety", type=int)
    p.add_argument("--prec", type=int)

    for name, help_ in (("curve", "minimal models and conductors"), ("modularity", "a_p against eta products")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("selector", nargs="?", default="all")
        p.add_argument("--pmax", type=int, default=97)

    p = sub.add_parser("solve", parents=[common], help="search for power-series solutions")
    p.add_argument("selector")
    p.add_argument("--prec", type=int)
    p.add_argument("--field", choices=(QQ, QQi), default=QQ)

    p = sub.add_parser("identity", parents=[common], help="check a closed-form identity")
    p.add_argument("name", choices=sorted(IDENTITIES))
    p.add_argument("--prec", type=int, default=300)
    return parser


def run(cfg: RunConfig):
    c, sel = cfg.command, cfg.selector
    if c == "levels":
        return cmd_levels(sel)
    if c == "expand":
        return cmd_expand(sel, cfg.prec)
    if c == "verify":
        return cmd_verify(sel, cfg.safety, cfg.prec)
    if c == "curve":
        return cmd_curve(sel, cfg.pmax)
    if c == "modularity":
        return cmd_modularity(sel, cfg.pmax)
    if c == "solve":
        return cmd_solve(sel, cfg.prec, cfg.field)
    return cmd_identity(sel, cfg.prec)


def main(argv=None) -> int:
    cfg = RunConfig.from_args(build_parser().parse_args(argv))
    try:
        code, lines, payload = run(cfg)
    except UsageError as exc:
        print(f"etacurves: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(payload, indent=2) if cfg.fmt == "json" else "\n".join(lines)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
