"""Cubic differential equations (d Q)^2 = sum c Delta^e Q^i and their verification.

Each equation relates a weight-4 form ``Q`` and its weighted Ramanujan-Serre
derivative.  Every term has weight 12 on a group of index ``mu``, so the
residual vanishes identically once its coefficients vanish through ``q^mu``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import level_data
from .forms import form, ramanujan_serre
from .qseries import QQ, QQi, GaussianRational, TruncSeries, mul


class PrecisionTooLow(ValueError):
    pass


class BranchExplosion(RuntimeError):
    pass


class InconsistentODE(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    """``coeff * Delta^delta_exp * Q^q_degree``."""

    q_degree: int
    delta_exp: int
    coeff: Fraction


@dataclass(frozen=True)
class CubicODE:
    id: str
    level: int
    sharp: bool
    kN: int
    delta: str
    P: str
    candidates: tuple[str, ...]
    rhs: tuple[Monomial, ...]

    def __post_init__(self):
        degrees = [m.q_degree for m in self.rhs]
        if len(set(degrees)) != len(degrees) or len(self.rhs) > 4:
            raise InconsistentODE(f"{self.id}: at most one monomial per Q-degree")
        lead = [m for m in self.rhs if m.q_degree == 3]
        if lead != [Monomial(3, 0, Fraction(1))]:
            raise InconsistentODE(f"{self.id}: Q^3 must appear with coefficient 1")
        for m in self.rhs:
            if 4 * m.q_degree + self.kN * m.delta_exp != 12:
                raise InconsistentODE(f"{self.id}: monomial {m} is not of weight 12")

    def coefficient(self, q_degree: int) -> Fraction:
        for m in self.rhs:
            if m.q_degree == q_degree:
                return m.coeff
        return Fraction(0)

    def describe(self) -> str:
        parts = []
        for m in sorted(self.rhs, key=lambda m: -m.q_degree):
            d = "" if m.delta_exp == 0 else "D" if m.delta_exp == 1 else f"D^{m.delta_exp}"
            qd = "" if m.q_degree == 0 else "Q" if m.q_degree == 1 else f"Q^{m.q_degree}"
            mono = "*".join(x for x in (d, qd) if x) or "1"
            c = m.coeff
            if c == 1:
                parts.append(f"+ {mono}")
            else:
                parts.append(f"{'-' if c < 0 else '+'} {abs(c)}*{mono}")
        return "(dQ)^2 = " + " ".join(parts).lstrip("+ ")


def _ode(id, level, sharp, kN, candidates, terms, delta=None, P=None):
    suffix = ".sharp" if sharp else ""
    rhs = [Monomial(3, 0, Fraction(1))] + [Monomial(i, e, Fraction(c)) for i, e, c in terms]
    return CubicODE(
        id=id,
        level=level,
        sharp=sharp,
        kN=kN,
        delta=delta or f"Delta.N{level}{suffix}",
        P=P or f"P.N{level}{suffix}",
        candidates=tuple(c + suffix for c in candidates),
        rhs=tuple(rhs),
    )


_F = Fraction
_E4 = {
    1: ("E4.N1",),
    2: ("E4.N2.cuspinf", "E4.N2.cusp0"),
    3: ("E4.N3.cuspinf", "E4.N3.cusp0"),
    5: ("E4.N5.cuspinf", "E4.N5.cusp0"),
    6: ("E4.N6.cuspinf", "E4.N6.cusp0", "E4.N6.cusp1/2", "E4.N6.cusp1/3"),
}

_CATALOG = (
    _ode("G0.1", 1, False, 12, _E4[1], [(0, 1, -1728)]),
    _ode("G0.2", 2, False, 8, _E4[2], [(1, 1, 64)]),
    _ode("G0.3", 3, False, 6, _E4[3], [(0, 2, _F(729, 4))]),
    _ode("G0.5", 5, False, 4, _E4[5], [(2, 1, _F(-89, 13)), (1, 2, _F(-3500, 169)), (0, 3, _F(-125000, 2197))]),
    _ode("G0.6", 6, False, 4, _E4[6], [(2, 1, _F(-23, 5)), (1, 2, _F(-432, 25)), (0, 3, _F(-1296, 125))]),
    _ode("G0sharp.1", 1, True, 12, _E4[1], [(0, 1, 1728)]),
    _ode("G0sharp.2", 2, True, 8, _E4[2], [(1, 1, -64)]),
    _ode("G0sharp.5", 5, True, 4, _E4[5], [(2, 1, _F(89, 13)), (1, 2, _F(-3500, 169)), (0, 3, _F(125000, 2197))]),
    _ode("G0sharp.6", 6, True, 4, _E4[6], [(2, 1, _F(23, 5)), (1, 2, _F(-432, 25)), (0, 3, _F(1296, 125))]),
    _ode("G0.11", 11, False, 2, ("Q.N11",), [(1, 4, _F(-31, 3)), (0, 6, _F(-2501, 108))]),
    _ode(
        "G0.14", 14, False, 2, ("Q.N14",),
        [(2, 2, _F(-187, 100)), (1, 4, _F(3528, 625)), (0, 6, _F(-3863552, 421875))],
    ),
    _ode(
        "G0.15", 15, False, 2, ("Q.N15",),
        [(2, 2, _F(-209, 104)), (1, 4, _F(-93825, 10816)), (0, 6, _F(860625, 1124864))],
    ),
    _ode(
        "G0.7", 7, False, 4, ("E4.N7.cuspinf", "E4.N7.cusp0"),
        [(2, 1, _F(-17, 10)), (1, 2, _F(-637, 100)), (0, 3, _F(-45619, 1000))],
        delta="Delta.N7", P="P.N7",
    ),
)


def catalog() -> tuple[CubicODE, ...]:
    """The thirteen equations, in a fixed order."""
    return _CATALOG


def get_ode(ode_id: str) -> CubicODE:
    for ode in _CATALOG:
        if ode.id == ode_id:
            return ode
    raise KeyError(ode_id)


def plain_counterpart(ode: CubicODE) -> CubicODE:
    return get_ode(f"G0.{ode.level}") if ode.sharp else ode


def sturm_bound(ode: CubicODE) -> int:
    # weight 12 on an index-mu group: 12 * mu / 12; conjugate groups share mu
    return level_data(ode.level).mu


# ---------------------------------------------------------------------------
# Residuals and verification


def residual(ode: CubicODE, Q: TruncSeries, prec: int) -> TruncSeries:
    """(d_4 Q)^2 - sum c Delta^e Q^i, known to at least ``prec``."""
    if Q.prec < prec:
        raise PrecisionTooLow(f"Q known to {Q.prec}, need {prec}")
    Q = Q.truncate(prec)
    delta = form(ode.delta, prec)
    P = form(ode.P, prec)
    if Q.field != QQ:
        delta, P = delta.to_gaussian(), P.to_gaussian()
    dQ = ramanujan_serre(ode.kN, P, 4, Q)
    out = mul(dQ, dQ)
    for m in ode.rhs:
        term = TruncSeries.one(prec, Q.field)
        for _ in range(m.delta_exp):
            term = mul(term, delta)
        for _ in range(m.q_degree):
            term = mul(term, Q)
        out = out - term * m.coeff
    if out.prec < prec:
        raise PrecisionTooLow(f"residual only known to {out.prec}")
    return out.truncate(prec)


@dataclass(frozen=True)
class VerificationReport:
    ode_id: str
    candidate: str
    sturm_bound: int
    checked_prec: int
    ok: bool
    first_bad: tuple[int, Fraction] | None = None

    def to_json_obj(self) -> dict:
        bad = None if self.first_bad is None else [self.first_bad[0], str(self.first_bad[1])]
        return {
            "id": self.ode_id,
            "candidate": self.candidate,
            "bound": self.sturm_bound,
            "prec": self.checked_prec,
            "ok": self.ok,
            "first_bad": bad,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def check_series(ode: CubicODE, Q: TruncSeries, safety: int | None = None, label: str = "") -> VerificationReport:
    """Check residual coefficients for exponents 0 .. bound + safety."""
    bound = sturm_bound(ode)
    safety = bound if safety is None else safety
    if safety < 0:
        raise ValueError("safety margin must be nonnegative")
    prec = bound + safety + 1
    r = residual(ode, Q, prec)
    bad = None
    if not r.is_zero():
        bad = (r.valuation, r.leading_coefficient())
    return VerificationReport(ode.id, label, bound, prec, bad is None, bad)


def verify(ode: CubicODE, Q_key: str, safety: int | None = None) -> VerificationReport:
    """Verify ``ode`` for the catalog form ``Q_key``; default safety is mu_N."""
    bound = sturm_bound(ode)
    safety = bound if safety is None else safety
    Q = form(Q_key, bound + safety + 1)
    return check_series(ode, Q, safety, Q_key)


def verify_all(odes=None, safety: int | None = None) -> list[VerificationReport]:
    odes = catalog() if odes is None else odes
    return [verify(ode, key, safety) for ode in odes for key in ode.candidates]


# ---------------------------------------------------------------------------
# Power-series solutions


@dataclass
class SolveResult:
    """Outcome of a branch search.

    ``solutions`` are the solutions with ``d_4 Q != 0``.  ``stationary`` holds
    the nonzero solutions with ``d_4 Q == 0``, i.e. ``Q = r * Delta`` with
    ``r`` a root of the curve's cubic; they only occur when Delta has weight 4.
    ``trivial`` is set when the zero series survived.  ``needs_extension``
    lists (index, factor) pairs where a coefficient would be a root of a
    polynomial irreducible over the chosen field, and ``unresolved`` counts
    branches whose coefficients below ``prec`` were not all pinned down.
    """

    ode_id: str
    field: str
    prec: int
    solutions: list[TruncSeries] = field(default_factory=list)
    stationary: list[TruncSeries] = field(default_factory=list)
    needs_extension: list[tuple[int, str]] = field(default_factory=list)
    trivial: bool = False
    unresolved: int = 0


def _domain(field_name: str):
    from sympy.polys.domains import QQ as SQQ, QQ_I

    return SQQ if field_name == QQ else QQ_I


def _to_domain(c, dom, field_name):
    from sympy.polys.domains import QQ as SQQ

    if isinstance(c, GaussianRational):
        re, im = c.re, c.im
    else:
        re, im = Fraction(c), Fraction(0)
    r = SQQ(re.numerator, re.denominator)
    if field_name == QQ:
        return r
    return dom(r, SQQ(im.numerator, im.denominator))


def _from_domain(c, field_name):
    if field_name == QQ:
        return Fraction(int(c.numerator), int(c.denominator))
    return GaussianRational(
        Fraction(int(c.x.numerator), int(c.x.denominator)),
        Fraction(int(c.y.numerator), int(c.y.denominator)),
    )


def _residual_polys(ode: CubicODE, length: int, field_name: str):
    """Residual coefficients r_0 .. r_{length-1} as polynomials in a_0 .. a_{length-1}."""
    from sympy.polys.rings import ring

    dom = _domain(field_name)
    R, *a = ring(",".join(f"a{i}" for i in range(length)), dom)
    delta = [R(_to_domain(c, dom, field_name)) for c in form(ode.delta, length).coefficients(0)]
    P = [R(_to_domain(c, dom, field_name)) for c in form(ode.P, length).coefficients(0)]

    def smul(x, y):
        out = [R.zero] * length
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j in range(length - i):
                if y[j]:
                    out[i + j] += xi * y[j]
        return out

    Q = list(a)
    kq = _to_domain(Fraction(ode.kN, 4), dom, field_name)
    PQ = smul(P, Q)
    dQ = [kq * n * Q[n] - PQ[n] for n in range(length)]
    res = smul(dQ, dQ)
    qpow = {0: [R.one] + [R.zero] * (length - 1), 1: Q}
    qpow[2] = smul(Q, Q)
    qpow[3] = smul(qpow[2], Q)
    for m in ode.rhs:
        term = qpow[m.q_degree]
        for _ in range(m.delta_exp):
            term = smul(term, delta)
        c = _to_domain(m.coeff, dom, field_name)
        res = [r - c * t for r, t in zip(res, term)]
    return R, a, res


def _univariate_roots(p, var_index: int, gens, dom):
    roots, extensions = [], []
    _, factors = p.factor_list()
    x = gens[var_index]
    for f, _mult in factors:
        deg = f.degree(x)
        if deg == 0:
            continue
        if deg == 1:
            c1, c0 = dom.zero, dom.zero
            for mon, c in f.terms():
                if mon[var_index]:
                    c1 = c
                else:
                    c0 = c
            root = -c0 / c1
            if root not in roots:
                roots.append(root)
        else:
            extensions.append(str(f))
    return roots, extensions


def _sort_key(s: TruncSeries):
    key = []
    for n in range(min(s.prec, 6)):
        c = s[n]
        if isinstance(c, GaussianRational):
            key += [c.re, c.im]
        else:
            key += [c, Fraction(0)]
    return tuple(key)


def search_solutions(
    ode: CubicODE, prec: int, field: str = QQ, cap: int = 16, slack: int = 4
) -> SolveResult:
    """Enumerate power-series solutions ``a_0 + a_1 q + ...`` to precision ``prec``.

    The residual's q^n coefficient is a polynomial in a_0 .. a_n.  Equations are
    scanned in order; the first one left in a single unknown is solved exactly
    over ``field`` and the search branches on its roots.  Equations in several
    unknowns wait until enough coefficients are fixed.  ``slack`` extra orders
    are carried so that the coefficients below ``prec`` are pinned down despite
    the lag between a coefficient and the first equation that sees it.
    """
    if prec < 8:
        raise ValueError("solve_series needs prec >= 8")
    if ode.sharp:
        base = search_solutions(plain_counterpart(ode), prec, field, cap, slack)
        base.ode_id = ode.id
        base.solutions = sorted((s.subst_negate() for s in base.solutions), key=_sort_key)
        base.stationary = sorted((s.subst_negate() for s in base.stationary), key=_sort_key)
        return base

    length = prec + slack
    R, gens, res = _residual_polys(ode, length, field)
    dom = R.domain
    result = SolveResult(ode.id, field, prec)
    stack = [({}, [p for p in res if p])]
    seen_ext = set()
    finished = []
    while stack:
        if len(stack) + len(finished) > cap:
            raise BranchExplosion(f"{ode.id}: more than {cap} branches")
        assigned, eqs = stack.pop()
        dead = False
        target = None
        for p in eqs:
            free = {i for mon in p.monoms() for i, e in enumerate(mon) if e}
            if not free:
                dead = True
                break
            if len(free) == 1 and target is None:
                target = (p, free.pop())
        if dead:
            continue
        if target is None:
            finished.append((assigned, eqs))
            continue
        p, i = target
        roots, exts = _univariate_roots(p, i, gens, dom)
        for f in exts:
            if (i, f) not in seen_ext:
                seen_ext.add((i, f))
                result.needs_extension.append((i, f))
        for root in reversed(roots):
            new_eqs = []
            for e in eqs:
                s = e.subs([(gens[i], root)]) if e.degree(gens[i]) > 0 else e
                if s:
                    new_eqs.append(s)
            stack.append(({**assigned, i: root}, new_eqs))

    for assigned, eqs in finished:
        if any(i not in assigned for i in range(prec)):
            result.unresolved += 1
            continue
        cs = [_from_domain(assigned[i], field) for i in range(prec)]
        s = TruncSeries(cs, 0, prec, field)
        if s.is_zero():
            result.trivial = True
        elif _derivative(ode, s).is_zero():
            result.stationary.append(s)
        else:
            result.solutions.append(s)
    result.solutions.sort(key=_sort_key)
    result.stationary.sort(key=_sort_key)
    return result


def _derivative(ode: CubicODE, Q: TruncSeries) -> TruncSeries:
    P = form(ode.P, Q.prec)
    if Q.field != QQ:
        P = P.to_gaussian()
    return ramanujan_serre(ode.kN, P, 4, Q)


def label_solution(ode: CubicODE, s: TruncSeries) -> str | None:
    """Catalog key of the candidate Eisenstein series equal to ``s``, if any."""
    for key in ode.candidates:
        c = form(key, s.prec)
        if s.field != QQ:
            c = c.to_gaussian()
        if c == s:
            return key
    return None


def solve_series(ode: CubicODE, prec: int, field: str = QQ, cap: int = 16) -> list[TruncSeries]:
    """Nonzero power-series solutions of ``ode`` to precision ``prec``."""
    return search_solutions(ode, prec, field, cap).solutions
