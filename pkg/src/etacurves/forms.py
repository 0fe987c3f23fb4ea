"""q-expansions of the eta products, Eisenstein series and derived forms.

Every builder takes an absolute precision ``prec`` and returns a
:class:`~etacurves.qseries.TruncSeries` known for all exponents ``< prec``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Callable, Mapping

from .arith import ADMISSIBLE, divisors, level_data, legendre7, moebius, prime_divisors, sigma_table
from .qseries import TruncSeries, log_deriv, mul, nth_root, qderiv


class FormError(ValueError):
    pass


class FractionalValuation(FormError):
    pass


class NotAdmissible(FormError):
    pass


class UnsupportedWeight(FormError):
    pass


class InvalidCusp(FormError):
    pass


class UnsupportedLevel(FormError):
    pass


class UnknownKey(KeyError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# ---------------------------------------------------------------------------
# Eta quotients


@dataclass(frozen=True)
class EtaQuotient:
    """``prod_d eta(d tau)^{r_d}`` stored as a sorted tuple of (d, r_d)."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, terms: Mapping[int, int]) -> "EtaQuotient":
        clean = tuple(sorted((int(d), int(r)) for d, r in terms.items() if r))
        if any(d < 1 for d, _ in clean):
            raise ValueError("eta scales must be positive")
        return cls(clean)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.terms), 2)

    @property
    def valuation24(self) -> int:
        """24 times the q-valuation."""
        return sum(d * r for d, r in self.terms)

    def scaled(self, m: int) -> "EtaQuotient":
        """The quotient evaluated at ``m tau``."""
        return EtaQuotient.make({d * m: r for d, r in self.terms})

    def power(self, num: int, den: int = 1) -> "EtaQuotient":
        out = {}
        for d, r in self.terms:
            e = Fraction(r * num, den)
            if e.denominator != 1:
                raise FormError(f"exponent {r}*{num}/{den} is not integral")
            out[d] = int(e)
        return EtaQuotient.make(out)

    def to_json(self) -> str:
        return json.dumps({str(d): r for d, r in self.terms})

    @classmethod
    def from_json(cls, text: str) -> "EtaQuotient":
        return cls.make({int(d): r for d, r in json.loads(text).items()})

    def __str__(self):
        num = [f"eta({_scale(d)})" + (f"^{r}" if r != 1 else "") for d, r in self.terms if r > 0]
        den = [f"eta({_scale(d)})" + (f"^{-r}" if r != -1 else "") for d, r in self.terms if r < 0]
        s = "*".join(num) or "1"
        if den:
            s += " / (" + "*".join(den) + ")"
        return s


def _scale(d: int) -> str:
    return "tau" if d == 1 else f"{d}tau"


@lru_cache(maxsize=None)
def euler_product(prec: int) -> TruncSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number theorem."""
    cs = [0] * max(prec, 0)
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        hit = False
        for g in {k * (3 * k - 1) // 2, k * (3 * k + 1) // 2}:
            if g < prec:
                cs[g] = sign
                hit = True
        if not hit:
            break
        k += 1
    return TruncSeries(cs, 0, prec)


@lru_cache(maxsize=None)
def eta_expand(e: EtaQuotient, prec: int) -> TruncSeries:
    """q-expansion of an eta quotient with integral q-valuation."""
    if e.valuation24 % 24:
        raise FractionalValuation(f"{e}: valuation {e.valuation24}/24 is not an integer")
    v = e.valuation24 // 24
    rel = prec - v
    if rel <= 0:
        return TruncSeries.zero(prec)
    out = TruncSeries.one(rel)
    for d, r in e.terms:
        base = euler_product(_ceil_div(rel, d)).subst_scale(d).truncate(rel)
        out = mul(out, base**r)
    return out.shift(v)


# ---------------------------------------------------------------------------
# Delta_N and related objects


def _require_admissible(N: int):
    if N not in ADMISSIBLE:
        raise NotAdmissible(f"level {N} is not one of {ADMISSIBLE}")


def delta_eta(N: int) -> EtaQuotient:
    _require_admissible(N)
    r = 24 // level_data(N).mu
    return EtaQuotient.make({d: r for d in divisors(N)})


def delta_N(N: int, prec: int) -> TruncSeries:
    return eta_expand(delta_eta(N), prec)


def delta_N_sharp(N: int, prec: int) -> TruncSeries:
    """-Delta_N(tau + 1/2)."""
    return -delta_N(N, prec).subst_negate()


def sharp_eta(e: EtaQuotient) -> EtaQuotient:
    """Eta quotient for ``e(tau + 1/2)`` up to a root of unity.

    Uses eta(tau + 1/2) ~ eta(2tau)^3 / (eta(tau) eta(4tau)); even scales only
    pick up a phase.
    """
    out: dict[int, int] = {}
    for d, r in e.terms:
        if d % 2:
            for dd, rr in ((2 * d, 3 * r), (d, -r), (4 * d, -r)):
                out[dd] = out.get(dd, 0) + rr
        else:
            out[d] = out.get(d, 0) + r
    return EtaQuotient.make(out)


# Delta_N^sharp as listed in the table of initial eta products.
SHARP_DELTA_TABLE = {
    1: EtaQuotient.make({1: -24, 2: 72, 4: -24}),
    2: EtaQuotient.make({1: -8, 2: 32, 4: -8}),
    5: EtaQuotient.make({1: -4, 2: 12, 4: -4, 5: -4, 10: 12, 20: -4}),
    6: EtaQuotient.make({1: -2, 2: 8, 3: -2, 4: -2, 6: 8, 12: -2}),
}


# ---------------------------------------------------------------------------
# Eisenstein series


_LEVEL1 = {2: -24, 4: 240, 6: -504}


@lru_cache(maxsize=None)
def eisenstein_level1(k: int, prec: int) -> TruncSeries:
    if k not in _LEVEL1:
        raise UnsupportedWeight(f"no level-1 Eisenstein series of weight {k} here")
    if prec <= 0:
        return TruncSeries.zero(prec)
    c = _LEVEL1[k]
    sig = sigma_table(k - 1, prec)
    return TruncSeries([1] + [c * s for s in sig[1:]], 0, prec)


def _scaled(k: int, d: int, prec: int) -> TruncSeries:
    """E_k(d tau) to ``prec``."""
    return eisenstein_level1(k, _ceil_div(prec, d)).subst_scale(d).truncate(prec)


@lru_cache(maxsize=None)
def P_N(N: int, prec: int) -> TruncSeries:
    """(1/mu_N) sum_{d | N} d E_2(d tau), the log-derivative of Delta_N."""
    _require_admissible(N)
    mu = level_data(N).mu
    out = TruncSeries.zero(prec)
    for d in divisors(N):
        out = out + _scaled(2, d, prec) * d
    return out * Fraction(1, mu)


@lru_cache(maxsize=None)
def P_N_sharp(N: int, prec: int) -> TruncSeries:
    return log_deriv(delta_N_sharp(N, prec + 1))


def ramanujan_serre(kN, P: TruncSeries, k, f: TruncSeries) -> TruncSeries:
    """(kN/4) q df/dq - (k/4) P f."""
    return qderiv(f) * Fraction(kN) / 4 - mul(P, f) * Fraction(k) / 4


def c_N(N: int) -> Fraction:
    return 1 / prod((1 - Fraction(1, p**4) for p in prime_divisors(N)), start=Fraction(1))


CUSPS = ("inf", "0", "1/2", "1/3")


@lru_cache(maxsize=None)
def eisenstein4_cusp(N: int, cusp: str, prec: int) -> TruncSeries:
    """Weight-4 Eisenstein series on Gamma_0(N) attached to ``cusp``.

    ``cusp`` is ``"inf"`` or ``"0"`` for any N, and ``"1/2"`` or ``"1/3"`` for N = 6.
    """
    cN = c_N(N)
    if cusp == "inf":
        out = TruncSeries.zero(prec)
        for d in divisors(N):
            mu = moebius(d)
            if mu:
                out = out + _scaled(4, N // d, prec) * Fraction(mu, d**4)
        return out * cN
    if cusp == "0":
        out = TruncSeries.zero(prec)
        for d in divisors(N):
            mu = moebius(d)
            if mu:
                out = out + _scaled(4, d, prec) * mu
        return out * (cN / N**2)
    if N == 6 and cusp == "1/2":
        e = eisenstein4_cusp(2, "inf", prec)
        e3 = eisenstein4_cusp(2, "inf", _ceil_div(prec, 3)).subst_scale(3).truncate(prec)
        return (e - e3) * Fraction(3**2, 3**4 - 1)
    if N == 6 and cusp == "1/3":
        e = eisenstein4_cusp(3, "inf", prec)
        e2 = eisenstein4_cusp(3, "inf", _ceil_div(prec, 2)).subst_scale(2).truncate(prec)
        return (e - e2) * Fraction(2**2, 2**4 - 1)
    raise InvalidCusp(f"cusp {cusp!r} not available at level {N}")


@lru_cache(maxsize=None)
def E2m(m: int, prec: int) -> TruncSeries:
    """(m E_2(m tau) - E_2(tau)) / (m - 1)."""
    if m < 2:
        raise ValueError("E2m needs m >= 2")
    return (_scaled(2, m, prec) * m - eisenstein_level1(2, prec)) * Fraction(1, m - 1)


def _four_term_e4(N: int, p1: int, p2: int, prec: int) -> TruncSeries:
    # (N^4 E4(N) - p2^4 E4(p2) - p1^4 E4(p1) + E4) / ((p2^4 - 1)(p1^4 - 1)), N = p1 p2
    out = (
        _scaled(4, N, prec) * N**4
        - _scaled(4, p2, prec) * p2**4
        - _scaled(4, p1, prec) * p1**4
        + eisenstein_level1(4, prec)
    )
    return out * Fraction(1, (p2**4 - 1) * (p1**4 - 1))


@lru_cache(maxsize=None)
def special_Q(N: int, prec: int) -> TruncSeries:
    """Corrected weight-4 forms for the weight-2 levels 11, 14, 15."""
    if N not in (11, 14, 15):
        raise UnsupportedLevel(f"no corrected form at level {N}")
    delta = delta_N(N, prec)
    if N == 11:
        return (
            eisenstein4_cusp(11, "inf", prec)
            - mul(E2m(11, prec), delta) * Fraction(121, 61)
            - (delta * delta) * Fraction(1274, 915)
        )
    if N == 14:
        e4 = _four_term_e4(14, 2, 7, prec)
        corr = E2m(14, prec) * 1001 - E2m(7, prec) * 168 + E2m(2, prec) * 73
        return e4 - mul(corr, delta) * Fraction(1, 900)
    e4 = _four_term_e4(15, 3, 5, prec)
    corr = E2m(15, prec) * 210 - E2m(5, prec) * 10 + E2m(3, prec) * 9
    return e4 - mul(corr, delta) * Fraction(1, 208)


@lru_cache(maxsize=None)
def E1_leg7(prec: int) -> TruncSeries:
    """1 + 2 sum_n sum_{d | n} (d/7) q^n."""
    cs = [0] * prec
    for d in range(1, prec):
        chi = legendre7(d)
        if chi:
            for m in range(d, prec, d):
                cs[m] += 2 * chi
    if prec > 0:
        cs[0] = 1
    return TruncSeries(cs, 0, prec)


@lru_cache(maxsize=None)
def delta7(prec: int) -> TruncSeries:
    return mul(E1_leg7(prec), eta_expand(EtaQuotient.make({1: 3, 7: 3}), prec))


J5_ETA = EtaQuotient.make({1: 6, 5: -6})


def j5(prec: int) -> TruncSeries:
    """Hauptmodul eta(tau)^6 / eta(5 tau)^6 = 1/q - 6 + 9q + ..."""
    return eta_expand(J5_ETA, prec)


# ---------------------------------------------------------------------------
# Closed-form identities; each returns a residual that should vanish


def classical_residual(prec: int) -> TruncSeries:
    """E4^3 - E6^2 - 1728 Delta."""
    e4, e6 = eisenstein_level1(4, prec), eisenstein_level1(6, prec)
    return e4**3 - e6**2 - delta_N(1, prec) * 1728


def sharp3_residual(prec: int) -> TruncSeries:
    """Cube roots: D#(3 tau) - D(3 tau) - 4 D(12 tau), with D = Delta_3."""
    base = _ceil_div(prec, 3) + 1
    a = nth_root(delta_N_sharp(3, base).subst_scale(3), 3).truncate(prec)
    b = nth_root(delta_N(3, base).subst_scale(3), 3)
    c = b.subst_scale(4).truncate(prec)
    return a - b.truncate(prec) - c * 4


def j5_residual(prec: int) -> TruncSeries:
    """j5 - (E4 at infinity on Gamma_0(5)) / Delta_5 + 125/13."""
    quot = eisenstein4_cusp(5, "inf", prec + 2) / delta_N(5, prec + 2)
    return j5(prec) - quot.truncate(prec) + Fraction(125, 13)


IDENTITIES: dict[str, Callable[[int], TruncSeries]] = {
    "classical": classical_residual,
    "sharp3": sharp3_residual,
    "j5closed": j5_residual,
}


# ---------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class FormCatalogEntry:
    name: str
    group: str
    weight: int
    builder: Callable[[int], TruncSeries] = field(compare=False, repr=False)

    def build(self, prec: int) -> TruncSeries:
        return self.builder(prec)


def group_tag(N: int, sharp: bool = False) -> str:
    return f"G0sharp.{N}" if sharp else f"G0.{N}"


def _sharpen(fn):
    return lambda prec: fn(prec).subst_negate()


def _build_catalog() -> dict[str, FormCatalogEntry]:
    entries: list[FormCatalogEntry] = []
    add = entries.append
    add(FormCatalogEntry("E2", "G0.1", 2, lambda p: eisenstein_level1(2, p)))
    add(FormCatalogEntry("E4", "G0.1", 4, lambda p: eisenstein_level1(4, p)))
    add(FormCatalogEntry("E6", "G0.1", 6, lambda p: eisenstein_level1(6, p)))
    for N in ADMISSIBLE:
        k = int(level_data(N).k)
        add(FormCatalogEntry(f"Delta.N{N}", group_tag(N), k, lambda p, N=N: delta_N(N, p)))
        add(FormCatalogEntry(f"Delta.N{N}.sharp", group_tag(N, True), k, lambda p, N=N: delta_N_sharp(N, p)))
        add(FormCatalogEntry(f"P.N{N}", group_tag(N), 2, lambda p, N=N: P_N(N, p)))
        add(FormCatalogEntry(f"P.N{N}.sharp", group_tag(N, True), 2, lambda p, N=N: P_N_sharp(N, p)))
    for N in (1, 2, 3, 5, 6, 7, 11):
        cusps = ("inf",) if N == 1 else CUSPS if N == 6 else ("inf", "0")
        for c in cusps:
            key = "E4.N1" if N == 1 else f"E4.N{N}.cusp{c}"
            fn = lambda p, N=N, c=c: eisenstein4_cusp(N, c, p)
            add(FormCatalogEntry(key, group_tag(N), 4, fn))
            if N in (1, 2, 5, 6):
                add(FormCatalogEntry(key + ".sharp", group_tag(N, True), 4, _sharpen(fn)))
    for m in (2, 3, 5, 7, 11, 14, 15):
        add(FormCatalogEntry(f"E2.m{m}", group_tag(m), 2, lambda p, m=m: E2m(m, p)))
    for N in (11, 14, 15):
        add(FormCatalogEntry(f"Q.N{N}", group_tag(N), 4, lambda p, N=N: special_Q(N, p)))
    add(FormCatalogEntry("E1.leg7", "G0.7", 1, E1_leg7))
    add(FormCatalogEntry("Delta.N7", "G0.7", 4, delta7))
    add(FormCatalogEntry("P.N7", "G0.7", 2, lambda p: log_deriv(delta7(p + 1))))
    add(FormCatalogEntry("j5", "G0.5", 0, j5))
    return {e.name: e for e in entries}


CATALOG: dict[str, FormCatalogEntry] = _build_catalog()


def form(key: str, prec: int) -> TruncSeries:
    """Expand the catalog entry ``key`` to precision ``prec``."""
    try:
        entry = CATALOG[key]
    except KeyError:
        raise UnknownKey(key) from None
    return entry.build(prec)
