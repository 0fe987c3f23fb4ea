"""Weight-2 eta-product newforms attached to the catalog curves."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import level_data, primes_up_to
from .ellcurve import ap as curve_ap
from .forms import EtaQuotient, delta_eta, eta_expand, group_tag
from .qseries import TruncSeries


class NewformError(ValueError):
    pass


class UnknownGroup(NewformError, KeyError):
    pass


class NonIntegerCoefficient(NewformError):
    pass


class LevelMismatch(NewformError):
    pass


@dataclass(frozen=True)
class NewformSpec:
    group: str
    eta: EtaQuotient
    level: int

    def __post_init__(self):
        if self.eta.weight != 2:
            raise NewformError(f"{self.eta} has weight {self.eta.weight}")
        if self.eta.valuation24 != 24:
            raise NewformError(f"{self.eta} does not start at q^1")

    def expansion(self, prec: int) -> TruncSeries:
        return eta_expand(self.eta, prec)


_E = EtaQuotient.make

# Sharp-group newforms as tabulated alongside the minimal models.
SHARP_NEWFORMS = {
    1: _E({6: -4, 12: 12, 24: -4}),
    2: _E({4: -2, 8: 8, 16: -2}),
    5: _E({2: -2, 4: 6, 8: -2, 10: -2, 20: 6, 40: -2}),
    6: _E({2: -1, 4: 4, 6: -1, 8: -1, 12: 4, 24: -1}),
}

# Plain-group newforms as tabulated; the substitution rule must reproduce these.
PLAIN_NEWFORMS = {
    1: _E({6: 4}),
    2: _E({4: 2, 8: 2}),
    3: _E({3: 2, 9: 2}),
    5: _E({2: 2, 10: 2}),
    6: _E({2: 1, 4: 1, 6: 1, 12: 1}),
}

THEOREM_LEVELS = (1, 2, 3, 5, 6)
SPECIAL_LEVELS = (11, 14, 15)


def substitution_rule(base: EtaQuotient, kN: Fraction) -> EtaQuotient:
    """base((kN/2) tau)^(2/kN) as an eta quotient."""
    half = Fraction(kN) / 2
    if half.denominator != 1:
        raise NewformError(f"k_N = {kN} is odd")
    m = int(half)
    return base.scaled(m).power(1, m)


def _parse_group(group: str) -> tuple[int, bool]:
    for prefix, sharp in (("G0sharp.", True), ("G0.", False)):
        if group.startswith(prefix):
            try:
                return int(group[len(prefix):]), sharp
            except ValueError:
                break
    raise UnknownGroup(group)


def newform_for(group: str) -> NewformSpec:
    N, sharp = _parse_group(group)
    if N in SPECIAL_LEVELS and not sharp:
        return NewformSpec(group, delta_eta(N), N)
    if N not in THEOREM_LEVELS or (sharp and N not in SHARP_NEWFORMS):
        raise UnknownGroup(f"no eta-product newform is attached to {group}")
    k = level_data(N).k
    if sharp:
        level = int(k * k * N) if N % 2 else int(k * k * N / 2)
        return NewformSpec(group, SHARP_NEWFORMS[N], level)
    return NewformSpec(group, substitution_rule(delta_eta(N), k), int(k * k * N / 4))


def newform_groups() -> list[str]:
    """Groups with a newform claim, in catalog order."""
    return (
        [group_tag(N) for N in THEOREM_LEVELS]
        + [group_tag(N, True) for N in sorted(SHARP_NEWFORMS)]
        + [group_tag(N) for N in SPECIAL_LEVELS]
    )


def coefficient(nf: NewformSpec, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    c = nf.expansion(n + 1)[n]
    c = Fraction(c)
    if c.denominator != 1:
        raise NonIntegerCoefficient(f"coefficient {n} of {nf.eta} is {c}")
    return int(c)


def coefficients(nf: NewformSpec, prec: int) -> list[int]:
    """[a_0, ..., a_{prec-1}] as integers."""
    s = nf.expansion(prec)
    out = []
    for n in range(prec):
        c = Fraction(s[n])
        if c.denominator != 1:
            raise NonIntegerCoefficient(f"coefficient {n} of {nf.eta} is {c}")
        out.append(int(c))
    return out


@dataclass
class ModularityReport:
    group: str
    level: int
    pmax: int
    matches: int = 0
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json_obj(self) -> dict:
        return {
            "group": self.group,
            "level": self.level,
            "pmax": self.pmax,
            "matches": self.matches,
            "mismatches": self.mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def modularity_check(report, nf: NewformSpec, pmax: int = 97, coeffs=None) -> ModularityReport:
    """Compare a_p of the curve with the newform at good primes <= pmax.

    ``coeffs`` overrides the newform expansion (the list [a_0, a_1, ...]).
    """
    if nf.level != report.conductor:
        raise LevelMismatch(f"newform level {nf.level} != conductor {report.conductor}")
    good = [p for p in primes_up_to(pmax) if nf.level % p]
    if coeffs is None:
        coeffs = coefficients(nf, pmax + 1)
    out = ModularityReport(nf.group, nf.level, pmax)
    for p in good:
        a = report.ap.get(p)
        if a is None:
            a = curve_ap(report.minimal, p)
        if coeffs[p] == a:
            out.matches += 1
        else:
            out.mismatches.append({"p": p, "curve": a, "newform": coeffs[p]})
    return out
