"""Elliptic curves over Q: models, conductors, traces of Frobenius, twists."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from sympy import factorint

from .arith import primes_up_to


class CurveError(ArithmeticError):
    pass


class SingularCurve(CurveError):
    pass


class BadReduction(CurveError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @classmethod
    def from_ainvs(cls, ainvs) -> "WeierstrassCurve":
        return cls(*ainvs)

    @classmethod
    def from_c4c6(cls, c4, c6) -> "WeierstrassCurve":
        """y^2 = x^3 - 27 c4 x - 54 c6, which has invariants (6^4 c4, 6^6 c6)."""
        return cls(0, 0, 0, -27 * _frac(c4), -54 * _frac(c6))

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        d = self.discriminant
        if d == 0:
            raise SingularCurve("j-invariant of a singular cubic")
        return self.c4**3 / d

    def is_singular(self) -> bool:
        return self.discriminant == 0

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def int_ainvs(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise CurveError("model is not integral")
        return tuple(int(a) for a in self.ainvs)

    def change_coordinates(self, u=1, r=0, s=0, t=0) -> "WeierstrassCurve":
        """Model for x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = map(_frac, (u, r, s, t))
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassCurve(
            (a1 + 2 * s) / u,
            (a2 - s * a1 + 3 * r - s * s) / u**2,
            (a3 + r * a1 + 2 * t) / u**3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
            (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
        )

    def __str__(self):
        lhs = "y^2"
        if self.a1:
            lhs += _signed(self.a1, "xy")
        if self.a3:
            lhs += _signed(self.a3, "y")
        rhs = "x^3"
        for c, mono in ((self.a2, "x^2"), (self.a4, "x"), (self.a6, "")):
            if c:
                rhs += _signed(c, mono)
        return f"{lhs} = {rhs}"


def _signed(c: Fraction, mono: str) -> str:
    sign = " - " if c < 0 else " + "
    mag = abs(c)
    if mono and mag == 1:
        return sign + mono
    return sign + str(mag) + mono


def _val(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer; a large sentinel for 0."""
    if x == 0:
        return 10**9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _frac_val(x: Fraction, p: int) -> int:
    return _val(x.numerator, p) - _val(x.denominator, p)


# ---------------------------------------------------------------------------
# Models


def integral_model(E: WeierstrassCurve) -> WeierstrassCurve:
    """Scale a_i by u^i with the least positive integer u that clears denominators."""
    if E.is_integral():
        return E
    need: dict[int, int] = {}
    for i, a in zip((1, 2, 3, 4, 6), E.ainvs):
        for p, e in factorint(a.denominator).items():
            need[p] = max(need.get(p, 0), -(-e // i))
    u = 1
    for p, e in need.items():
        u *= p**e
    return E.change_coordinates(u=Fraction(1, u))


def _kraus_ok_at_2(c4: int, c6: int) -> bool:
    return c6 % 4 == 3 or (c4 % 16 == 0 and c6 % 32 in (0, 8))


def _model_from_invariants(c4: int, c6: int) -> WeierstrassCurve:
    """The reduced integral model (a1, a3 in {0,1}, a2 in {-1,0,1}) with these c4, c6."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise CurveError(f"invariants ({c4}, {c6}) are not those of an integral model")
    a1 = b2 % 2
    a3 = b6 % 2
    return WeierstrassCurve(a1, (b2 - a1) // 4, a3, (b4 - a1 * a3) // 2, (b6 - a3) // 4)


def minimal_model(E: WeierstrassCurve) -> WeierstrassCurve:
    """Global minimal model in reduced form (Laska-Kraus-Connell)."""
    if E.is_singular():
        raise SingularCurve(str(E))
    Ei = integral_model(E)
    c4, c6, disc = int(Ei.c4), int(Ei.c6), int(Ei.discriminant)
    g = gcd(gcd(c4, c6), disc)
    u = 1
    for p in sorted(factorint(abs(g))):
        d = min(_val(c4, p) // 4, _val(c6, p) // 6, _val(disc, p) // 12)
        if d == 0:
            continue
        if p == 2:
            if not _kraus_ok_at_2(c4 // 2 ** (4 * d), c6 // 2 ** (6 * d)):
                d -= 1
        elif p == 3:
            if _val(c6, 3) == 6 * d + 2:
                d -= 1
        u *= p**d
    return _model_from_invariants(c4 // u**4, c6 // u**6)


# ---------------------------------------------------------------------------
# Tate's algorithm


@dataclass(frozen=True)
class LocalData:
    p: int
    f: int
    kodaira: str
    disc_valuation: int

    def to_json_obj(self) -> dict:
        return {"p": self.p, "f_p": self.f, "kodaira": self.kodaira}


def _tr(a, r=0, s=0, t=0):
    """Integral coordinate change with u = 1 on a tuple of ints."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _disc(a) -> int:
    return int(WeierstrassCurve(*a).discriminant)


def _inv(x: int, m: int) -> int:
    return pow(x % m, -1, m)


def _singular_point(a, p: int) -> tuple[int, int]:
    a1, a2, a3, a4, a6 = a
    if p <= 3:
        for x, y in product(range(p), repeat=2):
            f = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
            fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
            fy = 2 * y + a1 * x + a3
            if f % p == 0 and fx % p == 0 and fy % p == 0:
                return x, y
        raise CurveError(f"no singular point mod {p}")
    E = WeierstrassCurve(*a)
    b2, c4, c6 = int(E.b2), int(E.c4), int(E.c6)
    if c4 % p == 0:
        x = (-b2 * _inv(12, p)) % p
    else:
        x = (-(c6 + b2 * c4) * _inv(12 * c4, p)) % p
    y = (-(a1 * x + a3) * _inv(2, p)) % p
    return x, y


def _cubic_roots(b: int, c: int, d: int, p: int) -> tuple[str, int | None]:
    """Root structure of T^3 + bT^2 + cT + d mod p: ('distinct'|'double'|'triple', root)."""
    disc = b * b * c * c - 4 * c**3 - 4 * b**3 * d - 27 * d * d + 18 * b * c * d
    if disc % p:
        return "distinct", None
    if p == 3:
        if b % 3 == 0 and c % 3 == 0:
            return "triple", (-d) % 3
    else:
        rho = (-b * _inv(3, p)) % p
        if (c - 3 * rho * rho) % p == 0 and (d + rho**3) % p == 0:
            return "triple", rho
    if p <= 3:
        for x in range(p):
            if (x**3 + b * x * x + c * x + d) % p == 0 and (3 * x * x + 2 * b * x + c) % p == 0:
                return "double", x
        raise CurveError("double root not found")
    rho = ((b * c - 9 * d) * _inv(2 * (3 * c - b * b), p)) % p
    return "double", rho


def _quad_double_root(a: int, b: int, c: int, p: int) -> int | None:
    """Double root of aX^2 + bX + c mod p (a a unit), or None if the roots are distinct."""
    if p == 2:
        if b % 2:
            return None
        return (c * a) % 2
    if (b * b - 4 * a * c) % p:
        return None
    return (-b * _inv(2 * a, p)) % p


def tate(E: WeierstrassCurve, p: int) -> LocalData:
    """Kodaira symbol and conductor exponent at p of an integral model."""
    a = E.int_ainvs()
    while True:
        disc = _disc(a)
        if disc == 0:
            raise SingularCurve(str(E))
        n = _val(disc, p)
        if n == 0:
            return LocalData(p, 0, "I0", 0)
        x0, y0 = _singular_point(a, p)
        a = _tr(a, r=x0, t=y0)
        a1, a2, a3, a4, a6 = a
        b2 = a1 * a1 + 4 * a2
        if b2 % p:
            return LocalData(p, 1, f"I{n}", n)
        if _val(a6, p) < 2:
            return LocalData(p, n, "II", n)
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        if _val(b8, p) < 3:
            return LocalData(p, n - 1, "III", n)
        b6 = a3 * a3 + 4 * a6
        if _val(b6, p) < 3:
            return LocalData(p, n - 2, "IV", n)

        # p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            s = (-a1 * _inv(2, p)) % p
            t = (-a3 * _inv(2, p * p)) % (p * p)
        a = _tr(a, s=s, t=t)
        a1, a2, a3, a4, a6 = a
        kind, rho = _cubic_roots(a2 // p, a4 // p**2, a6 // p**3, p)
        if kind == "distinct":
            return LocalData(p, n - 4, "I0*", n)

        if kind == "double":
            a = _tr(a, r=p * rho)
            m = 1
            ky, kx = 2, 3  # a3 / a4 exponents examined at the next y- / x-stage
            while True:
                a1, a2, a3, a4, a6 = a
                if m % 2:
                    # Y^2 + (a3/p^ky) Y - a6/p^(2ky)
                    root = _quad_double_root(1, a3 // p**ky, -(a6 // p ** (2 * ky)), p)
                    if root is None:
                        break
                    a = _tr(a, t=root * p**ky)
                    ky += 1
                else:
                    # (a2/p) X^2 + (a4/p^kx) X + a6/p^(2kx-1)
                    root = _quad_double_root(a2 // p, a4 // p**kx, a6 // p ** (2 * kx - 1), p)
                    if root is None:
                        break
                    a = _tr(a, r=root * p ** (kx - 1))
                    kx += 1
                m += 1
            return LocalData(p, n - 4 - m, f"I{m}*", n)

        # triple root
        a = _tr(a, r=p * rho)
        a1, a2, a3, a4, a6 = a
        root = _quad_double_root(1, a3 // p**2, -(a6 // p**4), p)
        if root is None:
            return LocalData(p, n - 6, "IV*", n)
        a = _tr(a, t=root * p**2)
        a1, a2, a3, a4, a6 = a
        if _val(a4, p) < 4:
            return LocalData(p, n - 7, "III*", n)
        if _val(a6, p) < 6:
            return LocalData(p, n - 8, "II*", n)
        a = (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)


@dataclass(frozen=True)
class ConductorData:
    conductor: int
    local: tuple[LocalData, ...]


def conductor_data(E: WeierstrassCurve) -> ConductorData:
    if E.is_singular():
        raise SingularCurve(str(E))
    Em = minimal_model(E)
    disc = int(Em.discriminant)
    local = tuple(tate(Em, p) for p in sorted(factorint(abs(disc))))
    N = 1
    for ld in local:
        N *= ld.p**ld.f
    return ConductorData(N, local)


def conductor(E: WeierstrassCurve) -> int:
    return conductor_data(E).conductor


# ---------------------------------------------------------------------------
# Point counting


def ap(E: WeierstrassCurve, p: int) -> int:
    """p + 1 - #E(F_p) for a prime of good reduction, via an O(p) x-sweep."""
    Em = minimal_model(E)
    a1, a2, a3, a4, a6 = Em.int_ainvs()
    if int(Em.discriminant) % p == 0:
        raise BadReduction(f"p = {p} divides the minimal discriminant")
    if p == 2:
        count = 1
        for x, y in product(range(2), repeat=2):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                count += 1
        return p + 1 - count
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6 = int(Em.b2) % p, int(Em.b4) % p, int(Em.b6) % p
    chi = [-1] * p
    chi[0] = 0
    for y in range(1, (p + 1) // 2):
        chi[y * y % p] = 1
    total = 0
    for x in range(p):
        total += chi[(((4 * x + b2) * x + 2 * b4) * x + b6) % p]
    return -total


# ---------------------------------------------------------------------------
# Twists


def quadratic_twist(E: WeierstrassCurve, d: int) -> WeierstrassCurve:
    return minimal_model(WeierstrassCurve.from_c4c6(d * d * E.c4, d**3 * E.c6))


def quartic_twist(E: WeierstrassCurve, d: int) -> WeierstrassCurve:
    """Twist of a j = 1728 curve y^2 = x^3 + Ax to y^2 = x^3 + dAx."""
    if E.c6 != 0:
        raise CurveError("quartic twists need j = 1728")
    return minimal_model(WeierstrassCurve.from_c4c6(d * E.c4, 0))


@dataclass(frozen=True)
class TwistRelation:
    kind: str  # "isomorphic", "quadratic", "quartic" or "unrelated"
    d: int | None = None

    def __str__(self):
        return self.kind if self.d is None else f"{self.kind}({self.d})"


def _signed_candidates(primes, max_exp):
    out = []
    for exps in product(range(max_exp + 1), repeat=len(primes)):
        m = 1
        for p, e in zip(primes, exps):
            m *= p**e
        out += [m, -m]
    out = sorted(set(out), key=lambda d: (abs(d), d < 0))
    return [d for d in out if d != 1]


def twist_relation(E1: WeierstrassCurve, E2: WeierstrassCurve) -> TwistRelation:
    """Classify E2 relative to E1 among twists by d built from primes of 6 N1 N2."""
    m1, m2 = minimal_model(E1), minimal_model(E2)
    if m1 == m2:
        return TwistRelation("isomorphic")
    if m1.j != m2.j:
        return TwistRelation("unrelated")
    primes = sorted(factorint(6 * conductor(m1) * conductor(m2)))
    for d in _signed_candidates(primes, 1):
        if quadratic_twist(m1, d) == m2:
            return TwistRelation("quadratic", d)
    if m1.j == 1728:
        for d in _signed_candidates(primes, 3):
            if quartic_twist(m1, d) == m2:
                return TwistRelation("quartic", d)
    return TwistRelation("unrelated")


# ---------------------------------------------------------------------------
# Curves attached to the differential equations


def from_ode(ode) -> WeierstrassCurve:
    """y^2 = x^3 + c2 x^2 + c1 x + c0, the right-hand side with Delta set to 1."""
    return WeierstrassCurve(0, ode.coefficient(2), 0, ode.coefficient(1), ode.coefficient(0))


@dataclass
class CurveReport:
    group: str
    initial: WeierstrassCurve
    minimal: WeierstrassCurve
    conductor: int
    local: tuple[LocalData, ...]
    ap: dict[int, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "group": self.group,
            "initial": [str(a) for a in self.initial.ainvs],
            "minimal": [int(a) for a in self.minimal.ainvs],
            "conductor": self.conductor,
            "bad_primes": [ld.to_json_obj() for ld in self.local],
            "ap": {str(p): v for p, v in self.ap.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def curve_report(ode, pmax: int = 97) -> CurveReport:
    initial = from_ode(ode)
    minimal = minimal_model(initial)
    cd = conductor_data(minimal)
    bad = {ld.p for ld in cd.local}
    aps = {p: ap(minimal, p) for p in primes_up_to(pmax) if p not in bad}
    return CurveReport(ode.id, initial, minimal, cd.conductor, cd.local, aps)
