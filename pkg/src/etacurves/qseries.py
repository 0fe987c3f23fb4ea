"""Exact truncated Laurent series in q.

A :class:`TruncSeries` stores the coefficients of ``q^valuation .. q^(prec-1)``;
every coefficient at an exponent below ``prec`` is known exactly, nothing at or
above ``prec`` is.  Coefficients live in one of two fields, fixed per series:
``QQ`` (``fractions.Fraction``) or ``QQi`` (:class:`GaussianRational`).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from numbers import Rational

QQ = "rational"
QQi = "gaussian"


class SeriesError(ArithmeticError):
    pass


class ZeroLeadingCoefficient(SeriesError):
    pass


class NonUnitLeading(SeriesError):
    pass


class ValuationNotDivisible(SeriesError):
    pass


class PrecisionError(SeriesError):
    """Raised when asking for a coefficient at or beyond the known precision."""


class GaussianRational:
    """Element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return GaussianRational(x)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return (GaussianRational(1) / self) ** (-e)
        out, base = GaussianRational(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


def _coerce(c, field):
    if field == QQ:
        if isinstance(c, GaussianRational):
            if c.im:
                raise TypeError("Gaussian coefficient in a rational series")
            return c.re
        return Fraction(c)
    return c if isinstance(c, GaussianRational) else GaussianRational(c)


def _zero(field):
    return Fraction(0) if field == QQ else GaussianRational(0)


# ---------------------------------------------------------------------------
# Convolution kernels


def _pack(xs: list[int], k: int) -> int:
    out = 0
    for c in reversed(xs):
        out = (out << k) + c
    return out


def _unpack(z: int, k: int, n: int) -> list[int]:
    mask = (1 << k) - 1
    half = 1 << (k - 1)
    out = []
    for _ in range(n):
        d = z & mask
        z >>= k
        if d >= half:
            d -= 1 << k
            z += 1
        out.append(d)
    return out


def int_convolve(xs: list[int], ys: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer polynomials.

    Kronecker substitution: pack into one big integer per side, multiply once,
    unpack with balanced digits.
    """
    xs, ys = xs[:n], ys[:n]
    if not xs or not ys:
        return [0] * n
    mx = max(abs(c) for c in xs)
    my = max(abs(c) for c in ys)
    if mx == 0 or my == 0:
        return [0] * n
    bound = mx * my * min(len(xs), len(ys))
    k = bound.bit_length() + 2
    z = _pack(xs, k) * _pack(ys, k)
    out = _unpack(z, k, min(n, len(xs) + len(ys) - 1))
    out.extend([0] * (n - len(out)))
    return out


def schoolbook_convolve(xs: list, ys: list, n: int, zero) -> list:
    out = [zero] * n
    for i, x in enumerate(xs[:n]):
        if not x:
            continue
        for j, y in enumerate(ys[: n - i]):
            out[i + j] = out[i + j] + x * y
    return out


def rational_convolve(xs: list[Fraction], ys: list[Fraction], n: int) -> list[Fraction]:
    """Truncated product of Fraction sequences via the integer kernel."""
    xs, ys = xs[:n], ys[:n]
    dx = lcm(*(c.denominator for c in xs)) if xs else 1
    dy = lcm(*(c.denominator for c in ys)) if ys else 1
    ix = [c.numerator * (dx // c.denominator) for c in xs]
    iy = [c.numerator * (dy // c.denominator) for c in ys]
    d = dx * dy
    if d == 1:
        return [Fraction(c) for c in int_convolve(ix, iy, n)]
    return [Fraction(c, d) for c in int_convolve(ix, iy, n)]


# ---------------------------------------------------------------------------


class TruncSeries:
    """Truncated Laurent series ``sum_{valuation <= n < prec} c_n q^n``.

    Instances are treated as immutable.  The stored leading coefficient is
    nonzero unless the series is zero to its precision, in which case
    ``valuation == prec`` and ``coeffs`` is empty.
    """

    __slots__ = ("valuation", "coeffs", "prec", "field")

    def __init__(self, coeffs, valuation: int = 0, prec: int | None = None, field: str = QQ):
        cs = [_coerce(c, field) for c in coeffs]
        if prec is None:
            prec = valuation + len(cs)
        cs = cs[: max(prec - valuation, 0)]
        start = 0
        while start < len(cs) and not cs[start]:
            start += 1
        if start == len(cs):
            self.valuation = prec
            self.coeffs = []
        else:
            self.valuation = valuation + start
            cs = cs[start:]
            cs.extend([_zero(field)] * (prec - self.valuation - len(cs)))
            self.coeffs = cs
        self.prec = prec
        self.field = field

    @classmethod
    def _raw(cls, coeffs, valuation, prec, field):
        # trusted constructor: coeffs already coerced, length prec - valuation
        obj = cls.__new__(cls)
        start = 0
        while start < len(coeffs) and not coeffs[start]:
            start += 1
        if start == len(coeffs):
            obj.valuation, obj.coeffs = prec, []
        else:
            obj.valuation = valuation + start
            obj.coeffs = coeffs[start:] if start else coeffs
        obj.prec = prec
        obj.field = field
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, prec: int, field: str = QQ) -> "TruncSeries":
        return cls([], prec, prec, field)

    @classmethod
    def one(cls, prec: int, field: str = QQ) -> "TruncSeries":
        return cls.monomial(0, 1, prec, field)

    @classmethod
    def monomial(cls, n: int, c, prec: int, field: str = QQ) -> "TruncSeries":
        return cls([c], n, prec, field)

    @classmethod
    def from_dict(cls, terms: dict[int, object], prec: int, field: str = QQ) -> "TruncSeries":
        if not terms:
            return cls.zero(prec, field)
        lo = min(terms)
        cs = [terms.get(n, 0) for n in range(lo, prec)]
        return cls(cs, lo, prec, field)

    # -- access -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int):
        if n >= self.prec:
            raise PrecisionError(f"coefficient of q^{n} unknown (prec {self.prec})")
        if n < self.valuation:
            return _zero(self.field)
        return self.coeffs[n - self.valuation]

    def coefficients(self, start: int, stop: int | None = None) -> list:
        stop = self.prec if stop is None else stop
        return [self[n] for n in range(start, stop)]

    def leading_coefficient(self):
        if not self.coeffs:
            raise ZeroLeadingCoefficient("series is zero to its precision")
        return self.coeffs[0]

    @property
    def relative_prec(self) -> int:
        return self.prec - self.valuation

    def __len__(self):
        return len(self.coeffs)

    # -- structural ---------------------------------------------------------

    def truncate(self, prec: int) -> "TruncSeries":
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        if prec <= self.valuation:
            return TruncSeries.zero(prec, self.field)
        return TruncSeries._raw(self.coeffs[: prec - self.valuation], self.valuation, prec, self.field)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by q^k."""
        return TruncSeries._raw(list(self.coeffs), self.valuation + k, self.prec + k, self.field)

    def to_gaussian(self) -> "TruncSeries":
        if self.field == QQi:
            return self
        return TruncSeries._raw([GaussianRational(c) for c in self.coeffs], self.valuation, self.prec, QQi)

    def map_coefficients(self, fn, field: str | None = None) -> "TruncSeries":
        field = self.field if field is None else field
        cs = [_coerce(fn(c), field) for c in self.coeffs]
        return TruncSeries._raw(cs, self.valuation, self.prec, field)

    def _check_field(self, other: "TruncSeries"):
        if self.field != other.field:
            raise TypeError(f"cannot mix {self.field} and {other.field} series")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return self + TruncSeries([other], 0, self.prec, self.field) if self.prec > 0 else self
        self._check_field(other)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation)
        if lo >= prec:
            return TruncSeries.zero(prec, self.field)
        cs = [_zero(self.field)] * (prec - lo)
        for s in (self, other):
            off = s.valuation - lo
            for i, c in enumerate(s.coeffs[: prec - s.valuation]):
                cs[off + i] = cs[off + i] + c
        return TruncSeries._raw(cs, lo, prec, self.field)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw([-c for c in self.coeffs], self.valuation, self.prec, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = _coerce(c, self.field)
        return TruncSeries._raw([c * x for x in self.coeffs], self.valuation, self.prec, self.field)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return mul(self, inv(other))
        return self.scale(1 / _coerce(other, self.field))

    def __pow__(self, e: int):
        return pow_int(self, e)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.prec == other.prec
            and self.valuation == other.valuation
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality on the common range of known coefficients."""
        p = min(self.prec, other.prec)
        return self.truncate(p) == other.truncate(p)

    # -- operators on q -----------------------------------------------------

    def qderiv(self) -> "TruncSeries":
        return qderiv(self)

    def subst_scale(self, m: int) -> "TruncSeries":
        return subst_scale(self, m)

    def subst_negate(self) -> "TruncSeries":
        return subst_negate(self)

    # -- display / serialization -------------------------------------------

    def __repr__(self):
        return f"TruncSeries({self})"

    def __str__(self):
        return self.to_string()

    def to_string(self, max_terms: int | None = None) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            n = self.valuation + i
            parts.append(_term(c, n))
            if max_terms is not None and len(parts) >= max_terms:
                break
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(q^{self.prec})"

    def to_json_obj(self) -> dict:
        if self.field == QQ:
            cs = [str(c) for c in self.coeffs]
        else:
            cs = [[str(c.re), str(c.im)] for c in self.coeffs]
        return {"valuation": self.valuation, "prec": self.prec, "field": self.field, "coeffs": cs}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TruncSeries":
        field = obj.get("field")
        raw = obj["coeffs"]
        if field is None:
            field = QQi if raw and isinstance(raw[0], list) else QQ
        if field == QQ:
            cs = [Fraction(c) for c in raw]
        else:
            cs = [GaussianRational(Fraction(a), Fraction(b)) for a, b in raw]
        return cls(cs, obj["valuation"], obj["prec"], field)

    @classmethod
    def from_json(cls, text: str) -> "TruncSeries":
        return cls.from_json_obj(json.loads(text))


def _term(c, n: int) -> str:
    if n == 0:
        mono = ""
    elif n == 1:
        mono = "q"
    else:
        mono = f"q^{n}"
    s = str(c)
    if isinstance(c, GaussianRational) and c.re and c.im:
        s = f"({s})"
    if not mono:
        return s
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{s}*{mono}"


# ---------------------------------------------------------------------------
# Module-level operations


def add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def mul(a: TruncSeries, b: TruncSeries, *, kernel: str = "auto") -> TruncSeries:
    """Cauchy product; ``prec = min(a.prec + b.valuation, b.prec + a.valuation)``.

    ``kernel`` selects ``"schoolbook"`` or the integer Kronecker path
    (``"auto"`` uses the latter for rational series); results are identical.
    """
    a._check_field(b)
    prec = min(a.prec + b.valuation, b.prec + a.valuation)
    val = a.valuation + b.valuation
    if a.is_zero() or b.is_zero():
        return TruncSeries.zero(prec, a.field)
    n = prec - val
    if n <= 0:
        return TruncSeries.zero(prec, a.field)
    if a.field == QQ and kernel != "schoolbook":
        cs = rational_convolve(a.coeffs, b.coeffs, n)
    else:
        cs = schoolbook_convolve(a.coeffs, b.coeffs, n, _zero(a.field))
    return TruncSeries._raw(cs, val, prec, a.field)


def inv(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; valuation is negated, relative precision kept."""
    if a.is_zero():
        raise ZeroLeadingCoefficient("cannot invert a series that is zero to its precision")
    rel = a.relative_prec
    unit = TruncSeries._raw(a.coeffs, 0, rel, a.field)
    c0 = a.coeffs[0]
    b = TruncSeries([1 / c0], 0, 1, a.field)
    m = 1
    two = _coerce(2, a.field)
    # Newton: b <- b (2 - u b), doubling the known precision each step
    while m < rel:
        m = min(2 * m, rel)
        u = unit.truncate(m)
        b = TruncSeries._raw(b.coeffs + [_zero(a.field)] * (m - b.prec), 0, m, a.field)
        ub = mul(u, b)
        corr = (-ub) + TruncSeries([two], 0, m, a.field)
        b = mul(b, corr).truncate(m)
    return b.shift(-a.valuation)


def pow_int(a: TruncSeries, e: int) -> TruncSeries:
    if e < 0:
        return pow_int(inv(a), -e)
    if e == 0:
        rel = a.relative_prec if not a.is_zero() else a.prec
        return TruncSeries.one(rel, a.field)
    out = None
    base = a
    while e:
        if e & 1:
            out = base if out is None else mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return out


def nth_root(a: TruncSeries, n: int) -> TruncSeries:
    """The n-th root with leading coefficient 1.

    Uses the coefficient recursion coming from ``n * theta(u) * w = u * theta(w)``
    for ``u = w^(1/n)``, where ``theta = q d/dq``.
    """
    if n < 1:
        raise ValueError("root index must be positive")
    if a.is_zero() or a.coeffs[0] != 1:
        raise NonUnitLeading("n-th root needs leading coefficient 1")
    if a.valuation % n:
        raise ValuationNotDivisible(f"valuation {a.valuation} not divisible by {n}")
    w = a.coeffs
    rel = a.relative_prec
    one = _coerce(1, a.field)
    u = [one] + [_zero(a.field)] * (rel - 1)
    for m in range(1, rel):
        acc = _zero(a.field)
        for j in range(m):
            wj = w[m - j]
            if wj and u[j]:
                acc = acc + ((m - j) - n * j) * wj * u[j]
        u[m] = acc / (n * m)
    return TruncSeries._raw(u, a.valuation // n, a.valuation // n + rel, a.field)


def qderiv(a: TruncSeries) -> TruncSeries:
    """theta = q d/dq; multiplies the coefficient of q^n by n."""
    cs = [(a.valuation + i) * c for i, c in enumerate(a.coeffs)]
    return TruncSeries._raw(cs, a.valuation, a.prec, a.field)


def log_deriv(a: TruncSeries) -> TruncSeries:
    """theta(a)/a; constant term equals the valuation of ``a``."""
    return mul(qderiv(a), inv(a))


def subst_scale(a: TruncSeries, m: int) -> TruncSeries:
    """q -> q^m."""
    if m < 1:
        raise ValueError("scale must be positive")
    if m == 1:
        return a
    z = _zero(a.field)
    if a.is_zero():
        return TruncSeries.zero(a.prec * m, a.field)
    cs = [z] * ((len(a.coeffs) - 1) * m + 1)
    cs[::m] = a.coeffs
    prec = a.prec * m
    cs.extend([z] * (prec - a.valuation * m - len(cs)))
    return TruncSeries._raw(cs, a.valuation * m, prec, a.field)


def subst_negate(a: TruncSeries) -> TruncSeries:
    """q -> -q, i.e. tau -> tau + 1/2."""
    cs = [c if (a.valuation + i) % 2 == 0 else -c for i, c in enumerate(a.coeffs)]
    return TruncSeries._raw(cs, a.valuation, a.prec, a.field)


def series(coeffs, prec: int | None = None, valuation: int = 0, field: str = QQ) -> TruncSeries:
    """Shorthand constructor: ``series([1, 2, 3], prec=5)`` is 1 + 2q + 3q^2 + O(q^5)."""
    return TruncSeries(coeffs, valuation, prec, field)
