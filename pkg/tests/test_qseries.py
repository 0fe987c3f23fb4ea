from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from etacurves.forms import eisenstein_level1
from etacurves.qseries import (
    QQ,
    QQi,
    GaussianRational,
    NonUnitLeading,
    PrecisionError,
    TruncSeries,
    ValuationNotDivisible,
    ZeroLeadingCoefficient,
    int_convolve,
    inv,
    log_deriv,
    mul,
    nth_root,
    pow_int,
    qderiv,
    schoolbook_convolve,
    series,
    subst_negate,
    subst_scale,
)

PREC = 12


def q(prec=PREC):
    return TruncSeries.monomial(1, 1, prec)


small = st.integers(min_value=-9, max_value=9)


@st.composite
def rational_series(draw, prec=PREC, min_val=0, max_val=2):
    v = draw(st.integers(min_value=min_val, max_value=max_val))
    cs = draw(st.lists(small, min_size=prec - v, max_size=prec - v))
    return series(cs, prec=prec, valuation=v)


@st.composite
def units(draw, prec=PREC):
    cs = draw(st.lists(small, min_size=prec - 1, max_size=prec - 1))
    return series([1] + cs, prec=prec)


gaussians = st.builds(GaussianRational, small, small)


@st.composite
def gaussian_series(draw, prec=8):
    cs = draw(st.lists(gaussians, min_size=prec, max_size=prec))
    return TruncSeries(cs, 0, prec, QQi)


# -- examples ---------------------------------------------------------------


def test_add_examples():
    assert (q() + (-q())).is_zero()
    assert (q().prec, (q() + (-q())).prec) == (PREC, PREC)
    assert series([1, 1], prec=5) + series([1, -1], prec=5) == series([2], prec=5)
    a = series([1, 1], prec=4, valuation=-1) + series([0, 1], prec=4)
    assert a.to_string() == "q^-1 + 1 + q + O(q^4)"


def test_mul_examples():
    assert mul(series([1, 1], prec=6), series([1, -1], prec=6)) == series([1, 0, -1], prec=6)
    assert mul(q(), q()) == TruncSeries.monomial(2, 1, PREC + 1)
    qi = TruncSeries.monomial(-1, 1, 5)
    assert mul(qi, TruncSeries.monomial(1, 1, 7)) == TruncSeries.one(6)


def test_mul_precision_rule():
    a = series([1, 2, 3], prec=3)
    b = series([0, 0, 5, 1], prec=6)
    c = mul(a, b)
    assert c.prec == min(3 + 2, 6 + 0)
    assert c.valuation == 2


def test_inv_examples():
    g = inv(series([1, -1], prec=6))
    assert g == series([1] * 6, prec=6)
    assert inv(series([2], prec=3)) == series([Fraction(1, 2)], prec=3)
    h = inv(series([1, 1], prec=6, valuation=1))
    assert h.valuation == -1
    assert h.coefficients(-1, 4) == [1, -1, 1, -1, 1]
    with pytest.raises(ZeroLeadingCoefficient):
        inv(TruncSeries.zero(5))


def test_pow_examples():
    assert pow_int(series([1, 1], prec=5), 2) == series([1, 2, 1], prec=5)
    assert pow_int(series([3, 1], prec=5), 0) == TruncSeries.one(5)
    assert pow_int(q(), -1) == TruncSeries.monomial(-1, 1, PREC - 2)


def test_nth_root_examples():
    assert nth_root(pow_int(series([1, 1], prec=8), 3), 3) == series([1, 1], prec=8)
    assert nth_root(TruncSeries.monomial(2, 1, 10), 2) == TruncSeries.monomial(1, 1, 5 + 4)
    with pytest.raises(NonUnitLeading):
        nth_root(series([2, 1], prec=4), 2)
    with pytest.raises(ValuationNotDivisible):
        nth_root(TruncSeries.monomial(1, 1, 5), 2)


def test_qderiv_examples():
    assert qderiv(series([5], prec=4)).is_zero()
    assert qderiv(q()) == q()
    assert qderiv(eisenstein_level1(4, 4)).coefficients(0, 4) == [0, 240, 4320, 3 * 240 * 28]


def test_log_deriv_examples():
    assert log_deriv(q()) == TruncSeries.one(PREC - 1)
    assert log_deriv(TruncSeries.monomial(3, 1, 10))[0] == 3


def test_subst_examples():
    assert subst_scale(series([1, 1], prec=4), 2) == series([1, 0, 1], prec=8)
    assert subst_scale(q(4), 3) == TruncSeries.monomial(3, 1, 12)
    assert subst_scale(eisenstein_level1(4, 3), 2)[2] == 240
    assert subst_negate(series([1, 1, 1], prec=3)) == series([1, -1, 1], prec=3)
    even = series([1, 0, 3, 0, 5], prec=5)
    assert subst_negate(even) == even


def test_getitem_beyond_precision():
    s = series([1, 2], prec=2)
    assert s[-5] == 0
    with pytest.raises(PrecisionError):
        s[2]


def test_zero_series_invariants():
    z = TruncSeries.zero(7)
    assert z.valuation == 7 and z.coeffs == [] and z.is_zero()
    assert series([0, 0, 0], prec=3) == TruncSeries.zero(3)


def test_field_mixing_rejected():
    with pytest.raises(TypeError):
        series([1], prec=3) + series([1], prec=3, field=QQi)


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == -1
    z = GaussianRational(Fraction(1, 2), 3)
    assert z * (1 / z) == 1
    assert z.conjugate().im == -3
    assert z.norm() == Fraction(1, 4) + 9
    assert str(GaussianRational(-18, 2)) == "-18+2*i"


def test_json_roundtrip():
    s = series([Fraction(1, 3), -2, 0, 7], prec=6, valuation=-1)
    assert TruncSeries.from_json(s.to_json()) == s
    g = TruncSeries([GaussianRational(1, -2), 3], 1, 5, QQi)
    assert TruncSeries.from_json(g.to_json()) == g
    obj = s.to_json_obj()
    assert obj["valuation"] == -1 and obj["prec"] == 6 and obj["coeffs"][0] == "1/3"


def test_kronecker_matches_schoolbook():
    xs = [3, -7, 0, 2**70, -1, 5]
    ys = [-(2**65), 4, 9, 0, -3]
    n = 8
    assert int_convolve(xs, ys, n) == schoolbook_convolve(xs, ys, n, 0)


# -- properties ---------------------------------------------------------------


@given(rational_series(), rational_series(), rational_series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert mul(a, b) == mul(b, a)
    assert (a + b) + c == a + (b + c)
    assert mul(mul(a, b), c).agrees_with(mul(a, mul(b, c)))
    assert mul(a, b + c).agrees_with(mul(a, b) + mul(a, c))


@given(gaussian_series(), gaussian_series(), gaussian_series())
@settings(max_examples=30)
def test_ring_axioms_gaussian(a, b, c):
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, b + c) == mul(a, b) + mul(a, c)


@given(rational_series(), rational_series())
def test_mul_truncation_stable(a, b):
    c = mul(a, b)
    at = a.truncate(min(a.prec, c.prec - b.valuation)) if not b.is_zero() else a
    bt = b.truncate(min(b.prec, c.prec - a.valuation)) if not a.is_zero() else b
    assert mul(at, bt).truncate(c.prec) == c


@given(st.lists(st.integers(min_value=-(10**30), max_value=10**30), min_size=1, max_size=20),
       st.lists(st.integers(min_value=-(10**30), max_value=10**30), min_size=1, max_size=20))
def test_kronecker_property(xs, ys):
    n = len(xs) + len(ys) - 1
    assert int_convolve(xs, ys, n) == schoolbook_convolve(xs, ys, n, 0)


@given(rational_series(), rational_series())
def test_kernels_bit_identical(a, b):
    assert mul(a, b) == mul(a, b, kernel="schoolbook")


@given(units())
def test_inv_roundtrip(u):
    assert mul(u, inv(u)) == TruncSeries.one(PREC)


@given(units(), st.integers(min_value=1, max_value=5))
def test_root_and_power_roundtrip(u, n):
    assert nth_root(pow_int(u, n), n) == u
    assert pow_int(nth_root(u, n), n) == u


@given(units(), st.integers(min_value=-4, max_value=4))
def test_pow_matches_repeated_mul(u, e):
    direct = TruncSeries.one(PREC)
    base = u if e >= 0 else inv(u)
    for _ in range(abs(e)):
        direct = mul(direct, base)
    assert pow_int(u, e) == direct


@given(units(), units(), st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
def test_log_deriv_additive(a, b, va, vb):
    a, b = a.shift(va), b.shift(vb)
    lhs = log_deriv(mul(a, b))
    rhs = log_deriv(a) + log_deriv(b)
    assert lhs.agrees_with(rhs)
    assert lhs[0] == va + vb


@given(rational_series(), rational_series())
def test_negate_is_homomorphism(a, b):
    assert subst_negate(a + b) == subst_negate(a) + subst_negate(b)
    assert subst_negate(mul(a, b)) == mul(subst_negate(a), subst_negate(b))
    assert subst_negate(subst_negate(a)) == a


@given(rational_series(), rational_series(), st.integers(min_value=1, max_value=4))
def test_scale_is_homomorphism(a, b, m):
    assert subst_scale(mul(a, b), m) == mul(subst_scale(a, m), subst_scale(b, m))
    assert subst_scale(a, m).prec == a.prec * m
