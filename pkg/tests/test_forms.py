from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from etacurves.arith import ADMISSIBLE, level_data
from etacurves.forms import (
    CATALOG,
    SHARP_DELTA_TABLE,
    EtaQuotient,
    FractionalValuation,
    IDENTITIES,
    InvalidCusp,
    NotAdmissible,
    P_N,
    P_N_sharp,
    UnknownKey,
    UnsupportedLevel,
    UnsupportedWeight,
    E1_leg7,
    E2m,
    c_N,
    delta7,
    delta_eta,
    delta_N,
    delta_N_sharp,
    eisenstein4_cusp,
    eisenstein_level1,
    eta_expand,
    form,
    j5,
    ramanujan_serre,
    sharp_eta,
    special_Q,
)
from etacurves.qseries import TruncSeries, log_deriv, mul, series


def _product_expansion(terms, prec):
    """Literal finite product, independent of the pentagonal shortcut."""
    v = sum(d * r for d, r in terms.items()) // 24
    out = [0] * prec
    out[0] = 1
    for d, r in terms.items():
        for n in range(1, prec // d + 1):
            m = d * n
            for _ in range(abs(r)):
                if r > 0:  # multiply by (1 - q^m)
                    for i in range(prec - 1, m - 1, -1):
                        out[i] -= out[i - m]
                else:  # divide by (1 - q^m)
                    for i in range(m, prec):
                        out[i] += out[i - m]
    return series(out, prec=prec).shift(v)


# -- eta expansions ---------------------------------------------------------


def test_delta_expansion():
    d = eta_expand(EtaQuotient.make({1: 24}), 6)
    assert d.coefficients(0, 6) == [0, 1, -24, 252, -1472, 4830]


def test_eta6_fourth():
    s = eta_expand(EtaQuotient.make({6: 4}), 20)
    assert {n: c for n, c in enumerate(s.coefficients(0, 20)) if c} == {1: 1, 7: -4, 13: 2, 19: 8}


def test_fractional_valuation():
    with pytest.raises(FractionalValuation):
        eta_expand(EtaQuotient.make({1: 1}), 5)


@pytest.mark.parametrize(
    "terms",
    [{1: 24}, {6: 4}, {1: 6, 5: -6}, {2: -2, 4: 6, 8: -2, 10: -2, 20: 6, 40: -2}, {1: -24, 2: 72, 4: -24}],
)
def test_eta_expand_matches_literal_product(terms):
    e = EtaQuotient.make(terms)
    assert eta_expand(e, 40) == _product_expansion(terms, 40 - e.valuation24 // 24).truncate(40)


def test_eta_quotient_json_and_weight():
    e = EtaQuotient.make({4: 6, 20: 6, 2: -2, 8: -2, 10: -2, 40: -2})
    assert e.weight == 2
    assert e.valuation24 == 24
    assert EtaQuotient.from_json(e.to_json()) == e


# -- Delta_N ----------------------------------------------------------------


def test_delta_N_examples():
    assert delta_N(1, 3).coefficients(0, 3) == [0, 1, -24]
    assert delta_N(5, 6).coefficients(1, 6) == [1, -4, 2, 8, -5]
    assert delta_N(6, 30) == eta_expand(EtaQuotient.make({1: 2, 2: 2, 3: 2, 6: 2}), 30)
    with pytest.raises(NotAdmissible):
        delta_N(4, 5)


@pytest.mark.parametrize("N", ADMISSIBLE)
def test_delta_N_normalized(N):
    d = delta_N(N, 10)
    assert d.valuation == 1 and d[1] == 1


def test_delta_sharp_examples():
    assert delta_N_sharp(1, 4)[2] == 24
    assert delta_N_sharp(1, 4)[1] == 1


@pytest.mark.parametrize("N", [1, 2, 5, 6])
def test_delta_sharp_table(N):
    assert delta_N_sharp(N, 300) == eta_expand(SHARP_DELTA_TABLE[N], 300)
    assert sharp_eta(delta_eta(N)) == SHARP_DELTA_TABLE[N]


# -- Eisenstein series ------------------------------------------------------


def test_level1_eisenstein():
    assert eisenstein_level1(4, 2)[1] == 240
    assert eisenstein_level1(6, 2)[1] == -504
    assert eisenstein_level1(2, 4)[3] == -96
    with pytest.raises(UnsupportedWeight):
        eisenstein_level1(8, 4)


def test_P_N_examples():
    assert P_N(1, 50) == eisenstein_level1(2, 50)
    for N in ADMISSIBLE:
        assert P_N(N, 5)[0] == 1
        assert P_N(N, 60) == log_deriv(delta_N(N, 61))
        assert P_N_sharp(N, 5)[0] == 1


def test_ramanujan_serre_level1():
    e4, e6, p = eisenstein_level1(4, 60), eisenstein_level1(6, 60), P_N(1, 60)
    # 3 theta - E2 sends E4 to -E6; the sign is absorbed by squaring in the equations
    assert ramanujan_serre(12, p, 4, e4) == -e6


@pytest.mark.parametrize("N", ADMISSIBLE)
def test_delta_is_annihilated(N):
    k = level_data(N).k
    assert ramanujan_serre(k, P_N(N, 80), k, delta_N(N, 80)).is_zero()
    assert ramanujan_serre(k, P_N_sharp(N, 80), k, delta_N_sharp(N, 80)).is_zero()


def test_delta7_annihilated():
    d = delta7(60)
    assert d.valuation == 1
    assert ramanujan_serre(4, form("P.N7", 60), 4, d).is_zero()


@st.composite
def _unit(draw):
    cs = draw(st.lists(st.integers(-20, 20), min_size=15, max_size=15))
    return series(cs, prec=15)


@given(_unit(), _unit(), st.integers(0, 12), st.integers(0, 12), st.sampled_from(ADMISSIBLE))
@settings(max_examples=40)
def test_leibniz(f, g, k, l, N):
    kN = level_data(N).k
    P = P_N(N, 15)
    lhs = ramanujan_serre(kN, P, k + l, mul(f, g))
    rhs = mul(ramanujan_serre(kN, P, k, f), g) + mul(f, ramanujan_serre(kN, P, l, g))
    assert lhs == rhs


@pytest.mark.parametrize("N", [1, 2, 3, 5, 6, 7, 11])
def test_cusp_constant_terms(N):
    assert eisenstein4_cusp(N, "inf", 5)[0] == 1
    if N > 1:
        assert eisenstein4_cusp(N, "0", 5)[0] == 0


def test_cusp_examples():
    assert eisenstein4_cusp(1, "inf", 50) == eisenstein_level1(4, 50)
    e2 = eisenstein4_cusp(2, "inf", 40)
    assert eisenstein4_cusp(6, "1/2", 40) == (e2 - e2.truncate(14).subst_scale(3).truncate(40)) * Fraction(9, 80)
    with pytest.raises(InvalidCusp):
        eisenstein4_cusp(5, "1/2", 10)


def test_level6_cusp_denominators():
    # every coefficient times 5 is an integer (c_6 = 1296/1200 and the stated factors)
    for cusp in ("inf", "0", "1/2", "1/3"):
        for c in eisenstein4_cusp(6, cusp, 60).coefficients(0, 60):
            assert (c * 5).denominator == 1
    assert c_N(6) == Fraction(1, (1 - Fraction(1, 16)) * (1 - Fraction(1, 81)))


def test_E2m_examples():
    assert E2m(2, 3)[0] == 1 and E2m(2, 3)[1] == 24
    assert E2m(3, 5)[3] == 12
    e23 = (eisenstein_level1(2, 20).truncate(7).subst_scale(3).truncate(20) * 3 - eisenstein_level1(2, 20)) * Fraction(1, 2)
    assert e23 == E2m(3, 20) and e23[0] == 1


@pytest.mark.parametrize("N", [11, 14, 15])
def test_special_Q(N):
    assert special_Q(N, 5)[0] == 1
    with pytest.raises(UnsupportedLevel):
        special_Q(7, 5)


def test_special_Q11_first_coefficient():
    # only the E4 term and the linear Delta term reach q^1
    e4 = eisenstein4_cusp(11, "inf", 3)
    e2 = E2m(11, 3)
    d = delta_N(11, 3)
    expected = e4[1] - Fraction(121, 61) * (e2[0] * d[1])
    assert special_Q(11, 3)[1] == expected == -2


def test_E1_and_delta7():
    e1 = E1_leg7(30)
    assert e1[0] == 1 and e1[1] == 2 and e1[2] == 4
    # q^3: both divisors count, (1/7) + (3/7) = 0
    assert e1[3] == 0
    chi = {0: 0, 1: 1, 2: 1, 4: 1, 3: -1, 5: -1, 6: -1}
    for n in range(1, 30):
        assert e1[n] == 2 * sum(chi[d % 7] for d in range(1, n + 1) if n % d == 0)
    assert delta7(10).valuation == 1


def test_j5():
    s = j5(6)
    assert s.valuation == -1
    assert s.coefficients(-1, 6) == [1, -6, 9, 10, -30, 6, -25]


@pytest.mark.parametrize("name", sorted(IDENTITIES))
def test_identities(name):
    assert IDENTITIES[name](300).is_zero()


def test_catalog_keys_and_extension():
    for key in ("E4.N5.cusp0", "Delta.N6.sharp", "E4.N6.cusp1/3", "j5", "Q.N15"):
        assert key in CATALOG
    with pytest.raises(UnknownKey):
        form("nope", 3)
    for key, entry in CATALOG.items():
        lo = entry.build(12)
        hi = entry.build(30)
        assert hi.truncate(12) == lo, key
