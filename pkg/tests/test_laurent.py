import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetafio.errors import CenterMismatchError, ZeroSeriesError
from zetafio.laurent import (
    LaurentSeries,
    extract_leading,
    monomial,
    series_add,
    series_mul,
)


def L(min_order, coeffs, center=0.0):
    return LaurentSeries(center, min_order, tuple(coeffs))


class TestAdd:
    def test_cancellation_then_normalize(self):
        a = L(-1, [1.0, 0.0])
        b = L(-1, [-1.0, 1.0])
        s = series_add(a, b).normalize()
        assert s.min_order == 0
        assert s.coefficient(0) == 1.0

    def test_disjoint_orders(self):
        a = L(-2, [2.0] + [0.0] * 5)
        b = L(1, [3.0, 0.0])
        s = series_add(a, b)
        assert s.coefficient(-2) == 2.0
        assert s.coefficient(1) == 3.0
        assert s.trunc_order == min(a.trunc_order, b.trunc_order)

    def test_center_mismatch(self):
        with pytest.raises(CenterMismatchError):
            series_add(L(0, [1.0]), L(0, [1.0], center=1.0))


class TestMul:
    def test_pole_times_zero(self):
        s = series_mul(monomial(-1), monomial(1))
        assert s.coefficient(0) == 1.0
        assert s.min_order == 0

    def test_polynomials(self):
        a = L(0, [1.0, 1.0, 0.0])
        b = L(0, [1.0, -1.0, 0.0])
        s = series_mul(a, b)
        assert s.coefficient(0) == 1.0
        assert s.coefficient(1) == 0.0
        assert s.coefficient(2) == -1.0

    def test_square_of_pole_plus_one(self):
        # (z^-1 + 1)^2 = z^-2 + 2 z^-1 + 1 (hand expansion)
        a = L(-1, [1.0, 1.0, 0.0, 0.0])
        s = series_mul(a, a)
        assert s.coefficient(-2) == 1.0
        assert s.coefficient(-1) == 2.0
        assert s.coefficient(0) == 1.0


class TestExtractLeading:
    def test_simple_pole(self):
        lead = extract_leading(L(-1, [-2.0, 5.0]))
        assert lead == (-1, -2.0, -2.0, 5.0)

    def test_regular(self):
        lead = extract_leading(L(0, [3.0, 1.0]))
        assert lead.oilc == 0 and lead.ilc == 3.0
        assert lead.residue == 0.0 and lead.const_term == 3.0

    def test_double_pole(self):
        lead = extract_leading(L(-2, [0.5, 1.0, 0.0]))
        assert lead.oilc == -2
        assert lead.ilc == 0.5
        assert lead.residue == 1.0
        assert lead.const_term == 0.0

    def test_zero_series_signals(self):
        with pytest.raises(ZeroSeriesError):
            extract_leading(L(-1, [0.0, 0.0]))


def test_json_round_trip():
    s = L(-2, [1.0 + 2.0j, 0.0, 3.0])
    back = LaurentSeries.from_json_dict(s.to_json_dict())
    assert back == s


complex_st = st.builds(
    complex,
    st.floats(-10, 10, allow_nan=False),
    st.floats(-10, 10, allow_nan=False),
)


def series_st():
    return st.builds(
        lambda mo, cs: L(mo, cs),
        st.integers(-3, 2),
        st.lists(complex_st, min_size=2, max_size=7),
    )


@settings(max_examples=120, deadline=None)
@given(series_st(), series_st())
def test_add_commutes(a, b):
    s1, s2 = series_add(a, b), series_add(b, a)
    assert s1.min_order == s2.min_order
    assert max(abs(x - y) for x, y in zip(s1.coeffs, s2.coeffs)) < 1e-12


@settings(max_examples=120, deadline=None)
@given(series_st(), series_st())
def test_mul_commutes(a, b):
    s1, s2 = series_mul(a, b), series_mul(b, a)
    assert s1.min_order == s2.min_order
    assert max(abs(x - y) for x, y in zip(s1.coeffs, s2.coeffs)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(series_st(), series_st(), series_st())
def test_add_associates_up_to_truncation(a, b, c):
    s1 = series_add(series_add(a, b), c)
    s2 = series_add(a, series_add(b, c))
    lo = max(s1.min_order, s2.min_order)
    hi = min(s1.trunc_order, s2.trunc_order)
    for n in range(lo, hi + 1):
        assert abs(s1.coefficient(n) - s2.coefficient(n)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(series_st(), series_st(), series_st())
def test_mul_associates_up_to_truncation(a, b, c):
    s1 = series_mul(series_mul(a, b), c)
    s2 = series_mul(a, series_mul(b, c))
    lo = max(s1.min_order, s2.min_order)
    hi = min(s1.trunc_order, s2.trunc_order)
    scale = max([abs(v) for v in s1.coeffs + s2.coeffs] + [1.0])
    for n in range(lo, hi + 1):
        assert abs(s1.coefficient(n) - s2.coefficient(n)) < 1e-12 * scale


def test_oilc_additive_under_mul(rng):
    for _ in range(40):
        mo_a, mo_b = int(rng.integers(-3, 3)), int(rng.integers(-3, 3))
        ca = rng.normal(size=4) + 1j * rng.normal(size=4)
        cb = rng.normal(size=4) + 1j * rng.normal(size=4)
        a, b = L(mo_a, ca), L(mo_b, cb)
        la, lb = extract_leading(a), extract_leading(b)
        lm = extract_leading(series_mul(a, b))
        assert lm.oilc == la.oilc + lb.oilc


def test_eval_matches_direct_sum():
    s = L(-1, [2.0, -1.0, 0.5])
    z = 0.3 + 0.1j
    expect = 2.0 / z - 1.0 + 0.5 * z
    assert abs(s.eval(z) - expect) < 1e-14
