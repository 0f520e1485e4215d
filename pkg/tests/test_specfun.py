from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre, spherical_jn

from chofisher.errors import AccuracyError, DomainError
from chofisher.specfun import (
    bessel_zero,
    composite_gauss_legendre,
    gauss_legendre,
    kummer_1f1,
    kummer_1f1_array,
    kummer_1f1_with_bound,
    spherical_bessel_j,
    spherical_bessel_j_array,
    terminating_index,
)


def mp_1f1(a, b, x):
    with mpmath.workdps(40):
        return float(mpmath.hyp1f1(a, b, x))


@given(
    a=st.floats(-12.0, 6.0),
    b=st.floats(1.5, 18.5),
    x=st.floats(0.0, 60.0),
)
def test_kummer_matches_mpmath_or_refuses(a, b, x):
    if terminating_index(a) is not None:
        a = round(a)
    expected = mp_1f1(a, b, x)
    try:
        got = kummer_1f1(a, b, x)
    except AccuracyError:
        return
    assert got == pytest.approx(expected, rel=1e-8, abs=1e-300)


@pytest.mark.parametrize(
    "a,b,x",
    [(-5.3, 1.5, 40.0), (-20.25, 2.5, 90.0), (-0.5, 17.5, 200.0), (-3.9, 5.5, 25.0), (0.7, 3.5, 50.0)],
)
def test_kummer_cancelling_regime(a, b, x):
    assert kummer_1f1(a, b, x) == pytest.approx(mp_1f1(a, b, x), rel=1e-9)


@pytest.mark.parametrize(
    "a,b,x,expected",
    [
        (0.7, 1.5, 0.0, 1.0),
        (0.0, 1.5, 3.2, 1.0),
        (-1.0, 1.5, 0.9, 0.4),
        (-2.0, 2.5, 1.3, 1 - (2 / 2.5) * 1.3 + (2 * 1 / (2.5 * 3.5)) * 1.3**2 / 2),
    ],
)
def test_kummer_closed_values(a, b, x, expected):
    assert kummer_1f1(a, b, x) == pytest.approx(expected, rel=1e-14, abs=1e-15)


@given(n=st.integers(0, 12), l=st.integers(0, 16), x=st.floats(0.0, 80.0))
def test_terminating_polynomial_is_laguerre(n, l, x):
    # 1F1(-n; b; x) = n! / (b)_n * L_n^(b-1)(x)
    b = l + 1.5
    expected = eval_genlaguerre(n, b - 1, x) * math.factorial(n) * math.gamma(b) / math.gamma(n + b)
    scale = max(1.0, abs(expected), float(eval_genlaguerre(n, b - 1, -x)))
    assert abs(kummer_1f1(-n, b, x) - expected) <= 1e-12 * scale


def test_near_integer_parameter_snaps_to_polynomial():
    assert kummer_1f1(-2.0 + 5e-13, 2.5, 1.3) == kummer_1f1(-2.0, 2.5, 1.3)
    assert kummer_1f1(1e-12, 1.5, 14.0) == 1.0


@given(a=st.floats(-30.0, 30.0), b=st.floats(0.6, 20.0), x=st.floats(0.0, 60.0))
def test_kummer_contiguous_relation(a, b, x):
    if any(terminating_index(a + d) is not None for d in (-1, 0, 1)):
        a = float(round(a))
    try:
        lo = kummer_1f1(a - 1, b, x)
        mid = kummer_1f1(a, b, x)
        hi = kummer_1f1(a + 1, b, x)
    except AccuracyError:
        return
    terms = ((b - a) * lo, (2 * a - b + x) * mid, -a * hi)
    assert abs(sum(terms)) <= 1e-9 * max(max(abs(t) for t in terms), 1.0)


def test_terminating_index_tolerance():
    assert terminating_index(-3.0) == 3
    assert terminating_index(-3.0 + 5e-13) == 3
    assert terminating_index(-3.0 + 1e-9) is None
    assert terminating_index(0.5) is None
    assert terminating_index(-65.0) is None


def test_split_parameter_resolves_tiny_offsets():
    # 1F1(-n + d; b; x) - 1F1(-n; b; x) is linear in d for tiny d
    b, x = 2.5, 49.0
    base = kummer_1f1_array(0.0, b, [x], a_int=-1)[0]
    for d in (1e-14, 1e-18, -1e-20):
        val = kummer_1f1_array(d, b, [x], a_int=-1)[0]
        with mpmath.workdps(60):
            exact = float(mpmath.hyp1f1(mpmath.mpf(-1) + mpmath.mpf(d), b, x))
        assert val == pytest.approx(exact, rel=1e-10)
        assert val != base


def test_with_bound_reports_error_scale():
    value, bound = kummer_1f1_with_bound(-7.3, 1.5, 60.0)
    assert abs(value - mp_1f1(-7.3, 1.5, 60.0)) <= max(bound, 1e-12 * abs(value))


def test_kummer_domain_errors():
    with pytest.raises(DomainError):
        kummer_1f1(1.0, -2.0, 1.0)
    with pytest.raises(DomainError):
        kummer_1f1(1.0, 1.5, -1.0)


@given(l=st.integers(0, 16), x=st.floats(0.0, 300.0, allow_subnormal=False))
def test_spherical_bessel_matches_scipy(l, x):
    assert spherical_bessel_j(l, x) == pytest.approx(float(spherical_jn(l, x)), rel=1e-10, abs=1e-14)


def test_spherical_bessel_examples():
    assert abs(spherical_bessel_j(0, math.pi)) < 1e-14
    assert spherical_bessel_j(1, 1e-4) == pytest.approx(1e-4 / 3, rel=1e-8)
    with mpmath.workdps(40):
        x = mpmath.mpf("6.5")
        rayleigh = ((105 / x**5 - 45 / x**3 + 1 / x) * mpmath.sin(x) - (105 / x**4 - 10 / x**2) * mpmath.cos(x))
    assert spherical_bessel_j(4, 6.5) == pytest.approx(float(rayleigh), rel=1e-12)


@given(l=st.integers(1, 10), x=st.floats(0.5, 50.0))
def test_spherical_bessel_recurrence(l, x):
    lhs = spherical_bessel_j(l - 1, x) + spherical_bessel_j(l + 1, x)
    rhs = (2 * l + 1) / x * spherical_bessel_j(l, x)
    scale = max(abs(spherical_bessel_j(l - 1, x)), abs(spherical_bessel_j(l + 1, x)))
    assert abs(lhs - rhs) <= 1e-10 * scale


def test_spherical_bessel_derivative():
    x = np.linspace(0.0, 50.0, 501)
    for l in (0, 1, 5, 16):
        j, dj = spherical_bessel_j_array(l, x, derivative=True)
        np.testing.assert_allclose(j, spherical_jn(l, x), rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(dj, spherical_jn(l, x, derivative=True), rtol=1e-9, atol=1e-13)


def test_spherical_bessel_order_limit():
    with pytest.raises(DomainError):
        spherical_bessel_j(17, 1.0)


@pytest.mark.parametrize("l", range(0, 17, 2))
def test_bessel_zeros_are_zeros_in_order(l):
    zeros = [bessel_zero(l, k) for k in range(1, 6)]
    assert all(a < b for a, b in zip(zeros, zeros[1:]))
    for z in zeros:
        assert abs(spherical_jn(l, z)) < 1e-13
    if l == 0:
        np.testing.assert_allclose(zeros, np.pi * np.arange(1, 6), rtol=1e-15)


def test_bessel_zeros_interlace():
    for l in range(0, 16):
        for k in range(1, 6):
            assert bessel_zero(l, k) < bessel_zero(l + 1, k) < bessel_zero(l, k + 1)


def test_bessel_zero_known_values():
    assert bessel_zero(0, 2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert bessel_zero(1, 1) == pytest.approx(4.493409457909064, rel=1e-14)
    assert bessel_zero(3, 1) == pytest.approx(6.987932000500520, rel=1e-14)


@given(deg=st.integers(0, 2 * 64 - 1))
def test_gauss_legendre_exact_for_polynomials(deg):
    rule = gauss_legendre(64, 0.0, 2.0)
    assert rule.integrate(rule.nodes**deg) == pytest.approx(2.0 ** (deg + 1) / (deg + 1), rel=1e-13)


def test_gauss_legendre_textbook_rules():
    rule = gauss_legendre(2, -1.0, 1.0)
    np.testing.assert_allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(rule.weights, [1.0, 1.0], rtol=1e-15)
    rule = gauss_legendre(5, -1.0, 1.0)
    assert rule.integrate(rule.nodes**4) == pytest.approx(0.4, rel=1e-14)


def test_gauss_legendre_panel_split_agrees():
    whole = gauss_legendre(200, 0.0, 0.5)
    left, right = gauss_legendre(200, 0.0, 0.25), gauss_legendre(200, 0.25, 0.5)
    f = lambda r: np.exp(-r.nodes**2)
    assert whole.integrate(f(whole)) == pytest.approx(left.integrate(f(left)) + right.integrate(f(right)), rel=1e-13)
    assert whole.integrate(f(whole)) == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(0.5), rel=1e-13)


@given(order=st.integers(2, 300), a=st.floats(-5.0, 5.0), width=st.floats(0.01, 10.0))
def test_quadrature_rule_invariants(order, a, width):
    b = a + width
    rule = gauss_legendre(order, a, b)
    assert np.all(np.diff(rule.nodes) > 0)
    assert a < rule.nodes[0] and rule.nodes[-1] < b
    assert rule.weights.sum() == pytest.approx(b - a, rel=1e-13)


def test_gauss_legendre_rejects_bad_arguments():
    with pytest.raises(DomainError):
        gauss_legendre(1, 0.0, 1.0)
    with pytest.raises(DomainError):
        gauss_legendre(4, 1.0, 0.0)


def test_composite_rule_spans_interval():
    rule = composite_gauss_legendre(128, 0.0, 3.0, 4)
    assert len(rule) == 512
    assert rule.integrate(np.ones_like(rule.nodes)) == pytest.approx(3.0, rel=1e-15)
    assert rule.integrate(np.exp(-rule.nodes)) == pytest.approx(1 - math.exp(-3.0), rel=1e-14)
