import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from telesum.errors import DomainError
from telesum.specfun import (
    BESSEL_CROSSOVER,
    SeriesControl,
    bessel_i0,
    bessel_i0_scaled,
    bessel_i1,
    bessel_i1_ratio_scaled,
    bessel_i1_scaled,
    double_factorial,
    hyp2f1_at_one,
    hyp2f1_term,
    hyp2f1_term_direct,
    hyp3f2_at_one,
    hyp3f2_term,
    hyp3f2_term_direct,
    hyp3f2_terminating,
    hyperbolic_pair,
    pochhammer,
)

# 40-digit values from mpmath.besseli
I0_1 = 1.266065877752008335598
I0_2 = 2.279585302336067267437
I1_2 = 1.590636854637329063382
I0E_700 = 0.01508129565153135758699
I1E_1E6 = 0.0003989421307980307763133


def brute_series(nu, z, terms=30):
    return math.fsum((z / 2) ** (2 * k + nu) / (math.factorial(k) * math.factorial(k + nu)) for k in range(terms))


def test_bessel_i0_values():
    assert bessel_i0(0.0) == 1.0
    np.testing.assert_allclose(bessel_i0(1.0), I0_1, rtol=1e-15)
    np.testing.assert_allclose(bessel_i0(2.0), I0_2, rtol=1e-15)
    np.testing.assert_allclose(bessel_i0(2.0), brute_series(0, 2.0), rtol=1e-15)


def test_bessel_i1_values():
    assert bessel_i1(0.0) == 0.0
    assert abs(bessel_i1(1e-6) - 5e-7) < 1e-18
    np.testing.assert_allclose(bessel_i1(2.0), I1_2, rtol=1e-15)
    np.testing.assert_allclose(bessel_i1(2.0), brute_series(1, 2.0), rtol=1e-15)


def test_scaled_large_argument():
    assert bessel_i0_scaled(0.0) == 1.0
    np.testing.assert_allclose(bessel_i0_scaled(700.0), I0E_700, rtol=1e-14)
    np.testing.assert_allclose(bessel_i1_scaled(1e6), I1E_1E6, rtol=1e-14)
    assert np.isfinite(bessel_i0_scaled(1e6))


def test_scaled_consistency_below_crossover():
    z = np.linspace(0, 30, 301)
    np.testing.assert_allclose(bessel_i0_scaled(z) * np.exp(z), bessel_i0(z), rtol=1e-12)
    np.testing.assert_allclose(bessel_i1_scaled(z) * np.exp(z), bessel_i1(z), rtol=1e-12)


def test_branches_agree_at_crossover():
    mpmath = pytest.importorskip("mpmath")
    z = BESSEL_CROSSOVER
    for nu, f in ((0, bessel_i0_scaled), (1, bessel_i1_scaled)):
        ref = float(mpmath.besseli(nu, z) * mpmath.exp(-z))
        np.testing.assert_allclose(f(z), ref, rtol=1e-12)
        np.testing.assert_allclose(f(np.nextafter(z, 100)), ref, rtol=1e-12)


def test_against_scipy_on_wide_grid():
    z = np.concatenate([np.linspace(0, 50, 501), np.geomspace(50, 1e6, 200)])
    np.testing.assert_allclose(bessel_i0_scaled(z), special.i0e(z), rtol=1e-14)
    np.testing.assert_allclose(bessel_i1_scaled(z), special.i1e(z), rtol=1e-14, atol=1e-300)


def test_ratio_scaled():
    assert bessel_i1_ratio_scaled(0.0) == 1.0
    z = np.array([1e-8, 0.3, 0.999, 1.0, 1.001, 5.0, 100.0])
    np.testing.assert_allclose(bessel_i1_ratio_scaled(z), 2 * special.i1e(z) / z, rtol=1e-14)


def test_i0_positive_and_increasing():
    z = np.linspace(0, 30, 3001)
    v = bessel_i0(z)
    assert np.all(v >= 1.0)
    assert np.all(np.diff(v) > 0)


def test_domain_errors():
    for f in (bessel_i0, bessel_i1, bessel_i0_scaled, bessel_i1_scaled):
        with pytest.raises(DomainError):
            f(np.inf)
        with pytest.raises(DomainError):
            f(np.nan)
        with pytest.raises(DomainError):
            f(-1.0)


def test_series_control():
    ctl = SeriesControl()
    assert ctl.rel_tol == 1e-14 and ctl.max_terms == 500
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=0)


def test_series_control_env(monkeypatch):
    monkeypatch.setenv("TELEGRAPH_MAX_TERMS", "37")
    assert SeriesControl.default().max_terms == 37
    monkeypatch.setenv("TELEGRAPH_MAX_TERMS", "abc")
    with pytest.raises(DomainError):
        SeriesControl.default()


def test_truncation_is_reported():
    from telesum.errors import TruncationError

    with pytest.raises(TruncationError):
        bessel_i0(25.0, SeriesControl(max_terms=3))


def test_pochhammer():
    assert pochhammer(3, 0) == 1
    assert pochhammer(-4, 2) == 12
    assert pochhammer(-4, 5) == 0
    assert pochhammer(0.5, 3) == 0.5 * 1.5 * 2.5
    for k in range(21):
        for s in range(k + 1):
            assert pochhammer(-k, s) == (-1) ** s * math.factorial(k) / math.factorial(k - s)
        for s in range(k + 1, k + 5):
            assert pochhammer(-k, s) == 0


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105
    assert double_factorial(8) == 384
    with pytest.raises(DomainError):
        double_factorial(-2)


def test_hyp2f1_term_examples():
    assert hyp2f1_term(0, 0.3, 1.7, 0.9) == 1.0
    np.testing.assert_allclose(hyp2f1_term(1, 0.5, 1.5, 1.0), 2 / 3, rtol=1e-15)
    np.testing.assert_allclose(hyp2f1_term(3, 0.5, 1.5, 1.0), 48 / 105, rtol=1e-15)


def test_hyp2f1_term_pole():
    with pytest.raises(DomainError):
        hyp2f1_term(3, 0.5, -1.0, 0.5)


def test_hyp2f1_term_matches_scipy():
    z = np.linspace(0, 1, 11)
    for k in range(12):
        np.testing.assert_allclose(hyp2f1_term(k, 0.5, 1.5, z), special.hyp2f1(-k, 0.5, 1.5, z), rtol=1e-12)


def test_hyp3f2_term_examples():
    assert hyp3f2_term(0, 0.37) == 1.0
    assert abs(hyp3f2_term(1, 1.0)) < 1e-15
    np.testing.assert_allclose(hyp3f2_term(2, 1.0), 8 / 9, rtol=1e-14)


def test_hyp3f2_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    for k in (1, 4, 9):
        for z in (0.1, 0.55, 0.97):
            ref = float(mpmath.hyp3f2(-k, -k - 0.5, 0.5, -k + 0.5, 1.5, z))
            np.testing.assert_allclose(hyp3f2_term(k, z), ref, rtol=1e-12)


def test_at_one_closed_forms():
    assert hyp2f1_at_one(0) == 1.0
    np.testing.assert_allclose(hyp2f1_at_one(2), 8 / 15, rtol=1e-15)
    np.testing.assert_allclose(hyp3f2_at_one(4), 384 / 525, rtol=1e-15)
    for k in range(41):
        np.testing.assert_allclose(hyp2f1_term(k, 0.5, 1.5, 1.0), hyp2f1_at_one(k), rtol=1e-12)
        np.testing.assert_allclose(
            hyp2f1_at_one(k), double_factorial(2 * k) / double_factorial(2 * k + 1), rtol=1e-13
        )


def test_hyp3f2_at_one_matches_sum():
    for k in range(41):
        val = hyp3f2_term(k, 1.0)
        if k % 2:
            assert abs(val) < 1e-12
        else:
            ref = 2 ** k * math.factorial(k) / ((k + 1) * double_factorial(2 * k - 1))
            assert hyp3f2_at_one(k) == pytest.approx(ref, rel=1e-13)
        assert abs(val - hyp3f2_at_one(k)) < 1e-10


def test_integral_and_direct_paths_agree():
    z = np.linspace(0, 1, 13)
    for k in range(14):
        np.testing.assert_allclose(hyp3f2_term(k, z), hyp3f2_term_direct(k, z), atol=1e-12)
        np.testing.assert_allclose(hyp2f1_term(k, 0.5, 1.5, z), hyp2f1_term_direct(k, 0.5, 1.5, z), atol=1e-12)
    for k in range(1, 14):
        np.testing.assert_allclose(
            hyp2f1_term(k, -k - 0.5, -k + 0.5, z), hyp2f1_term_direct(k, -k - 0.5, -k + 0.5, z), atol=1e-10
        )


def test_direct_sum_loses_digits_at_large_k():
    # the reason the integral path exists: binom(k, k/2) * eps growth
    assert abs(hyp3f2_term_direct(39, 1.0)) > 1e-12
    assert abs(hyp3f2_term(39, 1.0)) < 1e-12


def test_hyp3f2_terminating_general():
    # 3F2(-k, b, 1; c, 1; z) = 2F1(-k, b; c; z)
    z = np.linspace(0, 1, 7)
    np.testing.assert_allclose(hyp3f2_terminating(5, 0.5, 1.0, 1.5, 1.0, z), hyp2f1_term(5, 0.5, 1.5, z), rtol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-60, max_value=60, allow_nan=False))
def test_hyperbolic_pair(u):
    ch, sh = hyperbolic_pair(u)
    r = math.sqrt(abs(u))
    if u > 0:
        np.testing.assert_allclose(ch, math.cosh(r), rtol=1e-13)
        np.testing.assert_allclose(sh, math.sinh(r) / r, rtol=1e-13)
    elif u < 0:
        np.testing.assert_allclose(ch, math.cos(r), rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(sh, math.sin(r) / r, rtol=1e-12, atol=1e-15)
    else:
        assert (ch, sh) == (1.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0, max_value=700))
def test_bessel_scaled_property(z):
    np.testing.assert_allclose(bessel_i0_scaled(z), special.i0e(z), rtol=2e-14)
    np.testing.assert_allclose(bessel_i1_scaled(z), special.i1e(z), rtol=2e-14, atol=1e-300)
    assert bessel_i1_scaled(z) <= bessel_i0_scaled(z)


def test_poly_moments_match_integral_path():
    from telesum.specfun import poly_moments

    z = np.linspace(0.0, 1.0, 501)
    gen = poly_moments(z)
    for k in range(60):
        p, q = next(gen)
        np.testing.assert_allclose(p, hyp2f1_term(k, 0.5, 1.5, z), rtol=0, atol=1e-13)
        np.testing.assert_allclose((k + 0.5) / (k + 1) * (p + q), hyp3f2_term(k, z), rtol=0, atol=1e-13)
