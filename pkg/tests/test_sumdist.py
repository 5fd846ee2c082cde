import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telesum.errors import DomainError
from telesum.numerics.differences import central_derivative, forward_second_derivative
from telesum.numerics.fourier import InversionConfig, forward_transform, invert_charfn
from telesum.numerics.quadrature import integrate
from telesum.specfun import bessel_i0, bessel_i1
from telesum.sumdist import (
    SumParams,
    sum_atoms,
    sum_cdf,
    sum_cdf_alt,
    sum_charfn,
    sum_law,
    sum_pdf_ac,
    sum_pdf_ac_alt,
    w_hat,
)
from telesum.telegraph import TelegraphParams, tele_charfn

P = TelegraphParams(1.0, 1.0)
FAST = TelegraphParams(2.0, 0.8)

# 40-digit mpmath values: quadrature of the density and its arc integral
PDF_REF = {0.0: 0.2112641082985782260230, 0.5: 0.2031230112791885427454,
           2.0: 0.1261341986355155826781, 3.5: 0.03766822613208334153979}
CDF_REF = {-3.0: 0.04329211416012963809486, -1.0: 0.2940713384326635566624,
           0.5: 0.6086551571324137362891, 2.5: 0.9176508661791653750099}


def test_sum_params():
    sp = SumParams(P, P)
    assert sp.closed_form
    assert not SumParams(P, FAST).closed_form
    assert not SumParams(P, P, 0.1, 0.0).closed_form
    assert SumParams.equal(1.0, 1.0) == sp
    with pytest.raises(DomainError):
        sum_atoms(SumParams(P, FAST), 1.0)


def test_atoms():
    a = sum_atoms(P, 2.0)
    e = math.exp(-4)
    assert [x.location for x in a] == [-4.0, 0.0, 4.0]
    assert [x.mass for x in a] == [e / 4, e / 2, e / 4]
    np.testing.assert_allclose(sum(x.mass for x in a), e, rtol=1e-15)
    with pytest.raises(DomainError):
        sum_atoms(P, 0.0)


def test_pdf_reference_values():
    for x, ref in PDF_REF.items():
        np.testing.assert_allclose(sum_pdf_ac(P, x, 2.0), ref, rtol=1e-13)
        np.testing.assert_allclose(sum_pdf_ac_alt(P, x, 2.0), ref, rtol=1e-13)


def test_pdf_outside_support():
    assert sum_pdf_ac(P, 4.0, 2.0) == 0.0
    assert sum_pdf_ac(P, -4.0, 2.0) == 0.0
    assert sum_pdf_ac_alt(P, 7.0, 2.0) == 0.0


def test_pdf_at_zero_direct():
    lam, c, t = 1.0, 1.0, 2.0
    arc = integrate(lambda tau: bessel_i0(lam * tau / c), 0.0, 2 * c * t).value
    ref = lam * math.exp(-2 * lam * t) / (2 * c) * (
        bessel_i0(2 * lam * t) + 0.5 * bessel_i1(2 * lam * t) + lam / (2 * c) * arc
    )
    np.testing.assert_allclose(sum_pdf_ac_alt(P, 0.0, t), ref, rtol=1e-13)


def test_pdf_near_edge_finite():
    v = sum_pdf_ac_alt(P, 1.999 * 2.0, 2.0)
    assert np.isfinite(v) and v > 0
    edge = sum_pdf_ac(P, np.nextafter(4.0, 0), 2.0)
    np.testing.assert_allclose(edge, math.exp(-4) / 2 * (1 + 1), rtol=1e-6)


def test_pdf_forms_agree_random():
    rng = np.random.default_rng(11)
    t = rng.uniform(0.1, 4.0, 100)
    x = rng.uniform(-1, 1, 100) * 2 * t
    for xi, ti in zip(x, t):
        np.testing.assert_allclose(sum_pdf_ac(P, xi, ti), sum_pdf_ac_alt(P, xi, ti), rtol=1e-12)


def test_pdf_exactly_even():
    x = np.linspace(0, 4, 97)
    np.testing.assert_array_equal(sum_pdf_ac(P, x, 2.0), sum_pdf_ac(P, -x, 2.0))


@pytest.mark.parametrize("c", [1.0, 2.0])
@pytest.mark.parametrize("lam", [2.0, 0.5, 1.0])
@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_normalisation(c, lam, t):
    p = TelegraphParams(c, lam)
    ac = integrate(lambda x: sum_pdf_ac(p, x, t), -2 * c * t, 2 * c * t, points=(0.0,)).value
    atoms = math.fsum(a.mass for a in sum_atoms(p, t))
    assert abs(atoms + ac - 1) < 1e-9
    assert abs(ac - (1 - math.exp(-2 * lam * t))) < 1e-9


def test_cdf_reference_values():
    for x, ref in CDF_REF.items():
        np.testing.assert_allclose(sum_cdf(P, x, 2.0), ref, rtol=1e-12)


def test_cdf_outer_branches():
    assert sum_cdf(P, -4.0, 2.0) == 0.0
    assert sum_cdf(P, -9.0, 2.0) == 0.0
    assert sum_cdf(P, 4.0 + 1e-12, 2.0) == 1.0


def test_cdf_boundary_limits():
    e = math.exp(-4)
    assert abs(sum_cdf(P, 4.0, 2.0) - (1 - e / 4)) < 1e-9
    assert abs(sum_cdf(P, -4.0 * (1 - 1e-8), 2.0) - e / 4) < 1e-6
    assert abs(sum_cdf_alt(P, 4.0, 2.0) - (1 - e / 4)) < 1e-9


def test_cdf_jump_at_zero():
    for p, t in ((P, 2.0), (FAST, 1.5)):
        e = math.exp(-2 * p.lam * t)
        assert sum_cdf(p, 0.0, t) == pytest.approx(0.5 - e / 4, abs=1e-15)
        jump = sum_cdf(p, 1e-300, t) - sum_cdf(p, 0.0, t)
        assert abs(jump - e / 2) < 1e-10


def test_cdf_derivative_matches_pdf():
    x = np.linspace(-3.98, 3.98, 60)
    x = x[(np.abs(x) > 0.01) & (np.abs(np.abs(x) - 4) > 0.01)][:50]
    h = 1e-5
    fd = (sum_cdf(P, x + h, 2.0) - sum_cdf(P, x - h, 2.0)) / (2 * h)
    np.testing.assert_allclose(fd, sum_pdf_ac(P, x, 2.0), rtol=1e-6)


def test_cdf_symmetry():
    rng = np.random.default_rng(5)
    x = rng.uniform(-4.5, 4.5, 50)
    x[:3] = [-4.0, 0.0, 4.0]
    law = sum_law(P, 2.0)
    right = sum_cdf(P, x + 1e-12 * 2.0, 2.0) + law.mass_at(x)
    right = np.where(np.isin(x, [-4.0, 0.0, 4.0]), law.cdf_right(x), right)
    np.testing.assert_allclose(sum_cdf(P, -x, 2.0) + right, 1.0, atol=1e-10)


def test_cdf_forms_agree():
    rng = np.random.default_rng(7)
    for p, t in ((P, 2.0), (FAST, 1.5), (TelegraphParams(0.5, 2.0), 3.0)):
        top = 2 * p.c * t
        x = rng.uniform(-top, top, 200)
        x[0] = top
        np.testing.assert_allclose(sum_cdf_alt(p, x, t), sum_cdf(p, x, t), atol=1e-10, rtol=0)


def test_cdf_monotone_fine_grid():
    # G+ and G- each carry a +/- cos(lam x/c) term; the sum still never decreases
    for p, t in ((P, 2.0), (FAST, 1.5), (TelegraphParams(1.0, 3.0), 2.0)):
        x = np.linspace(-2 * p.c * t - 0.1, 2 * p.c * t + 0.1, 10_000)
        v = sum_cdf(p, x, t)
        assert np.all(np.diff(v) >= -1e-14)
        v_alt = sum_cdf_alt(p, x[::10], t)
        assert np.all(np.diff(v_alt) >= -1e-13)


@settings(max_examples=25, deadline=None)
@given(
    st.floats(min_value=0.2, max_value=3.0),
    st.floats(min_value=0.2, max_value=3.0),
    st.floats(min_value=0.1, max_value=3.0),
    st.floats(min_value=-1.0, max_value=1.0),
)
def test_cdf_forms_agree_property(c, lam, t, frac):
    p = TelegraphParams(c, lam)
    x = frac * 2 * c * t
    assert abs(sum_cdf(p, x, t) - sum_cdf_alt(p, x, t)) < 1e-10
    assert 0.0 <= sum_cdf(p, x, t) <= 1.0


def test_charfn():
    xi = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(sum_charfn(P, xi, 2.0), tele_charfn(P, xi, 2.0) ** 2, rtol=1e-14)
    assert sum_charfn(P, 0.0, 2.0) == 1.0
    assert sum_charfn(P, 3.0, 0.0) == 1.0


def test_charfn_second_time_derivative_at_zero():
    for xi in (0.3, 1.0, 2.5):
        d2 = forward_second_derivative(lambda s: sum_charfn(P, xi, s), 0.0, 1e-4)
        np.testing.assert_allclose(d2, -2 * xi ** 2, rtol=1e-4)


def test_forward_transform_of_sum_law():
    law = sum_law(P, 2.0)
    xi = np.array([0.05, 0.3, 0.6, 0.9, 0.999, 1.001, 1.4, 2.0, 3.5, 6.0])
    np.testing.assert_allclose(forward_transform(law, xi), sum_charfn(P, xi, 2.0), atol=1e-7)


def test_inversion_matches_density():
    atoms = tuple((a.location, a.mass) for a in sum_atoms(P, 2.0))
    cfg = InversionConfig(atoms=atoms, support=(-4.0, 4.0))
    x = 0.5
    res = invert_charfn(lambda xi: sum_charfn(P, xi, 2.0), cfg, x, full_output=True)
    assert abs(res.value - sum_pdf_ac(P, x, 2.0)) < 1e-6
    assert abs(res.imag) < 1e-12


def test_w_hat_is_time_derivative():
    for xi in (0.0, 0.4, 1.0, 2.0, 5.0):
        for t in (0.5, 1.0, 2.0):
            fd = central_derivative(lambda s: math.exp(2 * s) * sum_charfn(P, xi, s), t, 1e-3, 1)
            np.testing.assert_allclose(w_hat(P, xi, t), fd, rtol=1e-6)


def test_w_hat_at_zero_frequency():
    for t in (0.3, 1.0, 2.0):
        np.testing.assert_allclose(w_hat(P, 0.0, t), 2 * math.exp(2 * t), rtol=1e-14)


def test_w_hat_ode():
    for xi in (0.5, 2.0):
        d2 = central_derivative(lambda s: w_hat(P, xi, s), 1.0, 1e-3, 2)
        np.testing.assert_allclose(d2, 4 * (1 - xi ** 2) * w_hat(P, xi, 1.0), rtol=1e-5)


def test_w_hat_continuous_at_branch_point():
    xi = 1.0 + np.array([-1e-8, 0.0, 1e-8])
    v = w_hat(P, xi, 1.5)
    np.testing.assert_allclose(v, v[1], rtol=1e-7)


def test_sum_law_object():
    law = sum_law(P, 2.0)
    assert law.support == (-4.0, 4.0)
    assert abs(law.total_mass() - 1) < 1e-10
    x = np.linspace(-4.5, 4.5, 19)
    np.testing.assert_allclose(law.cdf(x), sum_cdf(P, x, 2.0), atol=1e-15)
    assert law.mass_at(0.0) == math.exp(-4) / 2


def test_large_rate_stays_finite():
    p = TelegraphParams(1.0, 50.0)
    v = sum_pdf_ac(p, np.array([0.0, 1.0, 1.99]), 1.0)
    assert np.all(np.isfinite(v)) and np.all(v > 0)
