import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from gsqg_fronts.kernels import PhysicalParams
from gsqg_fronts.stability import (NoInstabilityError, NoSignChangeError, discriminant,
                                   dispersion_scan, find_marginal_wavenumber,
                                   find_peak_growth, growth_rates)
from gsqg_fronts.symbols import symbol_b1

EULER = PhysicalParams(2.0, 1.0, -1.0, 1.0)
SQG = PhysicalParams(1.0, 1.0, -1.0, 1.0)


def test_euler_discriminant_closed_form():
    xi = np.linspace(-4, 4, 801)
    xi = xi[xi != 0]
    expected = np.exp(-4 * np.abs(xi)) - (1 - 2 * np.abs(xi)) ** 2
    assert np.allclose(discriminant(EULER, xi), expected, rtol=0, atol=1e-14)


def test_sqg_discriminant_closed_form():
    for h in (0.5, 1.0, 2.0):
        p = PhysicalParams(1.0, 1.0, -1.0, h)
        xi = np.geomspace(1e-3, 5, 300)
        k0 = special.k0(2 * h * xi)
        expected = 16 * xi**2 * k0**2 - 16 * xi**2 * (np.log(h * xi) + np.euler_gamma) ** 2
        assert np.allclose(discriminant(p, xi), expected, rtol=1e-12, atol=1e-14)


def test_marginal_wavenumbers():
    e = find_marginal_wavenumber(EULER)
    s = find_marginal_wavenumber(SQG)
    assert e == pytest.approx(0.63923, abs=1e-4)
    assert s == pytest.approx(0.71129, abs=1e-4)
    assert abs(discriminant(EULER, e)) < 1e-12
    assert abs(discriminant(SQG, s)) < 1e-12


def test_marginal_scaling_in_h():
    base = find_marginal_wavenumber(EULER)
    assert find_marginal_wavenumber(PhysicalParams(2.0, 1.0, -1.0, 2.0)) == \
        pytest.approx(base, abs=1e-12)


def test_marginal_with_explicit_bracket():
    assert find_marginal_wavenumber(EULER, (0.5, 0.8)) == \
        pytest.approx(find_marginal_wavenumber(EULER), abs=1e-13)
    with pytest.raises(NoSignChangeError):
        find_marginal_wavenumber(EULER, (0.8, 2.0))
    with pytest.raises(NoSignChangeError):
        find_marginal_wavenumber(EULER, (0.8, 0.5))
    with pytest.raises(NoSignChangeError):
        find_marginal_wavenumber(PhysicalParams(1.0, 1.0, 1.0, 1.0))


def test_peak_growth_sqg():
    hx, rate = find_peak_growth(SQG)
    assert hx == pytest.approx(0.51756, abs=1e-3)
    # brute-force oracle on a fine grid
    grid = np.arange(0.40, 0.65, 1e-6)
    ref = 0.5 * np.sqrt(np.maximum(discriminant(SQG, grid), 0))
    assert rate == pytest.approx(ref.max(), rel=1e-10)
    assert hx == pytest.approx(grid[np.argmax(ref)], abs=2e-6)
    assert growth_rates(SQG, hx)[0].real == pytest.approx(rate, rel=1e-12)


def test_peak_growth_euler_against_scan():
    hx, rate = find_peak_growth(EULER)
    x = np.arange(1e-6, 0.64, 1e-6)
    g = 0.5 * np.sqrt(np.maximum(np.exp(-4 * x) - (1 - 2 * x) ** 2, 0))
    assert hx == pytest.approx(x[np.argmax(g)], abs=2e-6)
    assert rate == pytest.approx(g.max(), rel=1e-10)


def test_peak_growth_requires_instability():
    with pytest.raises(NoInstabilityError):
        find_peak_growth(PhysicalParams(1.5, 1.0, 1.0, 1.0))


def _any_params():
    nz = st.floats(0.2, 3) | st.floats(-3, -0.2)
    return st.builds(PhysicalParams, st.sampled_from([0.5, 1.0, 1.5, 2.0]), nz, nz,
                     st.floats(0.3, 3))


@settings(max_examples=80)
@given(_any_params(), st.floats(0.01, 10))
def test_rate_invariants(params, xi):
    mu_p, mu_m = growth_rates(params, xi)
    d = discriminant(params, xi)
    if d > 0:
        assert mu_p.real == pytest.approx(math.sqrt(d) / 2, rel=1e-12)
        assert mu_m.real == -mu_p.real
    else:
        assert mu_p.real == 0 and mu_m.real == 0
    if params.alpha < 2:
        trace = -1j * xi * symbol_b1(params.alpha, xi) * (params.theta_plus + params.theta_minus)
        assert mu_p + mu_m == pytest.approx(trace, rel=1e-12, abs=1e-12)
    assert discriminant(params, -xi) == d
    # conjugation maps the pair at xi onto the pair at -xi
    at_minus = sorted(growth_rates(params, -xi), key=lambda z: (z.real, z.imag))
    conj = sorted(np.conj([mu_p, mu_m]), key=lambda z: (z.real, z.imag))
    assert np.allclose(at_minus, conj, rtol=1e-12, atol=1e-12)


def test_repeated_root_at_marginal_point():
    x = find_marginal_wavenumber(SQG)
    mu_p, mu_m = growth_rates(SQG, x)
    assert abs(mu_p - mu_m) < 1e-5


def test_stability_for_same_sign_jumps():
    rng = np.random.default_rng(11)
    for _ in range(100):
        alpha = rng.choice([0.5, 1.0, 1.5, 2.0])
        sign = rng.choice([-1.0, 1.0])
        p = PhysicalParams(alpha, sign * rng.uniform(0.1, 5), sign * rng.uniform(0.1, 5),
                           rng.uniform(0.1, 5))
        xi = rng.uniform(1e-3, 20, 50) * rng.choice([-1, 1], 50)
        mu_p, mu_m = growth_rates(p, xi)
        assert np.all(mu_p.real == 0) and np.all(mu_m.real == 0)


def test_dispersion_scan():
    res = dispersion_scan(SQG, np.linspace(0.05, 2, 100))
    assert res.marginal_hxi == pytest.approx(find_marginal_wavenumber(SQG))
    assert res.peak_hxi == pytest.approx(0.51756, abs=1e-3)
    cp, cm = res.wave_speed
    assert cp.shape == (100,) and cp.dtype == np.float64
    # exp(i xi x + mu t) = exp(i xi (x - c t)) once Re mu is set aside
    assert np.allclose(1j * res.xi * (-cp), 1j * res.mu_plus.imag)
    assert np.allclose(res.mu_plus, growth_rates(SQG, res.xi)[0])
    stable = dispersion_scan(PhysicalParams(1.0, 1.0, 1.0, 1.0), np.linspace(0.1, 1, 10))
    assert stable.marginal_hxi is None and stable.peak_hxi is None
