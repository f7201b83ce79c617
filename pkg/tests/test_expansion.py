import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from gsqg_fronts.expansion import (TruncationWarning, _mean_prefactor, _multiplier_prefactor,
                                   _self_series, bessel_order, build_tables, coeff_c, coeff_c_tilde, coeff_d,
                                   kernel_Tn, series_nonlinearity, series_terms, tn_bound)
from gsqg_fronts.grid import FrontState, SpectralGrid
from gsqg_fronts.kernels import PhysicalParams
from gsqg_fronts.quadrature import nonlinear_terms


def taylor_fd(f, n, h0=0.1, levels=6):
    """n-th Taylor coefficient at 0 from central differences with Richardson extrapolation."""
    def cd(h):
        k = np.arange(n + 1)
        w = (-1.0) ** k * np.array([math.comb(n, j) for j in k])
        return np.sum(w * np.array([f((n / 2 - j) * h) for j in k])) / h**n / math.factorial(n)
    table = [[cd(h0 / 2**i)] for i in range(levels)]
    for j in range(1, levels):
        for i in range(j, levels):
            table[i].append(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (4**j - 1))
    return table[-1][-1]


def test_c_first_coefficient():
    for alpha in (0.2, 0.9, 1.0, 1.7):
        assert coeff_c(alpha, 1) == pytest.approx(alpha / 2 - 1, rel=1e-15)
    assert coeff_c(1.0, 1) == -0.5


def test_c_against_finite_difference():
    fd = taylor_fd(lambda x: (1 + x) ** -0.5, 3)
    assert coeff_c(1.0, 3) == pytest.approx(fd, rel=1e-8)
    assert coeff_c(1.0, 3) == -0.3125


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.0, 1.5])
def test_c_gamma_form(alpha):
    for n in range(1, 12):
        ref = special.gamma(alpha / 2) / (special.gamma(n + 1) * special.gamma(alpha / 2 - n))
        assert coeff_c(alpha, n) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.0, 1.5])
def test_taylor_identity(alpha):
    x = 0.05
    exact = (1 + x) ** (alpha / 2 - 1)
    for n_top in range(1, 9):
        partial = 1 + sum(coeff_c(alpha, n) * x**n for n in range(1, n_top + 1))
        assert abs(partial - exact) <= 2 * abs(coeff_c(alpha, n_top + 1)) * x ** (n_top + 1)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.5])
def test_c_ratio_tends_to_one(alpha):
    r = [abs(coeff_c(alpha, n + 1) / coeff_c(alpha, n)) for n in (10, 100, 1000)]
    assert all(v < 1 for v in r)
    assert abs(r[-1] - 1) < abs(r[0] - 1) and abs(r[-1] - 1) < 2e-3


def test_c_domain():
    for bad in ((0.0, 1), (2.0, 1), (1.0, 0), (1.0, 1.5)):
        with pytest.raises(ValueError):
            coeff_c(*bad)
    with pytest.raises(ValueError):
        coeff_c_tilde(0)
    assert coeff_c_tilde(1) == -1 / 6


def test_d_values():
    for h in (0.3, 1.0, 2.5):
        assert coeff_d(PhysicalParams(1, 1, -1, h), 1, 0) == pytest.approx(-1 / 6, rel=1e-15)
        assert coeff_d(PhysicalParams(2, 1, -1, h), 1, 0) == pytest.approx(-1 / 6, rel=1e-15)
    p = PhysicalParams(0.6, 1, -1, 0.7)
    for n in range(1, 4):
        for l in range(n + 1):
            ref = (special.gamma(0.3) * (-4 * 0.7) ** l /
                   ((2 * n - l + 1) * special.gamma(l + 1) * special.gamma(n + 1 - l)
                    * special.gamma(0.3 - n)))
            assert coeff_d(p, n, l) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_d_variants(alpha):
    p = PhysicalParams(alpha, 1, -1, 1.3)
    for n in range(1, 4):
        for l in range(n + 1):
            q = 2 * n - l + 1
            # sum_m d[n,l,m] x^(q-m) y^m = d[n,l] (y - x)^q
            x, y = 0.37, -0.81
            s = sum(coeff_d(p, n, l, m, "m_indexed") * x ** (q - m) * y**m for m in range(q + 1))
            assert s == pytest.approx(coeff_d(p, n, l) * (y - x) ** q, rel=1e-12)
            for m in range(q + 1):
                i1 = coeff_d(p, n, l, m, "i1")
                assert coeff_d(p, n, l, m, "i2") == (-1) ** l * i1


def test_d_index_errors():
    p = PhysicalParams(1, 1, -1, 1)
    for args in ((0, 0), (1, 2), (2, -1)):
        with pytest.raises(IndexError):
            coeff_d(p, *args)
    with pytest.raises(IndexError):
        coeff_d(p, 1, 0, 4, "i1")
    with pytest.raises(IndexError):
        coeff_d(p, 1, 0, None, "m_indexed")
    with pytest.raises(ValueError):
        coeff_d(p, 1, 0, 1, "other")


def test_build_tables_shape():
    tab = build_tables(PhysicalParams(1, 1, -1, 1), 3)
    assert tab.c[0] == -0.5 and np.all(np.isnan(tab.c_tilde))
    assert tab.d[(1, 0)] == pytest.approx(-1 / 6)
    assert (3, 3, 4, "i2") in tab.d and (3, 3, 5, "i2") not in tab.d
    euler = build_tables(PhysicalParams(2, 1, -1, 1), 2)
    assert euler.c_tilde[0] == -1 / 6 and np.all(np.isnan(euler.c))


def _cross_weight(alpha, h, n, zeta):
    nu = bessel_order(alpha, n)
    return (zeta**2 + 4 * h * h) ** (-(nu + 0.5))


@pytest.mark.parametrize("alpha,h,n", [(1.0, 1.0, 1), (1.0, 2.0, 1), (0.5, 0.6, 2), (1.6, 1.4, 1)])
def test_mean_prefactor_is_the_zeta_integral(alpha, h, n):
    val = integrate.quad(lambda z: _cross_weight(alpha, h, n, z), -np.inf, np.inf,
                         epsabs=0, epsrel=1e-13)[0]
    assert _mean_prefactor(alpha, h, n) == pytest.approx(val, rel=1e-10)


def test_mean_prefactor_differs_from_multiplier_limit_off_unit_height():
    # the xi -> 0 limit of the m >= 1 form equals the mean only when h = 1
    for alpha, n in ((1.0, 1), (0.5, 2)):
        nu = bessel_order(alpha, n)
        for h in (1.0, 2.0, 0.5):
            alt = 2 * math.sqrt(math.pi) * special.gamma(nu) / (special.gamma(nu + 0.5)
                                                                  * (4 * h) ** (nu + 0.5))
            ratio = alt / _mean_prefactor(alpha, h, n)
            assert ratio == pytest.approx(h ** (nu - 0.5), rel=1e-12)


@pytest.mark.parametrize("alpha,h,n", [(1.0, 1.0, 1), (0.5, 0.6, 2), (1.6, 1.4, 1)])
@pytest.mark.parametrize("xi", [0.4, 1.3])
def test_multiplier_prefactor_against_fourier_oracle(alpha, h, n, xi):
    nu = bessel_order(alpha, n)
    ft = 2 * integrate.quad(lambda z: _cross_weight(alpha, h, n, z), 0, np.inf,
                            weight="cos", wvar=xi, limlst=200)[0]
    symbol = xi**nu * special.kv(nu, 2 * h * xi)
    assert _multiplier_prefactor(alpha, h, n) * symbol == pytest.approx(ft, rel=1e-8)


def tn_closed_form(alpha, n, etas):
    """T_n through the power-law Fourier integral, summed over subsets of the frequencies."""
    mu = alpha - 2 * n - 1
    total = 0.0
    for r in range(len(etas) + 1):
        for sub in itertools.combinations(etas, r):
            s = sum(sub)
            if s == 0:
                continue
            if alpha == 1:
                total += (-1) ** r * s ** (2 * n) * math.log(abs(s))
            else:
                total += (-1) ** r * abs(s) ** (-mu)
    if alpha == 1:
        return -2 * (-1) ** n / math.factorial(2 * n) * total
    return math.pi / (special.gamma(1 - mu) * math.sin(math.pi * mu / 2)) * total


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("n,etas", [(1, [0.3, 1.1, -0.7]), (1, [2.0, 2.0, -1.0]),
                                    (2, [0.5, -1.5, 1.0, 2.0, -0.25])])
def test_tn_closed_form(alpha, n, etas):
    assert kernel_Tn(alpha, n, etas) == pytest.approx(tn_closed_form(alpha, n, etas),
                                                      rel=1e-8, abs=1e-10)


def test_tn_zero_frequencies():
    assert kernel_Tn(1.0, 1, [0, 0, 0]) == 0
    assert kernel_Tn(0.7, 2, [0.0] * 5) == 0


_etas = st.lists(st.floats(-3, 3).filter(lambda v: abs(v) > 0.05), min_size=3, max_size=3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.5, 1.0, 1.5, 2.0]), _etas, st.permutations(range(3)))
def test_tn_symmetries(alpha, etas, perm):
    t = kernel_Tn(alpha, 1, etas)
    assert kernel_Tn(alpha, 1, [etas[i] for i in perm]) == t
    # even, not odd, under negating every frequency
    assert kernel_Tn(alpha, 1, [-e for e in etas]) == pytest.approx(t, rel=1e-9, abs=1e-11)
    assert abs(t) <= tn_bound(alpha, etas)


def test_tn_argument_checks():
    with pytest.raises(ValueError):
        kernel_Tn(1.0, 1, [1.0, 2.0])
    with pytest.raises(ValueError):
        kernel_Tn(1.0, 0, [1.0])
    with pytest.raises(ValueError):
        kernel_Tn(1.0, 1, [1.0, 2.0, np.inf])


def _state(eps, n=64):
    g = SpectralGrid(n, 2 * math.pi)
    x = g.x
    return FrontState(g, eps * np.cos(x) + 0.5 * eps * np.sin(2 * x), 0.7 * eps * np.cos(x + 0.4))


def test_series_zero_data():
    p = PhysicalParams(1, 1, -1, 1)
    a, b = series_nonlinearity(p, FrontState.flat(SpectralGrid(32, 2 * math.pi)), 2)
    assert not np.any(a) and not np.any(b)


def test_series_orders():
    # single mode on phi, flat psi: the self part is cubic, the cross part starts quadratic
    p = PhysicalParams(1, 1, -1, 1)
    g = SpectralGrid(32, 2 * math.pi)
    eps = np.array([1e-3, 2e-3, 4e-3])
    self_amp, total_amp = [], []
    for e in eps:
        s = FrontState(g, e * np.cos(g.x), np.zeros(32))
        self_amp.append(np.abs(_self_series(1.0, g, s.phi, 1)[0]).max())
        total_amp.append(np.abs(series_terms(p, s, 1)[0][0]).max())
    assert np.polyfit(np.log(eps), np.log(self_amp), 1)[0] == pytest.approx(3.0, abs=0.05)
    assert np.polyfit(np.log(eps), np.log(total_amp), 1)[0] == pytest.approx(2.0, abs=0.05)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_series_matches_quadrature(alpha):
    p = PhysicalParams(alpha, 1, -1, 1)
    s = _state(1e-3)
    q = nonlinear_terms(p, s)
    e = series_nonlinearity(p, s, 3)
    scale = max(np.abs(q[0]).max(), np.abs(q[1]).max())
    assert np.abs(q[0] - e[0]).max() < 1e-6 * scale
    assert np.abs(q[1] - e[1]).max() < 1e-6 * scale


def test_series_truncation_warning():
    p = PhysicalParams(1, 1, -1, 1)
    with pytest.warns(TruncationWarning):
        series_nonlinearity(p, _state(0.3), 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        series_nonlinearity(p, _state(1e-3), 2)
