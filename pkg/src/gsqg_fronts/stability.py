"""Linear stability of the flat two-front shear flow."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .kernels import galilean_constants
from .symbols import self_symbol, symbol_b2


class NoSignChangeError(ValueError):
    pass


class NoInstabilityError(ValueError):
    pass


def default_hxi_grid(n=2048, lo=1e-3, hi=10.0):
    return np.geomspace(lo, hi, n)


def discriminant(params, xi):
    """Delta(xi); positive values mean a growing mode."""
    xi = np.asarray(xi, dtype=float)
    axi = np.abs(xi)
    b1 = np.asarray(self_symbol(params.alpha, xi))
    b2 = np.asarray(symbol_b2(params, xi))
    tp, tm = params.theta_plus, params.theta_minus
    v = galilean_constants(params).v
    out = -(axi * b1 * (tp - tm) + 2 * v * axi) ** 2 - 4 * tp * tm * xi**2 * b2**2
    return float(out) if out.ndim == 0 else out


def growth_rates(params, xi):
    """(mu_plus, mu_minus), with sqrt(Delta) = i sqrt|Delta| when Delta < 0."""
    xi = np.asarray(xi, dtype=float)
    delta = np.asarray(discriminant(params, xi))
    root = np.where(delta >= 0, np.sqrt(np.abs(delta)) + 0j, 1j * np.sqrt(np.abs(delta)))
    drift = -1j * xi * np.asarray(self_symbol(params.alpha, xi)) * (
        params.theta_plus + params.theta_minus)
    mu_p, mu_m = 0.5 * (drift + root), 0.5 * (drift - root)
    if mu_p.ndim == 0:
        return complex(mu_p), complex(mu_m)
    return mu_p, mu_m


def _delta_hxi(params, hx):
    return discriminant(params, hx / params.h)


def _growth_hxi(params, hx):
    d = _delta_hxi(params, hx)
    return 0.5 * np.sqrt(np.maximum(d, 0.0))


def _first_sign_change(params, grid):
    d = np.asarray(_delta_hxi(params, grid))
    idx = np.nonzero((d[:-1] > 0) & (d[1:] <= 0))[0]
    if idx.size == 0:
        raise NoSignChangeError("Delta does not change sign from + to - on the scan grid")
    i = idx[0]
    return grid[i], grid[i + 1]


def find_marginal_wavenumber(params, bracket=None):
    """h|xi| at which Delta crosses zero from above."""
    if bracket is None:
        bracket = _first_sign_change(params, default_hxi_grid())
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise NoSignChangeError("bracket must satisfy 0 < lo < hi")
    flo, fhi = _delta_hxi(params, lo), _delta_hxi(params, hi)
    if flo * fhi > 0:
        raise NoSignChangeError(f"Delta has the same sign at h|xi| = {lo:g} and {hi:g}")
    # brentq combines bisection with secant/inverse-quadratic steps
    return optimize.brentq(lambda t: _delta_hxi(params, t), lo, hi, xtol=1e-14, rtol=1e-15)


def find_peak_growth(params, bracket=None):
    """(argmax h|xi|, max Re mu_plus) of the unstable band."""
    lo, hi = bracket if bracket is not None else (1e-3, 10.0)
    grid = np.geomspace(lo, hi, 2048)
    g = _growth_hxi(params, grid)
    i = int(np.argmax(g))
    if g[i] <= 0:
        raise NoInstabilityError("Delta <= 0 throughout the bracket: the flow is stable")
    a, c = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if i in (0, len(grid) - 1):
        return float(grid[i]), float(g[i])
    res = optimize.minimize_scalar(
        lambda t: -_growth_hxi(params, t), bracket=(a, grid[i], c),
        method="golden", tol=1e-10)
    return float(res.x), float(-res.fun)


@dataclass
class DispersionResult:
    params: object
    xi: np.ndarray
    mu_plus: np.ndarray
    mu_minus: np.ndarray
    delta: np.ndarray
    marginal_hxi: Optional[float] = None
    peak_hxi: Optional[float] = None
    peak_growth: Optional[float] = None

    @property
    def wave_speed(self):
        """Phase speeds -Im(mu)/xi of exp(i xi x + mu t), one array per branch."""
        return -self.mu_plus.imag / self.xi, -self.mu_minus.imag / self.xi


def dispersion_scan(params, hxi=None):
    """Rates on a grid of h|xi|, plus the marginal and peak points if unstable."""
    hxi = default_hxi_grid() if hxi is None else np.asarray(hxi, dtype=float)
    xi = hxi / params.h
    mu_p, mu_m = growth_rates(params, xi)
    delta = np.asarray(discriminant(params, xi))
    res = DispersionResult(params, xi, np.atleast_1d(mu_p), np.atleast_1d(mu_m),
                           np.atleast_1d(delta))
    if np.any(delta > 0):
        try:
            res.marginal_hxi = find_marginal_wavenumber(params)
        except NoSignChangeError:
            pass
        res.peak_hxi, res.peak_growth = find_peak_growth(params, (hxi.min(), hxi.max()))
    return res
