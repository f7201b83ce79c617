"""Gamma, Beta and modified Bessel functions of the second kind.

Thin, validated wrappers around :mod:`scipy.special` plus the
``f_m(x, nu) = |x|^(nu+m) K_nu(|x|)`` maximum bound used to control the
Bessel multipliers that appear in the two-front systems.
"""
import math

import numpy as np
from scipy import special as sp

EULER_GAMMA = float(np.euler_gamma)


class PoleError(ValueError):
    """Raised when Gamma is requested at a non-positive integer."""


def _is_pole(z):
    return z <= 0 and float(z).is_integer()


def gamma_fn(z):
    """Gamma function for real ``z`` away from the poles."""
    z = float(z)
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at z={z:g}")
    return float(sp.gamma(z))


def beta_fn(a, b):
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), sign preserved.

    Arguments may be negative (non-integer); B(1/2, (1-alpha)/2) is negative
    for 1 < alpha < 2 and callers rely on that sign.
    """
    a, b = float(a), float(b)
    for z in (a, b):
        if _is_pole(z):
            raise PoleError(f"Beta({a:g}, {b:g}): Gamma pole at {z:g}")
    if _is_pole(a + b):
        raise PoleError(f"Beta({a:g}, {b:g}): Gamma pole at a+b={a + b:g}")
    # log-gamma keeps large arguments finite; sign tracked separately
    sign = sp.gammasgn(a) * sp.gammasgn(b) * sp.gammasgn(a + b)
    return float(sign * math.exp(sp.gammaln(a) + sp.gammaln(b) - sp.gammaln(a + b)))


def bessel_k(nu, x):
    """Modified Bessel function of the second kind ``K_nu(x)``, ``x > 0``.

    Accepts scalar or array ``x``. Negative orders use ``K_nu = K_{-nu}``.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise ValueError("bessel_k requires x > 0")
    out = sp.kv(abs(float(nu)), x_arr)
    return float(out) if out.ndim == 0 else out


def fm_bound(m, nu, constant="reduced"):
    """Bound on max_x |x|^(nu+m) K_nu(|x|) for nu > 1/2.

    ``constant="reduced"`` takes Gamma(nu) / 2^(nu+1) as the value of
    x^nu K_nu(x) at the origin. ``constant="limit"`` uses the true small-x
    limit Gamma(nu) 2^(nu-1); only the latter is an actual upper bound
    (x K_1(x) -> 1, four times the reduced value).
    """
    if nu <= 0.5:
        raise ValueError("the f_m bound needs nu > 1/2")
    if constant == "reduced":
        f0 = gamma_fn(nu) / 2 ** (nu + 1)
    elif constant == "limit":
        f0 = gamma_fn(nu) * 2 ** (nu - 1)
    else:
        raise ValueError(f"unknown constant {constant!r}")
    if m == 0:
        return f0
    return (m * m + (2 * nu - 1) * m) ** (m / 2) * f0


def fm_argmax_bound(m, nu):
    """Bound on the location |x0| of the maximum of f_m(., nu)."""
    return math.sqrt(m * m + (2 * nu - 1) * m)


def bessel_fm(m, nu, x):
    x = np.abs(np.asarray(x, dtype=float))
    # x**(nu+m) K_nu(x) underflows/overflows separately; combine in log space
    with np.errstate(divide="ignore"):
        logv = (nu + m) * np.log(x) + np.log(sp.kve(nu, x)) - x
    return np.exp(logv)


def bessel_fm_bound_check(m, nu, samples, constant="reduced"):
    """True iff f_m(x, nu) respects its maximum bound at every sample."""
    if nu <= 0.5:
        raise ValueError("the f_m bound needs nu > 1/2")
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        return True
    values = bessel_fm(m, nu, samples)
    # relative slack for rounding in kv at the attained maximum
    return bool(np.all(values <= fm_bound(m, nu, constant) * (1 + 1e-12)))
