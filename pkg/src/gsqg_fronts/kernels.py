"""Green's functions, H-kernels and the regularized frame constants."""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .special import beta_fn, gamma_fn


@dataclass(frozen=True)
class PhysicalParams:
    """Regime of a two-front problem.

    ``theta_plus``/``theta_minus`` are the *scaled* jumps across the upper and
    lower fronts and ``h`` is the half-separation of the flat fronts.
    """

    alpha: float
    theta_plus: float
    theta_minus: float
    h: float

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise ValueError("alpha must lie in (0, 2]")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.theta_plus == 0 or self.theta_minus == 0:
            raise ValueError("theta_plus and theta_minus must be nonzero")

    @classmethod
    def from_levels(cls, alpha, theta_top, theta_mid, theta_bottom, h_top, h_bottom):
        """Build from raw scalar levels and flat-front heights."""
        if not h_top > h_bottom:
            raise ValueError("need h_top > h_bottom")
        g = g_alpha_const(alpha)
        return cls(
            alpha=alpha,
            theta_plus=g * (theta_top - theta_mid),
            theta_minus=g * (theta_mid - theta_bottom),
            h=(h_top - h_bottom) / 2,
        )

    @property
    def is_symmetric(self):
        return self.theta_plus == self.theta_minus

    @property
    def is_antisymmetric(self):
        return self.theta_plus == -self.theta_minus


def green_g(alpha, x):
    """G(x): -log|x|/(2 pi) for alpha = 2, |x|^(alpha-2) otherwise."""
    x = np.abs(np.asarray(x, dtype=float))
    if np.any(x == 0):
        raise ZeroDivisionError("G is singular at x = 0")
    if alpha == 2:
        out = -np.log(x) / (2 * np.pi)
    else:
        out = x ** (alpha - 2)
    return float(out) if out.ndim == 0 else out


def g_alpha_const(alpha):
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    if alpha == 2:
        return 1.0
    return gamma_fn(1 - alpha / 2) / (2**alpha * math.pi * gamma_fn(alpha / 2))


def kernel_h(which, params, x, y, epsabs=1e-10):
    """H_1 or H_2 at (x, y) by adaptive quadrature of the s-integral."""
    alpha = params.alpha
    if which == 1:
        if x == 0:
            raise ZeroDivisionError("H_1 is singular at x = 0")
        ref = green_g(alpha, x)
    elif which == 2:
        ref = green_g(alpha, math.hypot(x, 2 * params.h))
    else:
        raise ValueError("which must be 1 or 2")
    if y == 0:
        return 0.0

    def integrand(s):
        r = math.hypot(x, s)
        return green_g(alpha, r) - ref

    val, _ = integrate.quad(integrand, 0.0, y, epsabs=epsabs, epsrel=1e-12, limit=200)
    return val


@dataclass(frozen=True)
class GalileanConstants:
    v4: float
    v5: float
    v: float


def _v5_minus_v4(alpha, h):
    if alpha == 2:
        return -h
    if alpha == 1:
        return -2 * math.log(h)
    return beta_fn(0.5, (1 - alpha) / 2) * (2 * h) ** (alpha - 1)


def galilean_constants(params):
    """Limits v4, v5 of the cut-off constants and the frame speed v."""
    alpha, h = params.alpha, params.h
    root = math.log1p(math.sqrt(1 + 4 * h * h))
    if alpha < 1:
        v4 = -beta_fn(0.5, (1 - alpha) / 2) * (2 * h) ** (alpha - 1)
        v5 = 0.0
    elif alpha == 1:
        v4 = 2 * math.log(2 * h) - 2 * root
        v5 = 2 * math.log(2) - 2 * root
    elif alpha < 2:
        v4 = 0.0
        v5 = beta_fn(0.5, (1 - alpha) / 2) * (2 * h) ** (alpha - 1)
    else:
        v4 = 0.0
        v5 = -h
    v = 0.5 * (params.theta_plus - params.theta_minus) * _v5_minus_v4(alpha, h)
    return GalileanConstants(v4=v4, v5=v5, v=v)


def frame_speed(params):
    """Extra advection speed of the per-regime systems over the generic form.

    The alpha = 1 system is written in a frame shifted by
    gamma (theta_plus + theta_minus); other regimes use the generic frame.
    """
    if params.alpha == 1:
        return float(np.euler_gamma) * (params.theta_plus + params.theta_minus)
    return 0.0
