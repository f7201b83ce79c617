"""Fourier symbols of the linear front operators and the shear profile."""
import math
from dataclasses import dataclass

import numpy as np

from .kernels import frame_speed, galilean_constants, g_alpha_const
from .special import EULER_GAMMA, beta_fn, bessel_k, gamma_fn


def _nonzero(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi == 0):
        raise ValueError("symbol is not defined at xi = 0")
    return xi


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def symbol_b1(alpha, xi):
    """Symbol of L_1 for 0 < alpha < 2 (even in xi)."""
    if not 0 < alpha < 2:
        raise ValueError("b1 is evaluated pointwise only for 0 < alpha < 2")
    axi = np.abs(_nonzero(xi))
    if alpha == 1:
        out = -2 * EULER_GAMMA - 2 * np.log(axi)
    else:
        out = 2 * math.sin(math.pi * alpha / 2) * gamma_fn(alpha - 1) * axi ** (1 - alpha)
    return _scalar_or_array(out)


def self_symbol(alpha, xi):
    """b1 for alpha < 2; for alpha = 2 the 1/(2|xi|) part of the Euler operator.

    At alpha = 2 the delta term of the distributional symbol only acts on
    the mean, which is frozen, so ``-i xi / (2|xi|) = -i sgn(xi) / 2``
    reproduces the Hilbert-transform term of the Euler system.
    """
    if alpha == 2:
        return _scalar_or_array(0.5 / np.abs(_nonzero(xi)))
    return symbol_b1(alpha, xi)


def symbol_b2(params, xi):
    """Symbol of the cross-front operator L_2 (positive, even in xi)."""
    alpha, h = params.alpha, params.h
    axi = np.abs(_nonzero(xi))
    if alpha == 2:
        out = np.exp(-2 * h * axi) / (2 * axi)
    else:
        nu = (1 - alpha) / 2
        pref = 2 * math.sqrt(math.pi) / (gamma_fn(1 - alpha / 2) * (4 * h) ** nu)
        out = pref * axi**nu * bessel_k(nu, 2 * h * axi)
    return _scalar_or_array(out)


def normalized_b2(params, xi):
    """g_alpha * b2: the cross symbol in Green's-function units.

    Continuous in alpha up to and including alpha = 2, unlike b2 itself.
    """
    return g_alpha_const(params.alpha) * symbol_b2(params, xi)


def linear_matrix(params, xi, frame="generic"):
    """2x2 linear symbol A(xi) for an array of nonzero wavenumbers.

    ``frame="generic"`` is the matrix obtained from the conservative
    regularized system; ``frame="system"`` adds the extra Galilean shift
    used by the per-regime (alpha = 1) system. Returns shape (..., 2, 2).
    """
    xi = _nonzero(xi)
    tp, tm = params.theta_plus, params.theta_minus
    v = galilean_constants(params).v
    c = frame_speed(params) if frame == "system" else 0.0
    if frame not in ("generic", "system"):
        raise ValueError(f"unknown frame {frame!r}")
    b1 = np.asarray(self_symbol(params.alpha, xi))
    b2 = np.asarray(symbol_b2(params, xi))
    a = np.empty(np.shape(xi) + (2, 2), dtype=complex)
    mi = -1j * xi
    a[..., 0, 0] = mi * (v + c + tp * b1)
    a[..., 0, 1] = mi * tm * b2
    a[..., 1, 0] = mi * tp * b2
    a[..., 1, 1] = mi * (-v + c + tm * b1)
    return a


@dataclass(frozen=True)
class MultiplierTable:
    """Per-mode linear symbol on a grid, in FFT order.

    The zero mode and (for even N) the unpaired Nyquist mode act as zero.
    """

    params: object
    xi: np.ndarray
    a_matrix: np.ndarray
    frame: str = "generic"
    zero_mode_policy: str = "ZeroedMean"

    def apply(self, phi_hat, psi_hat):
        a = self.a_matrix
        return (a[:, 0, 0] * phi_hat + a[:, 0, 1] * psi_hat,
                a[:, 1, 0] * phi_hat + a[:, 1, 1] * psi_hat)

    def spectral_radius(self):
        return float(np.max(np.abs(np.linalg.eigvals(self.a_matrix))))

    def max_norm(self):
        return float(np.max(np.linalg.norm(self.a_matrix, ord=2, axis=(1, 2))))

    def half(self):
        """Rows for the rfft half spectrum (k = 0 .. N/2)."""
        n = len(self.xi)
        a = np.empty((n // 2 + 1, 2, 2), dtype=complex)
        a[: n // 2] = self.a_matrix[: n // 2]
        a[n // 2] = 0.0
        return a


def build_multiplier_table(params, grid, frame="generic"):
    xi = grid.xi
    a = np.zeros((len(xi), 2, 2), dtype=complex)
    active = xi != 0
    if grid.n_points % 2 == 0:
        active[grid.n_points // 2] = False
    a[active] = linear_matrix(params, xi[active], frame)
    return MultiplierTable(params=params, xi=xi, a_matrix=a, frame=frame)


def shear_profile(params, y):
    """Velocity U(y) of the flat two-front shear flow (fronts at y = +-h)."""
    alpha, tp, tm, h = params.alpha, params.theta_plus, params.theta_minus, params.h
    y = np.asarray(y, dtype=float)
    dp, dm = np.abs(y - h), np.abs(y + h)
    if alpha <= 1 and (np.any(dp == 0) or np.any(dm == 0)):
        raise ZeroDivisionError("U is singular on the fronts for alpha <= 1")
    if alpha == 2:
        out = 0.5 * tp * dp + 0.5 * tm * dm
    elif alpha == 1:
        out = 2 * tp * np.log(dp) + 2 * tm * np.log(dm)
    else:
        bb = beta_fn(0.5, (1 - alpha) / 2)
        with np.errstate(divide="ignore"):
            out = -bb * (tp * dp ** (alpha - 1) + tm * dm ** (alpha - 1))
    return _scalar_or_array(out)
