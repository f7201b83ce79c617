"""Small-amplitude multilinear expansion of the front nonlinearities.

The series here is an independent route to the nonlinear terms that the
solver evaluates by direct quadrature. Self-interaction terms are written
as multilinear Fourier sums weighted by the kernel ``T_n``; cross-front
terms become products of powers of the fronts and Bessel multipliers
``|d_x|^nu K_nu(2h|d_x|)``.

Coefficients are assembled from the binomial structure of the expansion
rather than transcribed, so every family obeys
``d[n, l, m] = d[n, l] * C(p, m) * (-1)^(p - m)`` with ``p = 2n - l + 1``.
"""
import functools
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .special import beta_fn, gamma_fn, bessel_fm


class TruncationWarning(UserWarning):
    pass


def coeff_c(alpha, n):
    """Taylor coefficient of (1 + x)^(alpha/2 - 1)."""
    if not 0 < alpha < 2:
        raise ValueError("coeff_c needs 0 < alpha < 2")
    if n < 1 or int(n) != n:
        raise ValueError("coeff_c needs an integer n >= 1")
    # generalized binomial by recurrence; avoids Gamma(alpha/2 - n) cancellation
    out = 1.0
    b = alpha / 2 - 1
    for j in range(int(n)):
        out *= (b - j) / (j + 1)
    return out


def coeff_c_tilde(n):
    """Euler (alpha = 2) self-interaction coefficient (-1)^n / (2n(2n+1))."""
    if n < 1 or int(n) != n:
        raise ValueError("coeff_c_tilde needs an integer n >= 1")
    return (-1) ** n / (2 * n * (2 * n + 1))


def _kappa(alpha, n):
    """Coefficient of X^n in the kernel expansion, up to the alpha = 2 prefactor 1/(2 pi)."""
    if alpha == 2:
        return (-1) ** n / (2 * n)
    return coeff_c(alpha, n)


def series_prefactor(alpha):
    return 1 / (2 * math.pi) if alpha == 2 else 1.0


def self_coefficient(alpha, n):
    """a_n in  self = -prefactor * sum_n a_n d_x [T_n multilinear form]."""
    return _kappa(alpha, n) / (2 * n + 1)


def bessel_order(alpha, n):
    return n + (1 - alpha) / 2


def _multiplier_prefactor(alpha, h, n):
    nu = bessel_order(alpha, n)
    return 2 * math.sqrt(math.pi) / (gamma_fn(nu + 0.5) * (4 * h) ** nu)


def _mean_prefactor(alpha, h, n):
    nu = bessel_order(alpha, n)
    return beta_fn(0.5, nu) * (2 * h) ** (-2 * nu)


def coeff_d(params, n, l, m=None, variant="plain"):
    """Cross-interaction coefficients.

    ``plain`` is d[n, l]; ``m_indexed`` is d[n, l, m]; ``i1`` folds in the
    Bessel-multiplier prefactor (for m = 0 the multiplier at xi = 0);
    ``i2`` is the psi-equation version, (-1)^l times ``i1``. For alpha = 2
    the values are the tilde family, which carries an extra 1/(2 pi)
    applied by the series itself.
    """
    if n < 1 or not 0 <= l <= n:
        raise IndexError(f"need n >= 1 and 0 <= l <= n, got n={n}, l={l}")
    alpha, h = params.alpha, params.h
    p = 2 * n - l + 1
    d = _kappa(alpha, n) * math.comb(n, l) * (-4 * h) ** l / p
    if variant == "plain":
        return d
    if m is None or not 0 <= m <= p:
        raise IndexError(f"need 0 <= m <= {p}, got m={m}")
    dm = d * math.comb(p, m) * (-1) ** (p - m)
    if variant == "m_indexed":
        return dm
    if variant not in ("i1", "i2"):
        raise ValueError(f"unknown variant {variant!r}")
    if m == 0:
        d1 = dm * _mean_prefactor(alpha, h, n)
    else:
        d1 = dm * _multiplier_prefactor(alpha, h, n)
    return d1 if variant == "i1" else (-1) ** l * d1


@dataclass
class ExpansionTables:
    alpha: float
    n_max: int
    c: np.ndarray
    c_tilde: np.ndarray
    d: dict = field(default_factory=dict)


def build_tables(params, n_max=4):
    alpha = params.alpha
    c = np.array([coeff_c(alpha, n) if alpha < 2 else np.nan for n in range(1, n_max + 1)])
    ct = np.array([coeff_c_tilde(n) if alpha == 2 else np.nan for n in range(1, n_max + 1)])
    d = {}
    for n in range(1, n_max + 1):
        for l in range(n + 1):
            d[(n, l)] = coeff_d(params, n, l)
            for m in range(2 * n - l + 2):
                for variant in ("m_indexed", "i1", "i2"):
                    d[(n, l, m, variant)] = coeff_d(params, n, l, m, variant)
    return ExpansionTables(alpha=alpha, n_max=n_max, c=c, c_tilde=ct, d=d)


def _sine_product_cosines(amps):
    """Write prod_j sin(a_j z) (even count) as sum_w coef_w cos(w z), w >= 0."""
    k = len(amps)
    terms = {}
    for signs in itertools.product((1, -1), repeat=k - 1):
        signs = (1,) + signs
        w = sum(s * a for s, a in zip(signs, amps))
        key = round(abs(w), 12)
        # the sign-flipped partner doubles each term
        terms[key] = terms.get(key, 0.0) + 2 * math.prod(signs)
    scale = (-1) ** (k // 2) / 2**k
    return [(w, coef * scale) for w, coef in terms.items() if coef != 0]


@functools.lru_cache(maxsize=65536)
def _tn_cached(alpha, n, etas):
    sigma = sum(etas)
    amps = [sigma / 2] + [e / 2 for e in etas]
    if all(a == 0 for a in amps[1:]):
        return 0.0
    p = alpha - 2 * n - 2
    scale = 2 ** (2 * n + 2) * (-1) ** n

    def near(z):
        if z == 0:
            return 0.0
        return math.prod(math.sin(a * z) for a in amps) * z**p

    wmax = sum(abs(a) for a in amps)
    limit = max(200, int(20 * wmax) + 50)
    head, err = integrate.quad(near, 0.0, 2.0, limit=limit, epsabs=1e-14, epsrel=1e-12)
    tail = 0.0
    for w, coef in _sine_product_cosines(amps):
        if w == 0:
            tail += coef * (-(2.0 ** (p + 1)) / (p + 1))
        else:
            with warnings.catch_warnings():
                # QAWF flags slow cycles for small w; the extrapolated sum is still accurate
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, _ = integrate.quad(lambda z: z**p, 2.0, np.inf, weight="cos", wvar=w,
                                        limlst=100, epsabs=1e-14)
            tail += coef * val
    return scale * (head + tail)


def kernel_Tn(alpha, n, etas):
    """T_n at the 2n+1 frequencies ``etas`` by quadrature.

    The complex integrand pairs up under z -> -z, leaving the real integral
    2^(2n+2) (-1)^n int_0^inf sin(sigma z / 2) prod sin(eta_j z / 2) z^(alpha-2n-2) dz
    with sigma = sum(etas). [0, 2] is integrated directly; on [2, inf) the
    sine product is expanded into cosines and each piece is a Fourier
    integral of a power.
    """
    if n < 1:
        raise ValueError("kernel_Tn needs n >= 1")
    etas = tuple(sorted(float(e) for e in etas))
    if len(etas) != 2 * n + 1:
        raise ValueError(f"kernel_Tn needs {2 * n + 1} frequencies, got {len(etas)}")
    if not all(math.isfinite(e) for e in etas):
        raise ValueError("kernel_Tn needs finite frequencies")
    return _tn_cached(float(alpha), int(n), etas)


def tn_bound(alpha, etas):
    """Upper bound (2^(1+a)/a) prod|eta_j| + 2^(1+a)/(3-a) on |T_n|."""
    return 2 ** (1 + alpha) / alpha * math.prod(abs(e) for e in etas) + 2 ** (1 + alpha) / (3 - alpha)


def _active_modes(coeffs, rel_tol=1e-14):
    mag = np.abs(coeffs)
    if mag.max() == 0:
        return []
    return [int(k) for k in np.nonzero(mag > rel_tol * mag.max())[0]]


def _self_series(alpha, grid, f, n_max):
    """Per-order contributions of the self-interaction series at the grid nodes."""
    n_pts = grid.n_points
    fhat = np.fft.fft(f) / n_pts
    fhat[0] = 0.0
    modes = _active_modes(fhat)
    x = grid.x
    wave = 2 * np.pi / grid.length
    pref = series_prefactor(alpha)
    out = []
    for n in range(1, n_max + 1):
        acc = {}
        size = 2 * n + 1
        for combo in itertools.combinations_with_replacement(modes, size):
            counts = {}
            for k in combo:
                counts[k] = counts.get(k, 0) + 1
            mult = math.factorial(size)
            for c in counts.values():
                mult //= math.factorial(c)
            ints = [int(grid.mode_numbers[k]) for k in combo]
            total = sum(ints)
            if total == 0:
                continue
            tn = kernel_Tn(alpha, n, [wave * j for j in ints])
            acc[total] = acc.get(total, 0.0) + mult * tn * np.prod(fhat[list(combo)])
        term = np.zeros(n_pts, dtype=complex)
        for total, amp in acc.items():
            xi = wave * total
            term += 1j * xi * amp * np.exp(1j * xi * x)
        out.append(-pref * self_coefficient(alpha, n) * term.real)
    return out


def _bessel_symbol(nu, h, xi):
    axi = np.abs(xi)
    out = np.empty_like(axi)
    zero = axi == 0
    out[zero] = 0.5 * gamma_fn(nu) * h ** (-nu)
    # |xi|^nu K_nu(2h|xi|) = (2h)^(-nu) f_0(2h|xi|, nu)
    out[~zero] = (2 * h) ** (-nu) * bessel_fm(0, nu, 2 * h * axi[~zero])
    return out


def _cross_series(params, grid, f, g, sign, n_max):
    """Per-order cross terms for the equation of front f driven by front g.

    ``sign = -1`` is the phi equation (offset -2h), ``+1`` the psi equation.
    """
    alpha, h = params.alpha, params.h
    kmax = max([abs(int(grid.mode_numbers[k])) for k in
                _active_modes(np.fft.fft(f)) + _active_modes(np.fft.fft(g))] + [1])
    refine = 1
    while grid.n_points * refine // 2 <= (2 * n_max + 2) * kmax:
        refine *= 2
    fine_n = grid.n_points * refine
    ff = grid.interpolate(f, refine)
    gf = grid.interpolate(g, refine)
    xi = 2 * np.pi / grid.length * np.fft.rfftfreq(fine_n, 1.0 / fine_n)
    variant = "i1" if sign < 0 else "i2"
    pref = series_prefactor(alpha)
    out = []
    for n in range(1, n_max + 1):
        symbol = _bessel_symbol(bessel_order(alpha, n), h, xi)
        term = np.zeros(fine_n)
        for l in range(n + 1):
            p = 2 * n - l + 1
            for m in range(p + 1):
                coef = coeff_d(params, n, l, m, variant)
                if m == 0:
                    inner = ff**p
                else:
                    inner = ff ** (p - m) * np.fft.irfft(symbol * np.fft.rfft(gf**m), fine_n)
                term += coef * inner
        deriv = np.fft.irfft(1j * xi * np.fft.rfft(term), fine_n)
        out.append(pref * deriv[::refine])
    return out


def series_terms(params, state, n_max=4):
    """Per-order nonlinear contributions [(phi_n, psi_n) for n = 1..n_max]."""
    grid = state.grid
    tp, tm = params.theta_plus, params.theta_minus
    sp_ = _self_series(params.alpha, grid, state.phi, n_max)
    ss_ = _self_series(params.alpha, grid, state.psi, n_max)
    cp_ = _cross_series(params, grid, state.phi, state.psi, -1, n_max)
    cs_ = _cross_series(params, grid, state.psi, state.phi, +1, n_max)
    return [(tp * a + tm * b, tm * c + tp * d) for a, b, c, d in zip(sp_, cp_, ss_, cs_)]


def series_nonlinearity(params, state, n_max=4):
    """Nonlinear terms of both front equations from the truncated series.

    Same sign convention as the quadrature nonlinearity: the time
    derivative is minus the linear part minus this.
    """
    terms = series_terms(params, state, n_max)
    phi_nl = sum(t[0] for t in terms)
    psi_nl = sum(t[1] for t in terms)
    total = max(np.max(np.abs(phi_nl)), np.max(np.abs(psi_nl)))
    last = max(np.max(np.abs(terms[-1][0])), np.max(np.abs(terms[-1][1])))
    if total > 0 and last > 1e-3 * total:
        warnings.warn(f"order-{n_max} term is {last / total:.2e} of the total; "
                      "amplitudes are too large for this truncation", TruncationWarning)
    return phi_nl, psi_nl
