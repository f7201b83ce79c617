"""Monitored quantities: chord-arc margin, norms, momentum and the Hamiltonian."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special as sp

from .kernels import frame_speed, galilean_constants
from .quadrature import (check_chord_arc, far_coefficient, image_weights,
                         prepare_scheme, _offsets, _row_map, _EPS)
from .symbols import self_symbol, symbol_b2

_GL_NODES = 24


@dataclass
class DiagnosticRecord:
    time: float
    l2_phi: float
    l2_psi: float
    chord_margin: float
    max_slope: float
    hamiltonian: Optional[float] = None
    hamiltonian_tol: Optional[float] = None

    def as_row(self):
        return {"time": self.time, "l2_phi": self.l2_phi, "l2_psi": self.l2_psi,
                "chord_margin": self.chord_margin, "max_slope": self.max_slope,
                "hamiltonian": self.hamiltonian, "hamiltonian_tol": self.hamiltonian_tol}


def chord_margin(params, state):
    """min over nodes of 2h - psi + phi."""
    return float(np.min(2 * params.h - state.psi + state.phi))


def l2_norm(grid, f):
    return float(math.sqrt(grid.dx * np.sum(f * f)))


def momentum(params, state):
    """Theta_+ |phi|^2 + Theta_- |psi|^2: conserved by translation invariance."""
    g = state.grid
    return params.theta_plus * l2_norm(g, state.phi) ** 2 + \
        params.theta_minus * l2_norm(g, state.psi) ** 2


def max_slope(state):
    g = state.grid
    return float(max(np.max(np.abs(g.derivative(state.phi))),
                     np.max(np.abs(g.derivative(state.psi)))))


@dataclass(frozen=True)
class HamiltonianValue:
    value: float
    quadratic: float
    interaction: float
    tolerance: float


def _quadratic_part(params, state):
    grid = state.grid
    n, length = grid.n_points, grid.length
    ph = np.fft.fft(state.phi) / n
    ps = np.fft.fft(state.psi) / n
    xi = grid.xi
    keep = xi != 0
    keep[n // 2] = False
    xi, ph, ps = xi[keep], ph[keep], ps[keep]
    tp, tm = params.theta_plus, params.theta_minus
    v = galilean_constants(params).v
    c = frame_speed(params)
    b1 = np.asarray(self_symbol(params.alpha, xi))
    b2 = np.asarray(symbol_b2(params, xi))
    pp, ss = np.abs(ph) ** 2, np.abs(ps) ** 2
    cross = np.real(ph * np.conj(ps))
    dens = ((v + c) * tp * pp + (c - v) * tm * ss + tp**2 * b1 * pp
            + 2 * tp * tm * b2 * cross + tm**2 * b1 * ss)
    return 0.5 * length * float(np.sum(dens))


def _gauss(n):
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (t + 1), 0.5 * w


def _unit_kernel(alpha, u):
    """G(sqrt(1 + u^2)) - G(1), the self kernel at unit distance."""
    t = np.log1p(u * u)
    if alpha == 2:
        return -t / (4 * math.pi)
    return np.expm1((alpha / 2 - 1) * t)


def _r_profile(alpha, s, nodes):
    """R(s) = int_0^s (s - u) Q(u) du, so F_1(z, y) = |z|^alpha R(y / z)."""
    tau, w = nodes
    acc = np.zeros_like(s)
    for tk, wk in zip(tau, w):
        acc += wk * (1 - tk) * _unit_kernel(alpha, s * tk)
    return s * s * acc


def _f1_pair_sum(alpha, grid, f, periods, n_terms, nodes):
    """sum_i dx sum_j dx F_1(z_j, f(x_i + z_j) - f(x_i)) over the whole line."""
    n, dx = grid.n_points, grid.dx
    r = _offsets(n)
    centre = n // 2
    weights = image_weights(alpha, n, grid.length, periods, n_terms)
    kappas = [far_coefficient(alpha, m) for m in range(1, n_terms + 1)]

    def rows(sl):
        i = np.arange(n)[sl]
        d = f[(i[:, None] + r[None, :]) % n] - f[i, None]
        acc = np.zeros(len(i))
        for p in range(-periods, periods + 1):
            z = (r + p * n) * dx
            if p == 0:
                z = z.copy()
                z[centre] = 1.0
            term = np.abs(z) ** alpha * _r_profile(alpha, d / z, nodes)
            if p == 0:
                term[:, centre] = 0.0
            acc += dx * np.sum(term, axis=1)
        d2 = d * d
        dpow = d2.copy()
        for m, kap in enumerate(kappas, start=1):
            dpow = dpow * d2
            acc += kap / ((2 * m + 1) * (2 * m + 2)) * np.sum(dpow * weights[m - 1], axis=1)
        return acc

    per_node = _row_map(rows, n)
    # dropped z = 0 node: F_1 ~ |z|^alpha R(f'(x)) there
    f1 = grid.derivative(f)
    r0 = _r_profile(alpha, f1, nodes)
    shift = 0.0 if alpha == 2 else 2 * sp.zeta(-alpha) * dx ** (alpha + 1) * r0
    total = dx * float(np.sum(per_node - shift))
    # size of the next correction term, reported as an error estimate
    f2, f3 = grid.derivative(f, 2), grid.derivative(f, 3)
    q1 = _unit_kernel(alpha, f1)
    dr = _gl_primitive(alpha, f1, nodes)
    nxt = 0.0 if alpha == 2 else abs(2 * sp.zeta(-alpha - 2)) * dx ** (alpha + 3) * \
        dx * float(np.sum(np.abs(dr * f3 / 6 + q1 * f2**2 / 8)))
    return total, nxt


def _gl_primitive(alpha, s, nodes):
    """R'(s) = int_0^s Q(u) du."""
    tau, w = nodes
    acc = np.zeros_like(s)
    for tk, wk in zip(tau, w):
        acc += wk * _unit_kernel(alpha, s * tk)
    return s * acc


def _cross_unit(alpha, z, c, delta):
    r2 = z * z + c * c
    t = np.log1p(delta * (2 * c + delta) / r2)
    if alpha == 2:
        return -t / (4 * math.pi)
    return r2 ** (alpha / 2 - 1) * np.expm1((alpha / 2 - 1) * t)


def _f2_pair_sum(alpha, h, grid, f, g, periods, n_terms, nodes):
    """sum_i dx sum_j dx F_2*(z_j, f(x_i) - g(x_i + z_j)).

    F_2*(z, d) = int_0^d (d - s) [G(sqrt(z^2 + (2h + s)^2)) - G(sqrt(z^2 + 4h^2))] ds
    is F_2(z, 2h + d) with its value and slope at d = 0 removed; the removed
    pieces only depend on the conserved means.
    """
    n, dx = grid.n_points, grid.dx
    r = _offsets(n)
    b = 2 * h
    tau, w = nodes
    weights = image_weights(alpha, n, grid.length, periods, n_terms)
    kappas = [far_coefficient(alpha, m) for m in range(1, n_terms + 1)]

    def rows(sl):
        i = np.arange(n)[sl]
        d = f[i, None] - g[(i[:, None] + r[None, :]) % n]
        acc = np.zeros(len(i))
        for p in range(-periods, periods + 1):
            z = ((r + p * n) * dx)[None, :]
            inner = np.zeros_like(d)
            for tk, wk in zip(tau, w):
                inner += wk * (1 - tk) * _cross_unit(alpha, z, b, d * tk)
            acc += dx * np.sum(d * d * inner, axis=1)
        for m, kap in enumerate(kappas, start=1):
            top = 2 * m + 2
            poly = np.zeros_like(d)
            for k in range(3, top + 1):
                poly += math.comb(top, k) * b ** (top - k) * d**k
            acc += kap / ((2 * m + 1) * top) * np.sum(poly * weights[m - 1], axis=1)
        return acc

    return dx * float(np.sum(_row_map(rows, n)))


def _interaction(params, state, periods, n_terms, nodes):
    grid = state.grid
    a, tp, tm = params.alpha, params.theta_plus, params.theta_minus
    s_phi, e_phi = _f1_pair_sum(a, grid, state.phi, periods, n_terms, nodes)
    s_psi, e_psi = _f1_pair_sum(a, grid, state.psi, periods, n_terms, nodes)
    s_x = _f2_pair_sum(a, params.h, grid, state.phi, state.psi, periods, n_terms, nodes)
    val = -0.5 * (tp**2 * s_phi + 2 * tp * tm * s_x + tm**2 * s_psi)
    err = 0.5 * (tp**2 * e_phi + tm**2 * e_psi)
    return val, err


def hamiltonian_estimate(params, state, scheme=None, gl_nodes=_GL_NODES):
    """Hamiltonian of the periodic cell with an error estimate.

    The interaction block enters with a minus sign: that is the sign for
    which the variational derivative reproduces the evolution equations
    (checked by the conservation tests).
    """
    check_chord_arc(params, state)
    scheme = prepare_scheme(params, state, scheme)
    periods = scheme.periods(state.grid.length)
    quad = _quadratic_part(params, state)
    fine, err = _interaction(params, state, periods, scheme.n_nodes, _gauss(gl_nodes))
    coarse, _ = _interaction(params, state, periods, scheme.n_nodes, _gauss(gl_nodes // 2))
    scale = abs(quad) + abs(fine)
    tol = abs(fine - coarse) + err + scheme.tail_bound * state.grid.length \
        * max(1.0, abs(params.theta_plus), abs(params.theta_minus)) ** 2 \
        + 64 * _EPS * scale * math.sqrt(state.grid.n_points)
    return HamiltonianValue(value=quad + fine, quadratic=quad, interaction=fine, tolerance=tol)


def hamiltonian(params, state, scheme=None):
    return hamiltonian_estimate(params, state, scheme).value


def diagnostic_record(params, state, scheme=None, with_hamiltonian=False):
    g = state.grid
    rec = DiagnosticRecord(time=state.time, l2_phi=l2_norm(g, state.phi),
                           l2_psi=l2_norm(g, state.psi),
                           chord_margin=chord_margin(params, state),
                           max_slope=max_slope(state))
    if with_hamiltonian:
        hv = hamiltonian_estimate(params, state, scheme)
        rec.hamiltonian, rec.hamiltonian_tol = hv.value, hv.tolerance
    return rec
