"""Time stepping of the two-front systems and their scalar reductions.

State is advanced as u_t = A u - N(u): ``A`` is the per-mode linear
symbol (applied on the rfft half-spectrum) and ``N`` the Theta-weighted
quadrature nonlinearity, 2/3-dealiased with mean and Nyquist removed.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diagnostics import diagnostic_record
from .grid import FrontState, SpectralGrid
from .kernels import frame_speed, galilean_constants
from .quadrature import (ChordArcError, check_chord_arc, cross_integral, nonlinear_terms,
                         prepare_scheme, reflected, self_integral, shifted)
from .symbols import build_multiplier_table, self_symbol, symbol_b2


class CflError(ValueError):
    pass


class AmplitudeWarning(UserWarning):
    pass


def linear_table(params, grid):
    """Linear symbol in the frame the per-regime systems are written in."""
    return build_multiplier_table(params, grid, frame="system")


def max_stable_dt(table, cfl=1.0):
    return cfl / table.max_norm()


def _apply(a, u):
    """Per-mode 2x2 action on stacked half-spectra ``u`` of shape (2, K)."""
    return np.stack((a[:, 0, 0] * u[0] + a[:, 0, 1] * u[1],
                     a[:, 1, 0] * u[0] + a[:, 1, 1] * u[1]))


def _nonlinear_hat(params, grid, phi, psi, scheme, time):
    state = FrontState(grid, phi, psi, time)
    n_phi, n_psi = nonlinear_terms(params, state, scheme)
    out = np.stack((np.fft.rfft(n_phi), np.fft.rfft(n_psi)))
    out *= grid.dealias_mask()[None, :]
    out[:, 0] = 0.0
    return out


def _forcing_hat(params, grid, u_hat, scheme, time, include_nonlinear):
    """-N(u) on the half-spectrum."""
    if not include_nonlinear:
        return np.zeros_like(u_hat)
    n = grid.n_points
    phi, psi = np.fft.irfft(u_hat[0], n), np.fft.irfft(u_hat[1], n)
    return -_nonlinear_hat(params, grid, phi, psi, scheme, time)


def rhs(params, state, scheme=None, table=None, include_nonlinear=True):
    """(d phi/dt, d psi/dt) at ``state``."""
    grid = state.grid
    table = table or linear_table(params, grid)
    u_hat = np.stack((np.fft.rfft(state.phi), np.fft.rfft(state.psi)))
    out = _apply(table.half(), u_hat)
    out += _forcing_hat(params, grid, u_hat, scheme, state.time, include_nonlinear)
    out[:, 0] = 0.0
    out[:, -1] = 0.0
    n = grid.n_points
    return np.fft.irfft(out[0], n), np.fft.irfft(out[1], n)


def _finish(params, state, phi, psi, dt):
    new = state.copy(phi=phi, psi=psi, time=state.time + dt)
    check_chord_arc(params, new)
    return new


def step_rk4(params, state, scheme, dt, table=None, cfl=1.0, include_nonlinear=True):
    """Classical four-stage step on the full right-hand side."""
    table = table or linear_table(params, state.grid)
    dt_max = max_stable_dt(table, cfl)
    if not 0 < dt <= dt_max * (1 + 1e-12):
        raise CflError(f"dt={dt:g} exceeds the stability bound {dt_max:g}")

    def f(phi, psi, t):
        return np.stack(rhs(params, FrontState(state.grid, phi, psi, t), scheme, table,
                            include_nonlinear))

    u = np.stack((state.phi, state.psi))
    t = state.time
    k1 = f(*u, t)
    k2 = f(*(u + 0.5 * dt * k1), t + 0.5 * dt)
    k3 = f(*(u + 0.5 * dt * k2), t + 0.5 * dt)
    k4 = f(*(u + dt * k3), t + dt)
    u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return _finish(params, state, u[0], u[1], dt)


def propagator(a_half, dt):
    """exp(A dt) per mode in closed form for 2x2 matrices."""
    m = dt * a_half
    tau = m[:, 0, 0] + m[:, 1, 1]
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    q = np.sqrt((tau / 2) ** 2 - det + 0j)
    small = np.abs(q) < 1e-8
    qs = np.where(small, 1.0, q)
    sinhc = np.where(small, 1 + q * q / 6, np.sinh(qs) / qs)
    out = np.empty_like(m)
    shift = m.copy()
    shift[:, 0, 0] -= tau / 2
    shift[:, 1, 1] -= tau / 2
    for i in range(2):
        for j in range(2):
            out[:, i, j] = sinhc * shift[:, i, j] + (np.cosh(q) if i == j else 0.0)
    return out * np.exp(tau / 2)[:, None, None]


def step_if_rk4(params, state, scheme, dt, table=None, include_nonlinear=True):
    """Integrating-factor (Lawson) RK4: the linear part is propagated exactly."""
    grid = state.grid
    table = table or linear_table(params, grid)
    a = table.half()
    e_half, e_full = propagator(a, dt / 2), propagator(a, dt)
    t = state.time

    def nl(u, s):
        return _forcing_hat(params, grid, u, scheme, s, include_nonlinear)

    u = np.stack((np.fft.rfft(state.phi), np.fft.rfft(state.psi)))
    k1 = nl(u, t)
    eu = _apply(e_half, u)
    k2 = nl(eu + 0.5 * dt * _apply(e_half, k1), t + 0.5 * dt)
    k3 = nl(eu + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = nl(_apply(e_full, u) + dt * _apply(e_half, k3), t + dt)
    u = _apply(e_full, u) + dt / 6 * (_apply(e_full, k1) + 2 * _apply(e_half, k2 + k3) + k4)
    n = grid.n_points
    return _finish(params, state, np.fft.irfft(u[0], n), np.fft.irfft(u[1], n), dt)


@dataclass
class Trajectory:
    snapshots: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    halted: bool = False
    halt_time: Optional[float] = None
    message: str = ""


def _amplitude_gate(params, state, threshold):
    if params.alpha > 1 or threshold is None:
        return
    grid = state.grid
    size = max(np.max(np.abs(state.phi)), np.max(np.abs(state.psi)),
               np.max(np.abs(grid.derivative(state.phi))),
               np.max(np.abs(grid.derivative(state.psi))))
    if size > threshold:
        warnings.warn(f"front amplitude/slope {size:.3g} exceeds the small-data threshold "
                      f"{threshold:g} for alpha <= 1", AmplitudeWarning)


def _step_schedule(t_end, dt):
    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    return [min(dt, t_end - k * dt) for k in range(n_steps)]


def run_simulation(config, on_snapshot=None):
    """Evolve ``config.initial_state()`` to ``t_end``.

    Snapshots are kept every ``snapshot_every`` steps (and at the end) and
    passed to ``on_snapshot(state, record)`` as they are produced. A
    chord-arc violation stops the run with ``halted`` set.
    """
    params = config.params
    state = config.initial_state()
    check_chord_arc(params, state)
    _amplitude_gate(params, state, config.amplitude_warn)
    table = linear_table(params, state.grid)
    scheme = config.scheme()
    traj = Trajectory()

    def emit(st, count):
        want_h = config.hamiltonian_every and count % config.hamiltonian_every == 0
        rec = diagnostic_record(params, st, scheme if want_h else None, want_h)
        traj.snapshots.append(st)
        traj.diagnostics.append(rec)
        if on_snapshot is not None:
            on_snapshot(st, rec)

    emit(state, 0)
    steps = _step_schedule(config.t_end, config.dt)
    n_emitted = 1
    for k, dt in enumerate(steps, start=1):
        try:
            if config.stepper == "if-rk4":
                state = step_if_rk4(params, state, scheme, dt, table)
            else:
                state = step_rk4(params, state, scheme, dt, table, config.cfl)
        except ChordArcError as exc:
            traj.halted = True
            traj.halt_time = state.time + dt
            traj.message = str(exc)
            break
        if k % config.snapshot_every == 0 or k == len(steps):
            emit(state, n_emitted)
            n_emitted += 1
    return traj


def _scalar_linear_symbol(params, xi, kind):
    """Multiplier of the linear part of the scalar reductions (without reflection)."""
    out = np.zeros(len(xi), dtype=complex)
    nz = xi != 0
    theta = params.theta_plus
    b1 = np.asarray(self_symbol(params.alpha, xi[nz]))
    b2 = np.asarray(symbol_b2(params, xi[nz]))
    c = frame_speed(params)
    if kind == "symmetric":
        out[nz] = -1j * xi[nz] * (c + theta * (b1 - b2))
    else:
        v = galilean_constants(params).v
        out[nz] = -1j * xi[nz] * (v + c + theta * b1)
        # the L2 part acts on the reflected slope, handled separately
    return out, b2


def scalar_rhs(params, grid, phi, kind, scheme=None):
    """d phi/dt of the symmetric (psi = -phi) or anti-symmetric
    (psi(x) = -phi(-x)) scalar front equation."""
    if kind == "symmetric":
        if params.theta_plus != params.theta_minus:
            raise ValueError("the symmetric reduction needs theta_plus == theta_minus")
    elif kind == "antisymmetric":
        if params.theta_plus != -params.theta_minus:
            raise ValueError("the anti-symmetric reduction needs theta_plus == -theta_minus")
    else:
        raise ValueError(f"unknown reduction {kind!r}")
    theta, h, n = params.theta_plus, params.h, grid.n_points
    xi = grid.rxi.copy()
    sym, b2 = _scalar_linear_symbol(params, xi, kind)
    phi_hat = np.fft.rfft(phi)
    lin = sym * phi_hat
    phi_x = grid.derivative(phi)
    if kind == "antisymmetric":
        # + Theta L2 [phi_x(-.)]: reflection conjugates the real spectrum
        refl_hat = np.fft.rfft(phi_x[(-np.arange(n)) % n])
        lin[1:] += theta * b2 * refl_hat[1:]
    lin[-1] = 0.0

    if kind == "symmetric":
        other = -phi
        state = FrontState(grid, phi, other)
        check_chord_arc(params, state)
        scheme = prepare_scheme(params, state, scheme)
        vals, slopes = shifted(grid, -phi), shifted(grid, -phi_x)
    else:
        other = -phi[(-np.arange(n)) % n]
        state = FrontState(grid, phi, other)
        check_chord_arc(params, state)
        scheme = prepare_scheme(params, state, scheme)
        vals, slopes = -reflected(grid, phi), reflected(grid, phi_x)
    nonlin = theta * self_integral(params.alpha, grid, phi, scheme)
    nonlin += params.theta_minus * cross_integral(params.alpha, h, grid, phi, vals, slopes,
                                                  -2 * h, scheme)
    nl_hat = np.fft.rfft(nonlin) * grid.dealias_mask()
    nl_hat[0] = 0.0
    out = lin - nl_hat
    out[0] = 0.0
    out[-1] = 0.0
    return np.fft.irfft(out, n)


def step_scalar_rk4(params, grid, phi, kind, dt, scheme=None):
    k1 = scalar_rhs(params, grid, phi, kind, scheme)
    k2 = scalar_rhs(params, grid, phi + 0.5 * dt * k1, kind, scheme)
    k3 = scalar_rhs(params, grid, phi + 0.5 * dt * k2, kind, scheme)
    k4 = scalar_rhs(params, grid, phi + dt * k3, kind, scheme)
    return phi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def partner_front(phi, kind):
    """psi implied by a scalar reduction."""
    if kind == "symmetric":
        return -phi
    n = len(phi)
    return -phi[(-np.arange(n)) % n]


def run_scalar_reduction(config, kind):
    """Evolve the scalar equation for phi; returns [(t, phi), ...].

    The symmetric run is also the equation of a single front above a rigid
    flat wall at distance h (method of images).
    """
    params = config.params
    state = config.initial_state()
    grid = state.grid
    phi = state.phi.copy()
    table = linear_table(params, grid)
    dt_max = max_stable_dt(table, config.cfl)
    if config.dt > dt_max * (1 + 1e-12):
        raise CflError(f"dt={config.dt:g} exceeds the stability bound {dt_max:g}")
    scheme = config.scheme()
    t = state.time
    out = [(t, phi.copy())]
    steps = _step_schedule(config.t_end, config.dt)
    for k, dt in enumerate(steps, start=1):
        phi = step_scalar_rk4(params, grid, phi, kind, dt, scheme)
        t += dt
        margin = float(np.min(2 * params.h - partner_front(phi, kind) + phi))
        if not margin > 0:
            raise ChordArcError(margin, t)
        if k % config.snapshot_every == 0 or k == len(steps):
            out.append((t, phi.copy()))
    return out


__all__ = [
    "CflError", "AmplitudeWarning", "Trajectory", "linear_table", "max_stable_dt", "rhs",
    "step_rk4", "step_if_rk4", "propagator", "run_simulation", "scalar_rhs",
    "step_scalar_rk4", "run_scalar_reduction", "partner_front", "SpectralGrid",
]
