"""Flat ``key = value`` run configuration and initial-data presets."""
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .grid import FrontState, SpectralGrid
from .kernels import PhysicalParams
from .quadrature import QuadratureScheme
from .symbols import build_multiplier_table


class ConfigError(ValueError):
    """Invalid configuration text; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


_FLOAT = {"alpha", "theta_plus", "theta_minus", "h", "length", "dt", "t_end", "cfl",
          "lambda_trunc", "amplitude_warn"}
_INT = {"n_points", "snapshot_every", "hamiltonian_every", "seed", "far_terms"}
_STR = {"init", "stepper", "output_format", "out_dir"}
KNOWN_KEYS = _FLOAT | _INT | _STR


@dataclass
class SimulationConfig:
    params: PhysicalParams
    n_points: int = 128
    length: float = 2 * math.pi
    dt: float = 1e-3
    t_end: float = 1.0
    cfl: float = 1.0
    stepper: str = "rk4"
    snapshot_every: int = 10
    hamiltonian_every: int = 10
    lambda_trunc: Optional[float] = None
    far_terms: int = 0
    init: str = "flat"
    seed: int = 0
    amplitude_warn: Optional[float] = 0.1
    output_format: str = "ndjson"
    out_dir: str = "."
    initial: Optional[FrontState] = field(default=None, repr=False)

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.grid  # noqa: B018 - validates n_points and length
        for name in ("dt", "t_end", "cfl"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.snapshot_every < 1:
            raise ConfigError("snapshot_every must be >= 1")
        if self.hamiltonian_every < 0:
            raise ConfigError("hamiltonian_every must be >= 0")
        if self.stepper not in ("rk4", "if-rk4"):
            raise ConfigError("stepper must be 'rk4' or 'if-rk4'")
        if self.output_format not in ("ndjson", "csv"):
            raise ConfigError("output_format must be 'ndjson' or 'csv'")
        if self.lambda_trunc is not None and not self.lambda_trunc > 0:
            raise ConfigError("lambda_trunc must be positive")
        if self.far_terms < 0:
            raise ConfigError("far_terms must be >= 0")
        parse_init(self.init)
        if self.stepper == "rk4":
            table = build_multiplier_table(self.params, self.grid, frame="system")
            dt_max = self.cfl / table.max_norm()
            if self.dt > dt_max * (1 + 1e-12):
                raise ConfigError(f"dt must be <= {dt_max:.6g} (CFL bound with cfl={self.cfl:g}); "
                                  "reduce dt or use stepper = if-rk4")

    @property
    def grid(self):
        try:
            return SpectralGrid(self.n_points, self.length)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def scheme(self):
        return QuadratureScheme(lambda_trunc=self.lambda_trunc, n_nodes=self.far_terms)

    def initial_state(self):
        if self.initial is not None:
            return self.initial.copy()
        return build_initial_state(self.params, self.grid, self.init, self.seed)

    def to_text(self):
        p = self.params
        rows = [("alpha", p.alpha), ("theta_plus", p.theta_plus),
                ("theta_minus", p.theta_minus), ("h", p.h)]
        for f in fields(self):
            if f.name in ("params", "initial"):
                continue
            val = getattr(self, f.name)
            if val is not None:
                rows.append((f.name, val))
        return "".join(f"{k} = {_fmt(v)}\n" for k, v in rows)


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def parse_config(text, base_dir=None):
    """Parse ``key = value`` lines (``#`` starts a comment) into a config."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            if key in _FLOAT:
                values[key] = float(val)
            elif key in _INT:
                values[key] = int(val)
            else:
                values[key] = val
        except ValueError:
            kind = "a number" if key in _FLOAT else "an integer"
            raise ConfigError(f"{key} must be {kind}, got {val!r}", lineno) from None
    missing = [k for k in ("alpha", "theta_plus", "theta_minus", "h") if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    try:
        params = PhysicalParams(values.pop("alpha"), values.pop("theta_plus"),
                                values.pop("theta_minus"), values.pop("h"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if base_dir is not None and values.get("init", "").startswith("file "):
        path = Path(values["init"][5:].strip())
        if not path.is_absolute():
            values["init"] = f"file {Path(base_dir) / path}"
    return SimulationConfig(params=params, **values)


def parse_init(spec):
    """Split an init spec into (kind, args)."""
    parts = spec.split()
    if not parts:
        raise ConfigError("init must not be empty")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "flat" and not args:
            return kind, ()
        if kind in ("cosine", "eigenmode") and len(args) in (2, 3):
            k, eps = int(args[0]), float(args[1])
            mode = args[2] if len(args) == 3 else ("zero" if kind == "cosine" else "unstable")
            if kind == "cosine" and mode not in ("zero", "symmetric", "antisymmetric", "same"):
                raise ConfigError(f"unknown cosine partner {mode!r}")
            if kind == "eigenmode" and mode not in ("unstable", "stable"):
                raise ConfigError(f"unknown eigenmode branch {mode!r}")
            if k < 1:
                raise ConfigError("init mode number must be >= 1")
            return kind, (k, eps, mode)
        if kind == "random" and len(args) in (1, 2):
            return kind, (float(args[0]), int(args[1]) if len(args) == 2 else 4)
        if kind == "file" and len(args) == 1:
            return kind, (args[0],)
    except ValueError:
        pass
    raise ConfigError(f"cannot parse init spec {spec!r}; expected flat | cosine K EPS [PARTNER] | "
                      "eigenmode K EPS [BRANCH] | random EPS [KMAX] | file PATH")


def eigenmode(params, grid, k, eps, branch="unstable"):
    """Real data eps * Re(v exp(i xi x)) along an eigenvector of A(xi_k)."""
    table = build_multiplier_table(params, grid, frame="system")
    vals, vecs = np.linalg.eig(table.a_matrix[k])
    j = int(np.argmax(vals.real)) if branch == "unstable" else int(np.argmin(vals.real))
    v = vecs[:, j]
    v = v / v[np.argmax(np.abs(v))]
    phase = np.exp(1j * grid.xi[k] * grid.x)
    return eps * np.real(v[0] * phase), eps * np.real(v[1] * phase), complex(vals[j])


def build_initial_state(params, grid, spec, seed=0):
    kind, args = parse_init(spec)
    x = grid.x
    if kind == "flat":
        return FrontState.flat(grid)
    if kind == "cosine":
        k, eps, mode = args
        phi = eps * np.cos(2 * np.pi * k * x / grid.length)
        psi = {"zero": np.zeros_like(phi), "symmetric": -phi, "same": phi.copy(),
               "antisymmetric": -phi[(-np.arange(grid.n_points)) % grid.n_points]}[mode]
        return FrontState(grid, phi, psi)
    if kind == "eigenmode":
        k, eps, branch = args
        phi, psi, _ = eigenmode(params, grid, k, eps, branch)
        return FrontState(grid, phi, psi)
    if kind == "random":
        eps, kmax = args
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(2):
            coef = np.zeros(grid.n_points // 2 + 1, dtype=complex)
            coef[1:kmax + 1] = rng.normal(size=kmax) + 1j * rng.normal(size=kmax)
            f = np.fft.irfft(coef, grid.n_points)
            out.append(eps * f / np.max(np.abs(f)))
        return FrontState(grid, out[0], out[1])
    from .io import load_state
    state = load_state(args[0])
    if state.grid != grid:
        raise ConfigError(f"initial data in {args[0]} has grid {state.grid}, expected {grid}")
    return state
