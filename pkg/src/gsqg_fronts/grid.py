"""Periodic grid and front state containers."""
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform periodic grid of ``n_points`` nodes on ``[0, length)``."""

    n_points: int
    length: float

    def __post_init__(self):
        n = self.n_points
        if n < 4 or n & (n - 1):
            raise ValueError("n_points must be a power of two >= 4")
        if not self.length > 0:
            raise ValueError("length must be positive")

    @property
    def dx(self):
        return self.length / self.n_points

    @property
    def x(self):
        return np.arange(self.n_points) * self.dx

    @property
    def mode_numbers(self):
        """Signed integer mode numbers in FFT order."""
        return np.fft.fftfreq(self.n_points, 1.0 / self.n_points)

    @property
    def xi(self):
        """Wavenumbers 2 pi k / L in FFT order."""
        return 2 * np.pi * self.mode_numbers / self.length

    @property
    def rxi(self):
        """Non-negative wavenumbers matching ``np.fft.rfft`` output."""
        return 2 * np.pi * np.arange(self.n_points // 2 + 1) / self.length

    def dealias_mask(self):
        """2/3-rule mask on the rfft half-spectrum (Nyquist always dropped)."""
        k = np.arange(self.n_points // 2 + 1)
        return k <= self.n_points // 3

    def derivative(self, f, order=1):
        fh = np.fft.rfft(f)
        fh *= (1j * self.rxi) ** order
        if self.n_points % 2 == 0 and order % 2:
            fh[-1] = 0.0
        return np.fft.irfft(fh, self.n_points)

    def interpolate(self, f, refine):
        """Trigonometric interpolation of ``f`` onto a grid ``refine`` times finer."""
        n = self.n_points
        fh = np.fft.rfft(f)
        fh[-1] *= 0.5  # split the Nyquist coefficient evenly
        m = n * refine
        big = np.zeros(m // 2 + 1, dtype=complex)
        big[: n // 2 + 1] = fh
        return np.fft.irfft(big, m) * refine


@dataclass
class FrontState:
    """Front perturbations ``phi`` (upper) and ``psi`` (lower) at ``time``."""

    grid: SpectralGrid
    phi: np.ndarray
    psi: np.ndarray
    time: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        n = self.grid.n_points
        if self.phi.shape != (n,) or self.psi.shape != (n,):
            raise ValueError("phi and psi must have shape (n_points,)")
        if not (np.all(np.isfinite(self.phi)) and np.all(np.isfinite(self.psi))):
            raise ValueError("front state has non-finite entries")

    def copy(self, **changes):
        changes.setdefault("phi", self.phi.copy())
        changes.setdefault("psi", self.psi.copy())
        return replace(self, **changes)

    def __eq__(self, other):
        if not isinstance(other, FrontState):
            return NotImplemented
        return (self.grid == other.grid and self.time == other.time
                and np.array_equal(self.phi, other.phi)
                and np.array_equal(self.psi, other.psi))

    @classmethod
    def flat(cls, grid, time=0.0):
        z = np.zeros(grid.n_points)
        return cls(grid, z, z.copy(), time)
