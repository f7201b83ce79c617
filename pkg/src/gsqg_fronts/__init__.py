"""Two-front solutions of the generalized SQG equations.

Linear stability of the flat two-front shear flow, the small-amplitude
expansion of the front interactions, and a spectral/quadrature solver for
the regularized contour-dynamics system.
"""
from .config import ConfigError, SimulationConfig, parse_config
from .diagnostics import (DiagnosticRecord, chord_margin, diagnostic_record, hamiltonian,
                          hamiltonian_estimate, l2_norm, momentum)
from .expansion import (TruncationWarning, build_tables, coeff_c, coeff_c_tilde, coeff_d,
                        kernel_Tn, series_nonlinearity)
from .grid import FrontState, SpectralGrid
from .kernels import PhysicalParams, galilean_constants, green_g, kernel_h
from .quadrature import ChordArcError, QuadratureScheme, nonlinear_terms
from .solver import (AmplitudeWarning, CflError, Trajectory, rhs, run_scalar_reduction,
                     run_simulation, step_if_rk4, step_rk4)
from .special import PoleError, bessel_fm, bessel_k, beta_fn, fm_bound, gamma_fn
from .stability import (dispersion_scan, discriminant, find_marginal_wavenumber,
                        find_peak_growth, growth_rates)
from .symbols import (MultiplierTable, build_multiplier_table, linear_matrix, normalized_b2,
                      shear_profile, symbol_b1, symbol_b2)

__version__ = "0.1.0"
