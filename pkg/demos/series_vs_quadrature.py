"""
Small-amplitude series against direct quadrature
================================================

For small fronts the nonlinear terms can be expanded in powers of the
amplitude. The cross-front series truncated at order n leaves an
O(eps^(n+2)) remainder, so doubling the amplitude should shrink the
relative agreement by about 2^n.
"""
import math

import numpy as np

from gsqg_fronts import FrontState, PhysicalParams, SpectralGrid, nonlinear_terms, \
    series_nonlinearity

params = PhysicalParams(1.0, 1.0, -1.0, 1.0)
grid = SpectralGrid(64, 2 * math.pi)
x = grid.x

for n_max in (1, 2, 3):
    errs = []
    for eps in (1e-3, 2e-3, 4e-3):
        s = FrontState(grid, eps * (np.cos(x) + 0.5 * np.sin(2 * x)), 0.7 * eps * np.cos(x + 0.4))
        q = nonlinear_terms(params, s)
        e = series_nonlinearity(params, s, n_max)
        scale = max(np.abs(q[0]).max(), np.abs(q[1]).max())
        errs.append(max(np.abs(q[0] - e[0]).max(), np.abs(q[1] - e[1]).max()) / scale)
    rates = np.log2(np.array(errs[1:]) / np.array(errs[:-1]))
    print(f"n_max = {n_max}: relative error {errs[0]:.2e} -> {errs[-1]:.2e}, "
          f"observed order {rates.mean():.2f}")
