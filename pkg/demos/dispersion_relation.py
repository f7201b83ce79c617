"""
Linear stability of two flat fronts
===================================

Two fronts at y = +h and y = -h with jumps Theta_+ and Theta_- support
normal modes exp(i xi x + mu t). Opposite-sign jumps give a band of
unstable wavenumbers near xi = 0; same-sign jumps never do.
"""
import numpy as np

from gsqg_fronts import (PhysicalParams, dispersion_scan, find_marginal_wavenumber,
                         find_peak_growth)

# Opposite jumps, unit separation: where does the unstable band end,
# and where does it peak?
print(" alpha   marginal h|xi|   peak h|xi|   peak rate")
for alpha in (0.5, 1.0, 1.5, 2.0):
    p = PhysicalParams(alpha, 1.0, -1.0, 1.0)
    hx, rate = find_peak_growth(p)
    print(f"{alpha:6.2f}   {find_marginal_wavenumber(p):14.6f}   {hx:10.6f}   {rate:9.6f}")

# The band scales with 1/h for the Euler case, so h|xi| is the natural variable.
for h in (0.5, 2.0):
    print("Euler, h =", h, "->", find_marginal_wavenumber(PhysicalParams(2.0, 1, -1, h)))

# A coarse look at the SQG dispersion relation: growth rate and the two
# phase speeds. Unstable modes are standing waves here; stable ones
# counter-propagate.
scan = dispersion_scan(PhysicalParams(1.0, 1.0, -1.0, 1.0), np.linspace(0.1, 1.2, 12))
speed_p, speed_m = scan.wave_speed
for xi, mu, cp, cm in zip(scan.xi, scan.mu_plus, speed_p, speed_m):
    print(f"xi = {xi:4.2f}  Re mu = {mu.real:8.5f}  c+ = {cp:8.4f}  c- = {cm:8.4f}")

# Same-sign jumps: purely imaginary spectrum at every wavenumber.
calm = dispersion_scan(PhysicalParams(1.0, 1.0, 0.4, 1.0), np.linspace(0.01, 10, 500))
print("same-sign jumps, max Re mu:", np.max(np.abs(calm.mu_plus.real)))
