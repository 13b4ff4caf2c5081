"""
Checking the closed form by brute force
=======================================

Grid every root over its disc, try each polydisc vertex of the
initialization, and compare the observed maximum with the closed form.
"""

import numpy as np

from hookamp.oracle import OracleConfig, brute_force_max, cross_check_interp

cfg = OracleConfig(phase_grid=64, radial_grid=2, random_trials=5000, seed=1)
for r in ([1.0, 1.0], [1.0, 0.6], [0.9, 0.7, 0.4]):
    t = len(r) + 3
    res = brute_force_max(t, r, np.ones(len(r)), cfg)
    print(f"r={r} t={t}: closed form {res.closed_form:.6f}, brute {res.brute_max:.6f}, gap {res.gap:.1e}")

# phase 0 is always a grid node, so the cophase optimum is found even on coarse grids
for m in (4, 8, 16, 32, 64):
    res = brute_force_max(5, [1.0, 0.6, 0.9], [0.3, 1.0, 0.5], OracleConfig(phase_grid=m, random_trials=0))
    print(f"phase grid {m:2d}: gap {res.gap:.2e}")

# the three routes to the interpolation coefficients agree
rng = np.random.default_rng(0)
z = rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)
print("route disagreement:", cross_check_interp(z, 25))
