"""
Scanning the interpolation-error conjectures
============================================

Q_{t,n,k} compares the k-th derivative of the interpolation error at 1
with its value for the all-zero grid.  The pointwise conjecture says
|Q| <= 1 whenever the nodes form a self-conjugate set in the unit disc.
Random scans support it when n - k is even and refute it when n - k is odd.
"""

import numpy as np

from hookamp.conjectures import q_eval, scan_pointwise, scan_uniform

for n in (2, 4):
    reports = scan_pointwise(range(n, n + 6), n, trials=4000, seed=0)
    for k in range(n):
        worst = max(reports[(t, k)].max_abs_q for t in range(n, n + 6))
        print(f"n={n} k={k} (n-k {'odd' if (n - k) % 2 else 'even'}): max |Q| = {worst:.4f}")

# replay the worst grid found for n=2, k=1 (the z1 branch evaluates Q at nodes + 1)
scan = scan_pointwise([8], 2, k_range=[1], trials=4000, seed=0)[(8, 1)]
nodes = np.array(scan.worst_grid.nodes)
print("worst nodes:", np.round(nodes, 4))
for t in (3, 5, 8):
    print(f"t={t}: |Q| = {abs(q_eval(t, 2, 1, nodes + 1)):.4f}")

# the uniform version for a fixed pair of conjugate nodes
u = scan_uniform([0.5j, -0.5j], k=1, t_max=20, resolution=401)
print(f"uniform: sup over t {u.sup_over_t:.4f} vs rhs {u.rhs:.4f} (at t={u.attained_at_t})")
