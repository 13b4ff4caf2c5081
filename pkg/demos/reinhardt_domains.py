"""
Root domains described by log-affine vertices
=============================================

When the log-radii of the roots range over a polytope, the worst case sits
at a vertex.  Dominated vertices can be dropped without changing the value.
"""

import numpy as np

from hookamp.reinhardt import (
    L1BallOracle,
    LogAffineRootDomain,
    PolydiscOracle,
    cube_domain,
    dominated_vertex_filter,
    product_bounded_domain,
    vertex_method,
)

# product of radii bounded by 2, every radius at least 1
sol = vertex_method(product_bounded_domain(3, 2.0), PolydiscOracle(np.ones(3)), 8)
print("product-bounded:", sol.value, "at radii", sol.r_star)

# a cube in log space, with an l1 ball of initial values
cube = cube_domain(3, 0.3)
kept = dominated_vertex_filter(cube.vertices)
oracle = L1BallOracle([1.0, 2.0, 0.5])
full = vertex_method(cube, oracle, 9)
reduced = vertex_method(LogAffineRootDomain(kept), oracle, 9)
print(f"{len(cube.vertices)} vertices -> {len(kept)} after filtering; values {full.value:.4f} {reduced.value:.4f}")

# random polytope
rng = np.random.default_rng(4)
V = rng.normal(scale=0.3, size=(12, 3))
sol = vertex_method(LogAffineRootDomain(V), oracle, 7)
print("random polytope: vertex", sol.argmax_vertex_index, "value", round(sol.value, 4))
