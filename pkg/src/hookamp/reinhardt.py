"""Origin-centered Reinhardt domains of roots and initial values.

For such domains the worst case only depends on the radius hulls, and the
objective F_t(r | w) = sum_k w_k s_(t-n|n-k)(r) is nondecreasing in r and
log-convex in log r.  When log(Z_+) is a polytope, its maximum over roots
sits at a vertex, which gives the vertex procedure below.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .amplitude import hook_functional
from .symfunc import Hook, build_sym_table, schur_hook

f_t = hook_functional


@dataclass(frozen=True)
class LogAffineRootDomain:
    """log(Z_+) = Conv(vertices); the list may contain non-vertices."""

    vertices: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.size == 0:
            raise ValueError("vertex list is empty")
        object.__setattr__(self, "vertices", v)

    @property
    def n(self) -> int:
        return self.vertices.shape[1]


class InitDomainOracle(Protocol):
    def maximize(self, c: np.ndarray) -> tuple[np.ndarray, float]:
        """argmax_{w in S_+} c.w and its value, for c >= 0."""
        ...


class PolydiscOracle:
    """S_+ = prod_k [0, bounds_k]; the upper corner is always optimal."""

    kind = "polydisc"

    def __init__(self, bounds):
        self.bounds = np.asarray(bounds, dtype=float)
        if (self.bounds < 0).any():
            raise ValueError("polydisc bounds must be nonnegative")

    def maximize(self, c):
        c = np.asarray(c, dtype=float)
        w = self.bounds.copy()
        return w, float(c @ w)

    def to_json(self):
        return {"kind": self.kind, "bounds": self.bounds.tolist()}


class L1BallOracle:
    """S_+ = {w >= 0 : sum_k a_k w_k <= 1}; optimum at a coordinate spike."""

    kind = "l1"

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)
        if (self.a <= 0).any():
            raise ValueError("l1 weights must be positive (the set must be compact)")

    def maximize(self, c):
        c = np.asarray(c, dtype=float)
        ratios = c / self.a
        k = int(np.argmax(ratios))
        w = np.zeros_like(self.a)
        if ratios[k] <= 0:
            return w, 0.0
        w[k] = 1.0 / self.a[k]
        return w, float(ratios[k])

    def to_json(self):
        return {"kind": self.kind, "a": self.a.tolist()}


class PointSetOracle:
    """S_+ given by an explicit finite list of points."""

    kind = "points"

    def __init__(self, points):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.points.size == 0:
            raise ValueError("point set is empty")

    def maximize(self, c):
        vals = self.points @ np.asarray(c, dtype=float)
        i = int(np.argmax(vals))
        return self.points[i].copy(), float(vals[i])

    def to_json(self):
        return {"kind": self.kind, "points": self.points.tolist()}


class SerializedOracle:
    """Wrap an oracle that is not safe for concurrent calls."""

    def __init__(self, oracle: InitDomainOracle):
        self.oracle = oracle
        self._lock = threading.Lock()

    def maximize(self, c):
        with self._lock:
            return self.oracle.maximize(c)

    def to_json(self):
        return self.oracle.to_json()


def standard_init_oracles() -> dict[str, type]:
    return {"polydisc": PolydiscOracle, "l1": L1BallOracle, "points": PointSetOracle}


def oracle_from_json(spec: dict) -> InitDomainOracle:
    kind = spec.get("kind")
    if kind == "polydisc":
        return PolydiscOracle(spec["bounds"])
    if kind == "l1":
        return L1BallOracle(spec["a"])
    if kind == "points":
        return PointSetOracle(spec["points"])
    raise ValueError(f"unknown init_oracle kind {kind!r}")


def hook_values(radii, t: int) -> np.ndarray:
    """Vector c_k = s_(t-n|n-k)(radii), k = 1..n, so that F_t(r|w) = c.w."""
    r = np.asarray(radii, dtype=float).ravel()
    n = r.size
    table = build_sym_table(r, t)
    return np.array([schur_hook(Hook(t - n, n - k), table).real for k in range(1, n + 1)])


def f_t_over_oracle(radii, oracle: InitDomainOracle, t: int) -> tuple[np.ndarray, float]:
    return oracle.maximize(hook_values(radii, t))


@dataclass
class ReinhardtSolution:
    r_star: np.ndarray
    w_star: np.ndarray
    value: float
    argmax_vertex_index: int
    vertex_values: np.ndarray

    def to_json(self) -> dict:
        return {
            "r_star": self.r_star.tolist(),
            "w_star": self.w_star.tolist(),
            "value": self.value,
            "argmax_vertex_index": self.argmax_vertex_index,
            "vertex_values": self.vertex_values.tolist(),
        }


def vertex_method(domain: LogAffineRootDomain, init_oracle: InitDomainOracle, t: int) -> ReinhardtSolution:
    V = domain.vertices
    n = domain.n
    if t < n:
        raise ValueError("t must be at least n")
    values = np.array([f_t_over_oracle(np.exp(v), init_oracle, t)[1] for v in V])
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    r_star = np.exp(V[best])
    w_star, value = f_t_over_oracle(r_star, init_oracle, t)
    return ReinhardtSolution(r_star, np.asarray(w_star, dtype=float), float(value), best, values)


def dominated_vertex_filter(vertices) -> np.ndarray:
    """Drop duplicates and every vertex dominated componentwise by another one."""
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    unique = []
    for v in V:
        if not any(np.array_equal(v, u) for u in unique):
            unique.append(v)
    keep = [
        v for i, v in enumerate(unique)
        if not any(j != i and np.all(u >= v) for j, u in enumerate(unique))
    ]
    return np.array(keep)


# Domain builders for the standard examples.


def polydisc_domain(radii) -> LogAffineRootDomain:
    return LogAffineRootDomain(np.log(np.asarray(radii, dtype=float))[None, :], label="polydisc")


def product_bounded_domain(n: int, q: float) -> LogAffineRootDomain:
    """Z_+ = {r >= 1 : prod r <= q}: log(Z_+) is a simplex scaled by log q."""
    return LogAffineRootDomain(np.log(q) * np.eye(n), label=f"product<={q}")


def cube_domain(n: int, p: float) -> LogAffineRootDomain:
    """log(Z_+) = {p 1 + (1-p) x : |x|_inf <= 1}, all 2^n cube vertices listed."""
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
    return LogAffineRootDomain(p + (1 - p) * signs, label=f"cube(p={p})")


def load_problem(path) -> tuple[LogAffineRootDomain, InitDomainOracle, int]:
    """Read {"n", "t", "vertices", "init_oracle": {...}} from a JSON file."""
    with open(path) as fh:
        spec = json.load(fh)
    domain = LogAffineRootDomain(spec["vertices"], label=spec.get("label", ""))
    if "n" in spec and spec["n"] != domain.n:
        raise ValueError(f"n = {spec['n']} does not match vertex dimension {domain.n}")
    return domain, oracle_from_json(spec["init_oracle"]), int(spec["t"])
