"""Brute-force search over root configurations, checked against the closed form.

Only roots are searched.  For fixed roots the best initialization is
explicit (x_t is linear in it), so the objective is the weighted l1 norm
of the interpolation coefficients psi_t.  One root's phase is pinned to 0
since the objective is invariant under a common rotation of all roots.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .amplitude import (
    METHODS,
    SIMPLE_GRID_THRESHOLD,
    hook_functional,
    interp_coeffs,
    min_separation,
    psi_schur_batch,
)

MAX_BRUTE_ORDER = 4
MAX_BRUTE_TIME = 12
_CHUNK = 1 << 16


class OracleCapError(ValueError):
    """Brute force requested beyond the hard (n, t) caps."""


@dataclass(frozen=True)
class OracleConfig:
    phase_grid: int = 64
    radial_grid: int = 2
    random_trials: int = 10_000
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.phase_grid < 1 or self.radial_grid < 1 or self.random_trials < 0:
            raise ValueError("grid resolutions must be >= 1 and random_trials >= 0")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class OracleResult:
    brute_max: float
    closed_form: float
    gap: float
    argmax_roots: list[complex]
    cophase_distance: float
    grid_slack: float = 0.0
    verified: bool | None = None
    evaluations: int = 0
    config: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["argmax_roots"] = [[z.real, z.imag] for z in self.argmax_roots]
        return d


def _objective(points: np.ndarray, weights: np.ndarray, t: int) -> np.ndarray:
    return np.abs(psi_schur_batch(points, t)) @ weights


def _check_caps(n: int, t: int):
    if n > MAX_BRUTE_ORDER or t > MAX_BRUTE_TIME:
        raise OracleCapError(f"brute force limited to n <= {MAX_BRUTE_ORDER}, t <= {MAX_BRUTE_TIME}")
    if t < n:
        raise ValueError("t must be at least n")


def _radial_levels(r: float, m: int) -> np.ndarray:
    if m == 1:
        return np.array([r])
    return np.linspace(0.0, r, m)


def _grid_points(radii: np.ndarray, config: OracleConfig):
    """Yield grid chunks in lexicographic (phase vector, radius vector) order."""
    n = radii.size
    m = config.phase_grid
    phases = 2 * np.pi * np.arange(m) / m
    levels = [_radial_levels(r, config.radial_grid) for r in radii]
    radial = np.array(list(itertools.product(*levels)))  # (R, n)
    phase_idx = itertools.product(range(1), *[range(m)] * (n - 1))
    buf = []
    for idx in phase_idx:
        ph = np.exp(1j * phases[list(idx)])
        buf.append(radial * ph)
        if len(buf) * radial.shape[0] >= _CHUNK:
            yield np.concatenate(buf)
            buf = []
    if buf:
        yield np.concatenate(buf)


def _random_points(radii: np.ndarray, trials: int, rng: np.random.Generator) -> np.ndarray:
    n = radii.size
    rho = radii * np.sqrt(rng.uniform(0.0, 1.0, (trials, n)))
    phi = rng.uniform(0.0, 2 * np.pi, (trials, n))
    return rho * np.exp(1j * phi)


def cophase_distance(roots) -> float:
    """Largest pairwise phase gap (in [0, pi]) among nonzero roots."""
    z = np.asarray(roots, dtype=complex)
    z = z[np.abs(z) > 1e-15]
    if z.size < 2:
        return 0.0
    ang = np.angle(z)
    diff = np.abs(ang[:, None] - ang[None, :]) % (2 * np.pi)
    return float(np.minimum(diff, 2 * np.pi - diff).max())


def brute_force_max(t: int, radii, weights, config: OracleConfig = OracleConfig()) -> OracleResult:
    r = np.asarray(radii, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    n = r.size
    _check_caps(n, t)
    if w.size != n:
        raise ValueError("radii and weights must have equal length")

    best, best_pt, count = -math.inf, None, 0
    for chunk in _grid_points(r, config):
        vals = _objective(chunk, w, t)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_pt = float(vals[i]), chunk[i]
        count += chunk.shape[0]
    if config.random_trials:
        rng = np.random.default_rng(config.seed)
        pts = _random_points(r, config.random_trials, rng)
        vals = _objective(pts, w, t)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_pt = float(vals[i]), pts[i]
        count += pts.shape[0]

    closed = hook_functional(r, w, t)
    return OracleResult(
        brute_max=best,
        closed_form=closed,
        gap=closed - best,
        argmax_roots=[complex(z) for z in best_pt],
        cophase_distance=cophase_distance(best_pt),
        evaluations=count,
        config=asdict(config),
    )


def grid_slack(t: int, radii, weights, config: OracleConfig, probes: int = 64) -> float:
    """Lipschitz estimate times grid half-spacing, summed over coordinates.

    The Lipschitz constants (per unit phase and per unit radius) are
    probed by central finite differences at random points of the polydisc
    and at the cophase point.
    """
    r = np.asarray(radii, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    n = r.size
    rng = np.random.default_rng(config.seed + 1)
    base = np.vstack([r.astype(complex), _random_points(r, probes, rng)])
    h = 1e-6
    lip_phase = lip_rad = 0.0
    for j in range(n):
        unit = np.zeros(n)
        unit[j] = 1.0
        rot = np.exp(1j * h * unit)
        dphi = np.abs(_objective(base * rot, w, t) - _objective(base / rot, w, t)) / (2 * h)
        lip_phase = max(lip_phase, float(dphi.max()))
        # radial step stays inside [0, r_j]
        mod = np.abs(base[:, j])
        up = np.minimum(mod + h, r[j])
        dn = np.maximum(mod - h, 0.0)
        span = up - dn
        ok = span > 0
        if ok.any():
            scale_up = np.where(mod > 0, up / np.where(mod > 0, mod, 1), 0)
            scale_dn = np.where(mod > 0, dn / np.where(mod > 0, mod, 1), 0)
            pu, pd = base.copy(), base.copy()
            pu[:, j] = np.where(mod > 0, base[:, j] * scale_up, up)
            pd[:, j] = np.where(mod > 0, base[:, j] * scale_dn, dn)
            drad = np.abs(_objective(pu, w, t) - _objective(pd, w, t))[ok] / span[ok]
            lip_rad = max(lip_rad, float(drad.max()))
    phase_step = np.pi / config.phase_grid
    rad_step = 0.0 if config.radial_grid == 1 else float(r.max()) / (2 * (config.radial_grid - 1))
    return n * (lip_phase * phase_step + lip_rad * rad_step)


def verify_cophase(t: int, radii, weights, config: OracleConfig = OracleConfig()) -> tuple[bool, OracleResult]:
    """Closed form is an upper bound that the grid search approaches."""
    res = brute_force_max(t, radii, weights, config)
    res.grid_slack = grid_slack(t, radii, weights, config)
    res.verified = bool(-config.tolerance <= res.gap <= res.grid_slack + config.tolerance)
    return res.verified, res


def cross_check_interp(roots, t: int) -> float:
    """Largest deviation between the psi_t routes, relative to max |psi_t|.

    The Vandermonde route is skipped on near-coincident grids.
    """
    z = np.asarray(roots, dtype=complex).ravel()
    methods = [m for m in METHODS if m != "vandermonde" or min_separation(z) >= SIMPLE_GRID_THRESHOLD]
    psis = [interp_coeffs(z, t, m).psi for m in methods]
    scale = max(float(np.abs(p).max()) for p in psis)
    if scale == 0.0:
        return 0.0
    dev = max(float(np.abs(a - b).max()) for a, b in itertools.combinations(psis, 2))
    return dev / scale
