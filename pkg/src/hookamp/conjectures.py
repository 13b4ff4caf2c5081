"""Falsification scans for worst-case interpolation error on self-conjugate grids.

With nodes z_1..z_n closed under conjugation (real nodes doubled), the
residual z^t - psi_t(z) and its derivatives can be written as alternating
sums of hook Schur polynomials of the shifted nodes.  The scans below
sample such grids and record how far the normalized residuals get from the
bound given by the characteristic polynomial itself.  Violations are
reported as records, never raised.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import mpmath
import numpy as np

from .symfunc import complete_batch, elementary_batch, schur_hook_batch

SINGULAR_THRESHOLD = 1e-12
EXCEEDANCE_TOL = 1e-7
REGIONS = ("unit_disc", "right_half_disc", "unit_circle")


class SingularDenominatorError(ZeroDivisionError):
    """|e_{n-k}| fell below the singularity threshold."""


def is_self_conjugate(nodes, tol: float = 1e-12) -> bool:
    """Nonreal nodes come with their conjugates, real nodes with even multiplicity."""
    remaining = [complex(z) for z in np.asarray(nodes, dtype=complex).ravel()]
    while remaining:
        z = remaining.pop(0)
        target = z.conjugate() if abs(z.imag) > tol else complex(z.real, 0.0)
        for i, u in enumerate(remaining):
            if abs(u - target) <= tol and (abs(z.imag) > tol) == (abs(u.imag) > tol):
                del remaining[i]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class SelfConjugateGrid:
    nodes: tuple[complex, ...]

    def __post_init__(self):
        nodes = tuple(complex(z) for z in np.asarray(self.nodes, dtype=complex).ravel())
        if not is_self_conjugate(nodes):
            raise ValueError(f"nodes are not self-conjugate: {nodes}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def array(self) -> np.ndarray:
        return np.array(self.nodes, dtype=complex)

    def to_json(self) -> list[list[float]]:
        return [[z.real, z.imag] for z in self.nodes]


def _region_draw(region: str, size: int, rng: np.random.Generator) -> np.ndarray:
    if region == "unit_circle":
        return np.exp(1j * rng.uniform(0.0, 2 * np.pi, size))
    rho = np.sqrt(rng.uniform(0.0, 1.0, size))
    if region == "unit_disc":
        phi = rng.uniform(0.0, 2 * np.pi, size)
    elif region == "right_half_disc":
        phi = rng.uniform(-np.pi / 2, np.pi / 2, size)
    else:
        raise ValueError(f"unknown region {region!r}; expected one of {REGIONS}")
    return rho * np.exp(1j * phi)


def _real_draw(region: str, size: int, rng: np.random.Generator) -> np.ndarray:
    if region == "unit_circle":
        return rng.choice([-1.0, 1.0], size)
    if region == "right_half_disc":
        return rng.uniform(0.0, 1.0, size)
    return rng.uniform(-1.0, 1.0, size)


def sample_self_conjugate_batch(
    n: int, region: str, rng: np.random.Generator, size: int, p_real: float = 0.2
) -> np.ndarray:
    """`size` self-conjugate grids of n nodes, shape (size, n)."""
    if n % 2:
        raise ValueError("self-conjugate sampling needs an even number of nodes")
    half = n // 2
    z = _region_draw(region, (size, half), rng)
    real = rng.uniform(0.0, 1.0, (size, half)) < p_real
    z = np.where(real, _real_draw(region, (size, half), rng), z)
    return np.concatenate([z, np.where(real, z, z.conj())], axis=1)


def sample_self_conjugate(n: int, region: str, rng: np.random.Generator, p_real: float = 0.2) -> SelfConjugateGrid:
    return SelfConjugateGrid(tuple(sample_self_conjugate_batch(n, region, rng, 1, p_real)[0]))


# ---------------------------------------------------------------------------
# Q ratio and residual derivatives


def _check_tnk(t: int, n: int, k: int):
    if not 0 <= k <= n - 1:
        raise ValueError(f"k = {k} must lie in [0, n-1]")
    if t < n:
        raise ValueError(f"t = {t} must be at least n = {n}")


def _residual_taylor(nodes: np.ndarray, zs: np.ndarray, n: int, k: int, m_max: int) -> np.ndarray:
    """R[m - n, b, i]: k-th Taylor coefficient of x^m - psi_m(x | nodes[b]) at zs[b, i].

    nodes has shape (B, n), zs shape (B, Z); m runs over n..m_max.
    Uses x^m - psi_m = q_m f with quotient q_m = sum_l h_l(nodes) x^(m-n-l).
    The Taylor coefficients of q_m at z follow the Horner step
    q_(m+1) = x q_m + h_(m+1-n), which stays well conditioned for nodes
    in the disc, unlike the alternating hook sum evaluated in floating point.
    """
    nodes = np.atleast_2d(np.asarray(nodes, dtype=complex))
    zs = np.atleast_2d(np.asarray(zs, dtype=complex))
    B, Z = zs.shape
    h = complete_batch(nodes, m_max - n)
    e_shift = elementary_batch((nodes[:, None, :] - zs[:, :, None]).reshape(B * Z, n)).reshape(B, Z, n + 1)
    # F[j] = f^(j)(z) / j!
    F = np.array([(-1) ** (n - j) * e_shift[:, :, n - j] for j in range(k, -1, -1)])
    T = np.zeros((k + 1, B, Z), dtype=complex)
    T[0] = 1.0
    out = np.empty((m_max - n + 1, B, Z), dtype=complex)
    for m in range(n, m_max + 1):
        out[m - n] = (T * F).sum(axis=0)
        if m < m_max:
            T[1:] = zs * T[1:] + T[:-1]
            T[0] = zs * T[0] + h[:, m + 1 - n, None]
    return out


def q_eval_batch(t: int, n: int, k: int, zeta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Q_{t,n,k} for a batch of points; returns (values, singular mask).

    The numerator is the k-th Taylor coefficient at 1 of the residual on
    nodes 1 - zeta.  Singular rows get NaN.
    """
    _check_tnk(t, n, k)
    zeta = np.atleast_2d(np.asarray(zeta, dtype=complex))
    e = elementary_batch(zeta)
    den = math.comb(t, n) * e[:, n - k]
    singular = np.abs(e[:, n - k]) < SINGULAR_THRESHOLD
    num = _residual_taylor(1.0 - zeta, np.ones((zeta.shape[0], 1)), n, k, t)[-1, :, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(singular, np.nan, num / np.where(singular, 1.0, den))
    return q, singular


def q_eval(t: int, n: int, k: int, zeta) -> complex:
    """sum_d (-1)^d C(t, n+d) s_(d|n-k-1)(zeta) / (C(t,n) e_{n-k}(zeta))."""
    z = np.asarray(zeta, dtype=complex).ravel()
    if z.size != n:
        raise ValueError(f"expected {n} coordinates, got {z.size}")
    q, singular = q_eval_batch(t, n, k, z[None, :])
    if singular[0]:
        raise SingularDenominatorError(f"singular denominator: |e_{n - k}| < {SINGULAR_THRESHOLD:g}")
    return complex(q[0])


def _schur_sum_mp(t: int, n: int, k: int, z: complex, nodes: np.ndarray) -> complex:
    """(-1)^(n-k) sum_d C(t,n+d) z^(t-n-d) s_(d|n-k-1)(nodes - z), in extended precision.

    The terms can exceed the result by about 4^t, so the working precision
    grows with t and the final value is correct to double precision.
    """
    with mpmath.workdps(30 + t):
        zz = mpmath.mpc(z.real, z.imag)
        u = [mpmath.mpc(x.real, x.imag) - zz for x in nodes]
        D = t - n
        e = [mpmath.mpc(1)] + [mpmath.mpc(0)] * n
        h = [mpmath.mpc(1)] + [mpmath.mpc(0)] * D
        for x in u:
            for j in range(n, 0, -1):
                e[j] += x * e[j - 1]
            for d in range(1, D + 1):
                h[d] += x * h[d - 1]
        b = n - k - 1
        total = mpmath.mpc(0)
        for d in range(D + 1):
            s = mpmath.fsum((-1) ** j * h[d - j] * e[b + 1 + j] for j in range(min(d, n - b - 1) + 1))
            total += math.comb(t, n + d) * zz ** (D - d) * s
        return complex((-1) ** (n - k) * total)


def error_derivative(t: int, n: int, k: int, z, nodes) -> complex:
    """k-th derivative of z^t - psi_t(z | nodes), divided by k!, at z.

    Evaluates the hook Schur sum over the shifted nodes directly.
    """
    nodes = np.asarray(nodes, dtype=complex).ravel()
    if nodes.size != n:
        raise ValueError(f"expected {n} nodes, got {nodes.size}")
    _check_tnk(t, n, k)
    return _schur_sum_mp(t, n, k, complex(z), nodes)


def error_derivative_grid(t: int, n: int, k: int, zs, nodes) -> np.ndarray:
    """Vectorized error_derivative over many z (quotient recurrence, double precision)."""
    nodes = np.asarray(nodes, dtype=complex).ravel()
    _check_tnk(t, n, k)
    zs = np.asarray(zs, dtype=complex).ravel()
    return _residual_taylor(nodes[None, :], zs[None, :], n, k, t)[-1, 0]


# ---------------------------------------------------------------------------
# pointwise scans


@dataclass
class QReport:
    t: int
    n: int
    k: int
    samples: int
    max_abs_q: float
    worst_grid: SelfConjugateGrid | None
    singular_skipped: int
    seed: int
    branch: str = "z1"
    region: str = "unit_disc"
    max_imag: float = 0.0
    counterexamples: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["worst_grid"] = None if self.worst_grid is None else self.worst_grid.to_json()
        return d


def _counterexample(grid_row: np.ndarray, value: float, t, n, k, seed, branch, index) -> dict:
    return {
        "kind": f"pointwise-{branch}",
        "t": t,
        "n": n,
        "k": k,
        "seed": seed,
        "sample_index": int(index),
        "abs_value": float(value),
        "nodes": [[float(z.real), float(z.imag)] for z in grid_row],
    }


def _scan_one(grids, t, n, k, seed, branch, region) -> QReport:
    if branch == "z1":
        values, singular = q_eval_batch(t, n, k, grids + 1.0)
        mags = np.abs(values)
        imag = np.abs(values.imag)
    else:
        e = elementary_batch(grids)
        h = complete_batch(grids, t - n)
        s = schur_hook_batch(t - n, n - k - 1, e, h)
        singular = np.abs(e[:, n - k]) < SINGULAR_THRESHOLD
        with np.errstate(divide="ignore", invalid="ignore"):
            mags = np.where(singular, np.nan, np.abs(s) / (math.comb(t, n) * np.abs(e[:, n - k])))
        imag = np.concatenate([np.abs(s.imag), np.abs(e[:, n - k].imag)])
    valid = ~singular
    report = QReport(
        t=t, n=n, k=k, samples=int(valid.sum()), max_abs_q=0.0, worst_grid=None,
        singular_skipped=int(singular.sum()), seed=seed, branch=branch, region=region,
    )
    if valid.any():
        i = int(np.nanargmax(np.where(valid, mags, -np.inf)))
        report.max_abs_q = float(mags[i])
        report.worst_grid = SelfConjugateGrid(tuple(grids[i]))
        report.max_imag = float(np.nanmax(imag)) if imag.size else 0.0
        for j in np.flatnonzero(valid & (mags > 1 + EXCEEDANCE_TOL)):
            report.counterexamples.append(_counterexample(grids[j], mags[j], t, n, k, seed, branch, j))
    return report


def scan_pointwise(
    t_range: Iterable[int],
    n: int,
    k_range: Iterable[int] | None = None,
    region: str = "unit_disc",
    trials: int = 10_000,
    seed: int = 0,
    branch: str = "z1",
    p_real: float = 0.2,
    log_path=None,
    mapper: Callable = map,
) -> dict[tuple[int, int], QReport]:
    """Max |Q| per (t, k) over random self-conjugate grids.

    branch "z1" evaluates |Q_{t,n,k}(nodes + 1)|; branch "z0" evaluates
    |s_(t-n|n-k-1)(nodes)| / (C(t,n) |e_{n-k}(nodes)|) with nodes forced
    into the right half-disc.  The same grids are used for every (t, k).
    Samples exceeding 1 + 1e-7 are appended to `log_path` as JSON lines.
    """
    if branch not in ("z1", "z0"):
        raise ValueError("branch must be 'z1' or 'z0'")
    if branch == "z0":
        region = "right_half_disc"
    rng = np.random.default_rng(seed)
    grids = sample_self_conjugate_batch(n, region, rng, trials, p_real)
    keys = [(t, k) for t in t_range for k in (range(n) if k_range is None else k_range)]
    reports = list(mapper(lambda key: _scan_one(grids, key[0], n, key[1], seed, branch, region), keys))
    out = dict(zip(keys, reports))
    if log_path is not None:
        records = [rec for r in reports for rec in r.counterexamples]
        if records:
            append_counterexamples(log_path, records)
    return out


def append_counterexamples(path, records: list[dict]) -> None:
    with open(path, "a") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def special_case_np1(n: int, k: int, zeta, tol: float = 1e-9) -> tuple[bool, bool]:
    """0 <= e_1 - e_{n-k+1}/e_{n-k} <= 2n+2 at zeta (the t = n+1 case, n-k even)."""
    if (n - k) % 2:
        raise ValueError("needs n - k even")
    z = np.asarray(zeta, dtype=complex).ravel()
    e = elementary_batch(z)[0]
    if abs(e[n - k]) < SINGULAR_THRESHOLD:
        raise SingularDenominatorError(f"singular denominator: |e_{n - k}| < {SINGULAR_THRESHOLD:g}")
    top = e[n - k + 1] if n - k + 1 <= n else 0.0
    x = (e[1] - top / e[n - k]).real
    return bool(x >= -tol), bool(x <= 2 * n + 2 + tol)


@dataclass
class SpecialCaseReport:
    n: int
    k: int
    samples: int
    lower_failures: int
    upper_failures: int
    singular_skipped: int
    min_value: float
    max_value: float
    seed: int

    @property
    def all_ok(self) -> bool:
        return self.lower_failures == 0 and self.upper_failures == 0

    def to_json(self) -> dict:
        return dict(asdict(self), all_ok=self.all_ok)


def scan_special_case_np1(
    n: int, k: int, trials: int = 10_000, seed: int = 0, region: str = "unit_disc", tol: float = 1e-9
) -> SpecialCaseReport:
    if (n - k) % 2:
        raise ValueError("needs n - k even")
    rng = np.random.default_rng(seed)
    zeta = sample_self_conjugate_batch(n, region, rng, trials) + 1.0
    e = elementary_batch(zeta)
    singular = np.abs(e[:, n - k]) < SINGULAR_THRESHOLD
    top = e[:, n - k + 1] if n - k + 1 <= n else np.zeros(trials)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (e[:, 1] - top / np.where(singular, 1.0, e[:, n - k])).real
    x = x[~singular]
    return SpecialCaseReport(
        n=n, k=k, samples=int(x.size),
        lower_failures=int((x < -tol).sum()),
        upper_failures=int((x > 2 * n + 2 + tol).sum()),
        singular_skipped=int(singular.sum()),
        min_value=float(x.min()) if x.size else math.nan,
        max_value=float(x.max()) if x.size else math.nan,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Kallioniemi set and uniform scan


def _separate_repeats(nodes: np.ndarray, eps: float = 1e-9) -> np.ndarray:
    """Split exactly repeated nodes while keeping the grid self-conjugate.

    The j-th pair of a real node x becomes x +- i j eps; the j-th repeat of
    a conjugate pair (z, conj z) is shifted by j eps along the real axis.
    """
    out = nodes.copy()
    copies: dict[complex, list[int]] = {}
    for i, z in enumerate(nodes):
        copies.setdefault(complex(z), []).append(i)
    for z, idx in copies.items():
        if z.imag == 0:
            for j in range(1, len(idx) // 2):
                out[idx[2 * j]] = complex(z.real, j * eps)
                out[idx[2 * j + 1]] = complex(z.real, -j * eps)
            if len(idx) >= 2:
                out[idx[0]] = complex(z.real, len(idx) // 2 * eps)
                out[idx[1]] = complex(z.real, -(len(idx) // 2) * eps)
        elif z.imag > 0:
            partners = copies.get(z.conjugate(), [])
            for j in range(1, len(idx)):
                out[idx[j]] = z + j * eps
                if j < len(partners):
                    out[partners[j]] = z.conjugate() + j * eps
    return out


@dataclass
class KallioniemiEstimate:
    grid: SelfConjugateGrid
    k: int
    z_samples: np.ndarray
    membership: np.ndarray
    m_truncation: int
    t_max: int
    sup_values: np.ndarray
    base_values: np.ndarray
    argmax_m: np.ndarray
    tail_active: bool
    perturbed: bool = False

    @property
    def membership_fraction(self) -> float:
        return float(self.membership.mean())

    def to_json(self) -> dict:
        return {
            "grid": self.grid.to_json(),
            "k": self.k,
            "m_truncation": self.m_truncation,
            "t_max": self.t_max,
            "membership_fraction": self.membership_fraction,
            "tail_active": self.tail_active,
            "perturbed": self.perturbed,
            "z": self.z_samples.tolist(),
            "membership": self.membership.astype(bool).tolist(),
            "sup": self.sup_values.tolist(),
            "base": self.base_values.tolist(),
            "argmax_m": self.argmax_m.tolist(),
        }

    def write_csv(self, fh) -> None:
        fh.write("z,member,sup,base,argmax_m\n")
        for z, mem, s, b, m in zip(self.z_samples, self.membership, self.sup_values, self.base_values, self.argmax_m):
            fh.write(f"{float(z)!r},{int(mem)},{float(s)!r},{float(b)!r},{int(m)}\n")


def _monomial_weight(m: int, n: int) -> float:
    # (m-n)!/m!, the scale of z^m with n-th derivative bounded by 1 on the disc
    return 1.0 / math.perm(m, n)


def kallioniemi_estimate(
    nodes,
    k: int,
    resolution: int = 2001,
    m_max: int | None = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> KallioniemiEstimate:
    """Estimate where on [-1, 1] the lowest monomial is the pointwise worst case.

    For each z on an equispaced grid, compares the sup over n <= m <= m_max
    of ((m-n)!/m!) |d^k/dz^k (z^m - interpolant)| with the m = n term
    |f^(k)(z)| / n!.  `tail_active` reports whether any running sup was
    last raised in the final quarter of the m range, i.e. whether the
    truncation may be hiding a larger value.
    """
    grid = SelfConjugateGrid(tuple(np.asarray(nodes, dtype=complex).ravel()))
    x = grid.array()
    n = grid.n
    if not 0 <= k <= n - 1:
        raise ValueError("k must lie in [0, n-1]")
    if m_max is None:
        m_max = 4 * n + 40
    if m_max < n:
        raise ValueError("m_max must be at least n")
    separated = _separate_repeats(x)
    perturbed = bool(np.any(separated != x))
    zs = np.linspace(-1.0, 1.0, resolution)
    R = _residual_taylor(separated[None, :], zs[None, :], n, k, m_max)[:, 0]
    kfact = math.factorial(k)
    sup = np.zeros(resolution)
    argmax = np.full(resolution, n)
    base = None
    for m in range(n, m_max + 1):
        val = kfact * _monomial_weight(m, n) * np.abs(R[m - n])
        if base is None:
            base = val.copy()
            sup = val.copy()
            continue
        raised = val > sup
        sup = np.where(raised, val, sup)
        argmax = np.where(raised, m, argmax)
    membership = sup <= base * (1 + rtol) + atol
    tail_start = n + 3 * (m_max - n) // 4
    return KallioniemiEstimate(
        grid=grid, k=k, z_samples=zs, membership=membership, m_truncation=m_max, t_max=m_max,
        sup_values=sup, base_values=base, argmax_m=argmax,
        tail_active=bool(np.any((argmax > tail_start) & ~membership)),
        perturbed=perturbed,
    )


@dataclass
class UniformScan:
    sup_over_t: float
    rhs: float
    attained_at_t: int
    per_t: list[float]
    max_imag: float

    def to_json(self) -> dict:
        return asdict(self)


def scan_uniform(nodes, k: int, t_max: int, resolution: int = 2001) -> UniformScan:
    """max over n <= t <= t_max of C(t,n)^-1 max_z |sum_d C(t,n+d) z^(t-n-d) s_(d|n-k-1)(nodes - z)|.

    Compared with rhs = max_z |e_{n-k}(nodes - z)| for z on [-1, 1].  The
    t = n term equals rhs, so only sup_over_t <= rhs carries information.
    """
    grid = SelfConjugateGrid(tuple(np.asarray(nodes, dtype=complex).ravel()))
    x = grid.array()
    n = grid.n
    _check_tnk(t_max, n, k)
    zs = np.linspace(-1.0, 1.0, resolution).astype(complex)
    R = _residual_taylor(x[None, :], zs[None, :], n, k, t_max)[:, 0]
    rhs = float(np.abs(R[0]).max())
    per_t, max_imag = [], 0.0
    for t in range(n, t_max + 1):
        vals = R[t - n] / math.comb(t, n)
        max_imag = max(max_imag, float(np.abs(vals.imag).max()))
        per_t.append(float(np.abs(vals).max()))
    i = int(np.argmax(per_t))
    return UniformScan(sup_over_t=per_t[i], rhs=rhs, attained_at_t=n + i, per_t=per_t, max_imag=max_imag)
