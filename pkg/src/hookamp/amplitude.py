"""Linear recurrences, monomial interpolation and worst-case amplitudes.

A monic characteristic polynomial f(z) = prod (z - z_j) defines the
recurrence x_{t+n} = -sum_j f_j x_{t+j}.  The solution at time t is the
inner product of the initial values with the coefficients psi_t of the
degree-(n-1) polynomial interpolating z^t on the roots, so the largest
|x_t| over a polydisc of initial values is a weighted l1 norm of psi_t.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import integrate

from .symfunc import Hook, build_sym_table, complete_batch, elementary_batch, schur_hook, schur_hook_batch

Method = Literal["vandermonde", "recurrence", "schur"]
METHODS: tuple[str, ...] = ("vandermonde", "recurrence", "schur")

SIMPLE_GRID_THRESHOLD = 1e-12
MAX_SAFE_ORDER = 16
MAX_SAFE_TIME = 64


class NearSingularGridError(ValueError):
    """Two interpolation nodes are too close for the Vandermonde route."""


class RangeError(ValueError):
    """Requested (n, t) lies outside the double-precision safe range."""


def check_range(n: int, t: int, unsafe: bool = False) -> None:
    if unsafe:
        return
    if n > MAX_SAFE_ORDER or t > MAX_SAFE_TIME:
        raise RangeError(
            f"(n={n}, t={t}) outside the safe range n <= {MAX_SAFE_ORDER}, t <= {MAX_SAFE_TIME}"
        )


@dataclass(frozen=True)
class RecurrenceSpec:
    """Roots z_1..z_n and monic coefficients f_0..f_n (f_n = 1)."""

    roots: np.ndarray
    coeffs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.roots)

    def companion(self) -> np.ndarray:
        """Companion matrix acting on windows (x_t, ..., x_{t+n-1})."""
        n = self.n
        A = np.zeros((n, n), dtype=complex)
        A[:-1, 1:] = np.eye(n - 1)
        A[-1, :] = -self.coeffs[:-1]
        return A


def char_poly_from_roots(roots) -> RecurrenceSpec:
    z = np.asarray(roots, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("need at least one root")
    n = z.size
    e = build_sym_table(z, 0).e
    coeffs = np.array([(-1) ** (n - j) * e[n - j] for j in range(n + 1)], dtype=complex)
    return RecurrenceSpec(roots=z, coeffs=coeffs)


def simulate(spec: RecurrenceSpec, init, T: int) -> np.ndarray:
    """Trajectory x_0..x_T from the initial window x_0..x_{n-1}."""
    n = spec.n
    x0 = np.asarray(init, dtype=complex).ravel()
    if x0.size != n:
        raise ValueError(f"need {n} initial values, got {x0.size}")
    if T < n - 1:
        raise ValueError(f"T must be at least n-1 = {n - 1}")
    x = np.zeros(T + 1, dtype=complex)
    x[:n] = x0
    f = spec.coeffs[:-1]
    for s in range(T + 1 - n):
        x[s + n] = -np.dot(f, x[s : s + n])
    return x


def write_trajectory_csv(trajectory, fh) -> None:
    """Columns t, re, im, abs."""
    writer = csv.writer(fh)
    writer.writerow(["t", "re", "im", "abs"])
    for t, x in enumerate(np.asarray(trajectory, dtype=complex)):
        writer.writerow([t, repr(float(x.real)), repr(float(x.imag)), repr(float(abs(x)))])


# ---------------------------------------------------------------------------
# interpolation coefficients


@dataclass(frozen=True)
class InterpCoeffs:
    """Coefficients (degree 0..n-1) of the interpolant of z^t on the roots."""

    psi: np.ndarray
    t: int
    method: str

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.psi)


def min_separation(roots) -> float:
    z = np.asarray(roots, dtype=complex).ravel()
    if z.size < 2:
        return math.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def _leja_order(z: np.ndarray) -> np.ndarray:
    # Leja ordering keeps divided-difference tables well scaled.
    idx = [int(np.argmax(np.abs(z)))]
    rest = [i for i in range(z.size) if i != idx[0]]
    prod = np.abs(z[rest] - z[idx[0]])
    while rest:
        j = int(np.argmax(prod))
        idx.append(rest.pop(j))
        prod = np.delete(prod, j)
        if rest:
            prod = prod * np.abs(z[rest] - z[idx[-1]])
    return np.array(idx)


def _psi_vandermonde(z: np.ndarray, t: int) -> np.ndarray:
    if min_separation(z) < SIMPLE_GRID_THRESHOLD:
        raise NearSingularGridError(
            "near-singular grid: two nodes closer than "
            f"{SIMPLE_GRID_THRESHOLD:g}; use method='schur' or 'recurrence'"
        )
    x = z[_leja_order(z)]
    n = x.size
    # Newton divided differences of z^t, in place.
    c = x.astype(complex) ** t
    for level in range(1, n):
        c[level:] = (c[level:] - c[level - 1 : -1]) / (x[level:] - x[: n - level])
    # Newton form -> monomial coefficients by nested multiplication.
    poly = np.zeros(n, dtype=complex)
    poly[0] = c[-1]
    deg = 0
    for i in range(n - 2, -1, -1):
        shifted = np.zeros(n, dtype=complex)
        shifted[1 : deg + 2] = poly[: deg + 1]
        poly = shifted - x[i] * poly
        poly[0] += c[i]
        deg += 1
    return poly


def _psi_recurrence(z: np.ndarray, t: int) -> np.ndarray:
    spec = char_poly_from_roots(z)
    n = z.size
    f = spec.coeffs
    psi = np.zeros(n, dtype=complex)
    if t < n:
        psi[t] = 1.0
        return psi
    psi[n - 1] = 1.0
    for _ in range(t - n + 1):
        top = psi[-1]
        nxt = np.empty(n, dtype=complex)
        nxt[0] = -top * f[0]
        nxt[1:] = psi[:-1] - top * f[1:n]
        psi = nxt
    return psi


def _psi_schur(z: np.ndarray, t: int) -> np.ndarray:
    n = z.size
    if t < n:
        psi = np.zeros(n, dtype=complex)
        psi[t] = 1.0
        return psi
    table = build_sym_table(z, t)
    return np.array(
        [(-1) ** (n - k + 1) * schur_hook(Hook(t - n, n - k - 1), table) for k in range(n)],
        dtype=complex,
    )


_ROUTES = {"vandermonde": _psi_vandermonde, "recurrence": _psi_recurrence, "schur": _psi_schur}


def interp_coeffs(roots, t: int, method: Method = "schur") -> InterpCoeffs:
    """psi_t by one of three independent routes.

    vandermonde: divided differences on the (Leja-ordered) nodes, then
    conversion to the monomial basis; refuses near-coincident nodes.
    recurrence: psi_{s+1} = A(f)^T psi_s started from psi_{n-1} = z^{n-1}.
    schur: coefficient k is (-1)^(n-k+1) s_(t-n|n-k-1)(roots); fine with
    repeated roots.
    """
    z = np.asarray(roots, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("need at least one node")
    if t < 0:
        raise ValueError("t must be nonnegative")
    try:
        route = _ROUTES[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None
    return InterpCoeffs(psi=route(z, t), t=t, method=method)


def psi_schur_batch(points: np.ndarray, t: int) -> np.ndarray:
    """psi_t by the Schur route for a batch of grids, shape (batch, n)."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    n = pts.shape[1]
    if t < n:
        raise ValueError("batched route needs t >= n")
    e = elementary_batch(pts)
    h = complete_batch(pts, t - n)
    return np.stack(
        [(-1) ** (n - k + 1) * schur_hook_batch(t - n, n - k - 1, e, h) for k in range(n)], axis=1
    )


# ---------------------------------------------------------------------------
# amplitudes


@dataclass(frozen=True)
class AmplitudeQuery:
    t: int
    radii: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "weights", weights)
        if not radii:
            raise ValueError("need at least one radius")
        if len(weights) != len(radii):
            raise ValueError("radii and weights must have equal length")
        if any(r < 0 for r in radii) or any(w < 0 for w in weights):
            raise ValueError("radii and weights must be nonnegative")
        if self.t < len(radii):
            raise ValueError(f"t = {self.t} must be at least n = {len(radii)}")

    @property
    def n(self) -> int:
        return len(self.radii)


def amplitude_at(spec: RecurrenceSpec, weights, t: int) -> float:
    """Largest |x_t| over initial windows with |x_{k-1}| <= w_k, for this f."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != spec.n:
        raise ValueError("one weight per root required")
    if t < spec.n:
        raise ValueError("t must be at least n")
    psi = interp_coeffs(spec.roots, t, "schur").psi
    return float(np.dot(w, np.abs(psi)))


def hook_functional(radii, weights, t: int) -> float:
    """sum_k w_k s_(t-n|n-k)(radii), k = 1..n."""
    r = np.asarray(radii, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    n = r.size
    if w.size != n:
        raise ValueError("radii and weights must have equal length")
    if t < n:
        raise ValueError("t must be at least n")
    table = build_sym_table(r, t)
    total = 0.0
    for k in range(1, n + 1):
        if w[k - 1]:
            total += w[k - 1] * schur_hook(Hook(t - n, n - k), table).real
    return float(total)


def max_amplitude_polydisc(query: AmplitudeQuery) -> float:
    """Supremum of |x_t| over roots in the r-polydisc and inits in the w-polydisc."""
    return hook_functional(query.radii, query.weights, query.t)


def repeated_root_closed_form(n: int, r: float, t: int) -> float:
    """C(t,n) r^(t-n) sum_k C(n,k) k/(t-n+k) r^k: n equal roots of modulus r, unit inits."""
    if not (t >= n >= 1) or r < 0:
        raise ValueError("need t >= n >= 1 and r >= 0")
    s = sum(math.comb(n, k) * k / (t - n + k) * r**k for k in range(1, n + 1))
    return math.comb(t, n) * r ** (t - n) * s


def repeated_root_integral(n: int, r: float, t: int) -> float:
    """C(t,n) * integral_0^r n u^(t-n) (1+u)^(n-1) du by adaptive quadrature."""
    if not (t >= n >= 1) or r < 0:
        raise ValueError("need t >= n >= 1 and r >= 0")
    val, _ = integrate.quad(
        lambda u: n * u ** (t - n) * (1 + u) ** (n - 1), 0.0, r, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return math.comb(t, n) * val


def optimal_initialization(n: int, weights, theta: float = 0.0) -> np.ndarray:
    """x_{k-1} = -w_k exp(i (pi - theta)(n-k+1)), extremal for cophase roots e^{i theta} r."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != n:
        raise ValueError("one weight per coordinate required")
    k = np.arange(1, n + 1)
    return -w * np.exp(1j * (np.pi - theta) * (n - k + 1))


def cophase_roots(radii, theta: float = 0.0) -> np.ndarray:
    return np.exp(1j * theta) * np.asarray(radii, dtype=float)


@dataclass(frozen=True)
class PeakResult:
    value: float
    argmax_t: int
    unbounded: bool
    growth_detected: bool
    t_max: int


def peak_amplitude(radii, weights, t_max: int) -> PeakResult:
    """Largest maximal amplitude over n <= t <= t_max (plain scan).

    `unbounded` reports max radius > 1, where the supremum over all t is
    infinite.  `growth_detected` flags that the maximum sits at the end of
    the horizon, i.e. the finite scan may not have found the peak.
    """
    r = np.asarray(radii, dtype=float).ravel()
    n = r.size
    if t_max < n:
        raise ValueError("t_max must be at least n")
    values = [hook_functional(r, weights, t) for t in range(n, t_max + 1)]
    i = int(np.argmax(values))
    return PeakResult(
        value=float(values[i]),
        argmax_t=n + i,
        unbounded=bool(r.max() > 1.0),
        growth_detected=bool(n + i == t_max and t_max > n),
        t_max=t_max,
    )


# ---------------------------------------------------------------------------
# bounds for n equal radii r and unit initial bounds


def crude_bound(n: int, r: float, t: int) -> float:
    return ((3 * n - 1) / 2 * r) ** (t - n) * ((1 + r) ** n - 1)


def refined_bound(n: int, r: float, t: int) -> float:
    return math.comb(t, n) * r ** (t - n) * ((1 + r) ** n - 1)


def fourier_bound(n: int, t: int) -> float:
    """Bound on ||psi_t||_1 for any grid in the closed unit polydisc."""
    return math.sqrt(n) * (2**n * math.comb(t, n) + 1)
