"""Symmetric polynomials evaluated at finitely many complex variables.

Elementary (e), complete homogeneous (h), power-sum (p) and monomial (m)
symmetric polynomials, hook-shaped Schur polynomials via the bilinear
h/e formula, Kostka numbers by tableau enumeration, and the exact
specializations at the all-ones point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

KOSTKA_SIZE_CAP = 14


class TableTooShortError(ValueError):
    """A SymTable does not hold enough complete homogeneous degrees."""


class SizeCapError(ValueError):
    """A tableau enumeration was requested above the size cap."""


class ConsistencyError(ArithmeticError):
    """An exact computation produced a value its combinatorics forbids."""


@dataclass(frozen=True)
class Partition:
    """Integer partition stored as a nonincreasing tuple of positive parts.

    Trailing zeros are dropped on construction.
    """

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be nonincreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition([sum(1 for p in self.parts if p > j) for j in range(self.parts[0])])

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells (row, col) of the Young diagram, 1-based, row-major."""
        for j, row in enumerate(self.parts, start=1):
            for k in range(1, row + 1):
                yield j, k


@dataclass(frozen=True)
class Hook:
    """Hook partition (arm+1, 1^leg), written (a|b) in Frobenius notation."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"hook arm and leg must be nonnegative: ({self.a}|{self.b})")

    @property
    def size(self) -> int:
        return self.a + self.b + 1

    @property
    def partition(self) -> Partition:
        return Partition((self.a + 1,) + (1,) * self.b)

    def conjugate(self) -> "Hook":
        return Hook(self.b, self.a)


@dataclass(frozen=True)
class SSYT:
    """Semistandard Young tableau: rows weakly increase, columns strictly."""

    shape: Partition
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if tuple(len(row) for row in self.entries) != self.shape.parts:
            raise ValueError("entries do not fill the shape")
        if not self.is_valid():
            raise ValueError(f"not semistandard: {self.entries}")

    def is_valid(self) -> bool:
        for row in self.entries:
            if any(x < 1 for x in row) or any(x > y for x, y in zip(row, row[1:])):
                return False
        for upper, lower in zip(self.entries, self.entries[1:]):
            if any(x >= y for x, y in zip(upper, lower)):
                return False
        return True

    @property
    def content(self) -> tuple[int, ...]:
        """Type of the tableau: multiplicity of each entry 1..max."""
        flat = [x for row in self.entries for x in row]
        if not flat:
            return ()
        return tuple(flat.count(v) for v in range(1, max(flat) + 1))


# ---------------------------------------------------------------------------
# e / h / p tables


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise ValueError("points must be a vector or a (batch, n) array")
    return pts


def elementary_batch(points) -> np.ndarray:
    """e_0..e_n for each row of `points`, shape (batch, n+1).

    Adds one variable at a time: e_d <- e_d + z e_{d-1}.
    """
    pts = _as_points(points)
    batch, n = pts.shape
    e = np.zeros((batch, n + 1), dtype=complex)
    e[:, 0] = 1.0
    for j in range(n):
        z = pts[:, j : j + 1]
        e[:, 1 : j + 2] = e[:, 1 : j + 2] + z * e[:, 0 : j + 1]
    return e


def complete_batch(points, max_degree: int) -> np.ndarray:
    """h_0..h_D for each row of `points`, shape (batch, D+1).

    Adds one variable at a time: h_d <- h_d + z h_{d-1} (with the new h_{d-1}).
    """
    pts = _as_points(points)
    batch, n = pts.shape
    h = np.zeros((batch, max_degree + 1), dtype=complex)
    h[:, 0] = 1.0
    for j in range(n):
        z = pts[:, j]
        for d in range(1, max_degree + 1):
            h[:, d] += z * h[:, d - 1]
    return h


def power_sums_batch(points, max_degree: int) -> np.ndarray:
    """p_0..p_D for each row; p_0 = n by convention."""
    pts = _as_points(points)
    powers = pts[:, :, None] ** np.arange(max_degree + 1)
    return powers.sum(axis=1)


@dataclass(frozen=True)
class SymTable:
    """e_0..e_n, h_0..h_D and p_0..p_max(n,D) of one complex point.

    Out-of-range degrees follow the usual conventions: e_d = 0 for d > n or
    d < 0, h_d = 0 for d < 0.  Asking for h_d with d > D raises
    TableTooShortError instead of silently returning 0.
    """

    point: np.ndarray
    e: np.ndarray
    h: np.ndarray
    p: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.point)

    @property
    def max_h_degree(self) -> int:
        return len(self.h) - 1

    def elem(self, d: int) -> complex:
        if d < 0 or d > self.n:
            return 0j
        return self.e[d]

    def comp(self, d: int) -> complex:
        if d < 0:
            return 0j
        if d > self.max_h_degree:
            raise TableTooShortError(
                f"table too short: h_{d} requested, table holds h up to degree {self.max_h_degree}"
            )
        return self.h[d]

    def newton_residuals(self) -> tuple[np.ndarray, np.ndarray]:
        """Residuals of Newton's identities for e (d=1..n) and h (d=1..D).

        d e_d - sum_i (-1)^(i-1) p_i e_(d-i)  and  d h_d - sum_i p_i h_(d-i).
        """
        res_e = np.array(
            [
                d * self.e[d] - sum((-1) ** (i - 1) * self.p[i] * self.e[d - i] for i in range(1, d + 1))
                for d in range(1, self.n + 1)
            ]
        )
        res_h = np.array(
            [
                d * self.h[d] - sum(self.p[i] * self.h[d - i] for i in range(1, d + 1))
                for d in range(1, self.max_h_degree + 1)
            ]
        )
        return res_e, res_h


def build_sym_table(point, max_h_degree: int) -> SymTable:
    pt = np.asarray(point, dtype=complex).ravel()
    if pt.size == 0:
        raise ValueError("point must have at least one coordinate")
    if max_h_degree < 0:
        raise ValueError("max_h_degree must be nonnegative")
    e = elementary_batch(pt)[0]
    h = complete_batch(pt, max_h_degree)[0]
    p = power_sums_batch(pt, max(pt.size, max_h_degree))[0]
    for arr in (pt, e, h, p):
        arr.setflags(write=False)
    return SymTable(point=pt, e=e, h=h, p=p)


# ---------------------------------------------------------------------------
# hook Schur polynomials


def schur_hook(hook: Hook, table: SymTable) -> complex:
    """s_(a|b) = sum_j (-1)^j h_(a-j) e_(b+j+1)."""
    a, b = hook.a, hook.b
    if a + b + 1 > table.max_h_degree:
        raise TableTooShortError(
            f"table too short: hook ({a}|{b}) needs h up to degree {a + b + 1}, "
            f"table holds {table.max_h_degree}"
        )
    total = 0j
    for j in range(0, min(a, table.n - b - 1) + 1):
        total += (-1) ** j * table.h[a - j] * table.e[b + j + 1]
    return total


def schur_hook_dual(hook: Hook, table: SymTable) -> complex:
    """The other bilinear form, s_(a|b) = sum_k (-1)^k h_(a+k+1) e_(b-k)."""
    a, b = hook.a, hook.b
    total = 0j
    for k in range(0, b + 1):
        total += (-1) ** k * table.comp(a + k + 1) * table.elem(b - k)
    return total


def schur_hook_batch(a: int, b: int, e: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vectorized s_(a|b) from batched tables e (batch, n+1), h (batch, >a)."""
    n = e.shape[1] - 1
    out = np.zeros(e.shape[0], dtype=complex)
    for j in range(0, min(a, n - b - 1) + 1):
        out += (-1) ** j * h[:, a - j] * e[:, b + j + 1]
    return out


def schur_hook_ones(hook: Hook, n: int) -> int:
    """Exact s_(a|b)(1_n) = C(n+a, a+b+1) C(a+b, b)."""
    if n < 1:
        raise ValueError("n must be positive")
    a, b = hook.a, hook.b
    return math.comb(n + a, a + b + 1) * math.comb(a + b, b)


def schur_ones_general(lam: Partition, n: int) -> int:
    """Exact s_lambda(1_n) by the hook-content product."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    conj = lam.conjugate()
    value = Fraction(1)
    for j, k in lam.cells():
        arm_leg = lam[j - 1] - j + conj[k - 1] - k
        value *= Fraction(n + k - j, arm_leg + 1)
    if value.denominator != 1:
        raise ConsistencyError(f"hook-content product for {lam.parts}, n={n} is not integral: {value}")
    return int(value)


# ---------------------------------------------------------------------------
# partitions, tableaux, Kostka numbers, monomials


def partitions(size: int, max_length: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of `size` in reverse lexicographic order."""
    if max_part is None:
        max_part = size
    if max_length is None:
        max_length = size

    def rec(remaining, cap, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    for parts in rec(size, max_part, max_length):
        yield Partition(parts)


def _check_cap(lam: Partition):
    if lam.size > KOSTKA_SIZE_CAP:
        raise SizeCapError(f"|lambda| = {lam.size} exceeds the enumeration cap {KOSTKA_SIZE_CAP}")


def semistandard_tableaux(shape: Partition, max_entry: int) -> Iterator[SSYT]:
    """Enumerate every SSYT of `shape` with entries in 1..max_entry (backtracking)."""
    shape = shape if isinstance(shape, Partition) else Partition(shape)
    _check_cap(shape)
    cells = list(shape.cells())
    grid = [[0] * row for row in shape.parts]

    def fill(pos):
        if pos == len(cells):
            yield SSYT(shape, tuple(tuple(row) for row in grid))
            return
        j, k = cells[pos][0] - 1, cells[pos][1] - 1
        low = 1
        if k > 0:
            low = max(low, grid[j][k - 1])
        if j > 0:
            low = max(low, grid[j - 1][k] + 1)
        for v in range(low, max_entry + 1):
            grid[j][k] = v
            yield from fill(pos + 1)
        grid[j][k] = 0

    yield from fill(0)


def _horizontal_strips(outer: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    """Partitions inner <= outer with outer/inner a horizontal strip of `size` cells."""
    rows = len(outer)

    def rec(i, left, acc):
        if i == rows:
            if left == 0:
                yield tuple(acc)
            return
        # inner_i in [outer_{i+1}, outer_i]; no two removed cells share a column
        lo = outer[i + 1] if i + 1 < rows else 0
        for inner_i in range(outer[i], lo - 1, -1):
            removed = outer[i] - inner_i
            if removed > left:
                break
            acc.append(inner_i)
            yield from rec(i + 1, left - removed, acc)
            acc.pop()

    yield from rec(0, size, [])


@lru_cache(maxsize=None)
def _kostka_chain(shape: tuple[int, ...], weights: tuple[int, ...]) -> int:
    # Peel off the largest entry: its cells form a horizontal strip.
    if not weights:
        return 1 if sum(shape) == 0 else 0
    *rest, last = weights
    total = 0
    for inner in _horizontal_strips(shape, last):
        inner = tuple(p for p in inner if p > 0)
        if len(inner) > len(rest):
            continue
        total += _kostka_chain(inner, tuple(rest))
    return total


def kostka(lam: Partition, mu: Sequence[int]) -> int:
    """Number of SSYT of shape lam and type mu (mu may be any composition)."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    mu = tuple(int(m) for m in mu)
    _check_cap(lam)
    if any(m < 0 for m in mu):
        raise ValueError("type entries must be nonnegative")
    if sum(mu) != lam.size:
        return 0
    return _kostka_chain(lam.parts, mu)


def _distinct_permutations(values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts)
    n = len(values)
    acc: list[int] = []

    def rec():
        if len(acc) == n:
            yield tuple(acc)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                acc.append(key)
                yield from rec()
                acc.pop()
                counts[key] += 1

    yield from rec()


def monomial_exponents(mu: Partition, n: int) -> np.ndarray:
    """Distinct exponent vectors of the symmetric monomial m_mu in n variables."""
    mu = mu if isinstance(mu, Partition) else Partition(mu)
    if mu.length > n:
        return np.zeros((0, n), dtype=int)
    padded = list(mu.parts) + [0] * (n - mu.length)
    return np.array(list(_distinct_permutations(padded)), dtype=int).reshape(-1, n)


def monomial_sym(mu: Partition, point) -> complex:
    """m_mu(z_1..z_n), each distinct monomial counted once."""
    pt = np.asarray(point, dtype=complex).ravel()
    exps = monomial_exponents(mu, pt.size)
    if exps.shape[0] == 0:
        return 0j
    return complex(np.prod(pt[None, :] ** exps, axis=1).sum())


def schur_via_kostka(lam: Partition, point) -> complex:
    """s_lambda(point) = sum_mu K_(lambda mu) m_mu(point), slow reference route."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    _check_cap(lam)
    pt = np.asarray(point, dtype=complex).ravel()
    if lam.length > pt.size:
        return 0j
    total = 0j
    for mu in partitions(lam.size, max_length=pt.size):
        K = kostka(lam, mu.parts)
        if K:
            total += K * monomial_sym(mu, pt)
    return total


def ssyt_count(shape: Partition, max_entry: int) -> int:
    return sum(1 for _ in semistandard_tableaux(shape, max_entry))


def hooks_of_size(size: int) -> Iterator[Hook]:
    for a in range(size):
        yield Hook(a, size - 1 - a)


__all__ = [
    "KOSTKA_SIZE_CAP",
    "ConsistencyError",
    "Hook",
    "Partition",
    "SSYT",
    "SizeCapError",
    "SymTable",
    "TableTooShortError",
    "build_sym_table",
    "complete_batch",
    "elementary_batch",
    "hooks_of_size",
    "kostka",
    "monomial_exponents",
    "monomial_sym",
    "partitions",
    "power_sums_batch",
    "schur_hook",
    "schur_hook_batch",
    "schur_hook_dual",
    "schur_hook_ones",
    "schur_ones_general",
    "schur_via_kostka",
    "semistandard_tableaux",
    "ssyt_count",
]
