"""Block tables for Schreier-type norms.

Everything here works on a fixed support ``s_0 < ... < s_{k-1}`` with positive
integer weights ``w`` (absolute values scaled by a common denominator).  The
central object is the block table ``B[i][j]``: the largest total weight of a
member of ``S_a`` whose least element is ``s_i`` and which lies inside
``{s_i, ..., s_j}`` (0 when ``j < i``).  The Schreier norm is the largest
entry; the Baernstein norm is a one-dimensional DP over block starts.

Two independent ways to fill the table:

* enumeration -- list the members inside the support (depth-first with
  prefix pruning, or by filtering a cached family table when the support sits
  inside ``{1..N}`` for small ``N``) and take group maxima;
* structural -- recurse on the ordinal: a successor block is a first block
  of the previous family followed by at most ``s_i - 1`` further blocks, and
  a limit row ``i`` is read from the stage the least element selects.  This is
  polynomial in ``k`` for a fixed ordinal and has no ceiling on positions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceeded
from .ordinal import Ordinal, OrdinalKind, fundamental_sequence, is_successor_chain, kind
from .schreier import _member, normalize_level
from .values import RationalVector

_INT64_SAFE = 2**62


def scaled_weights(x: RationalVector) -> tuple[tuple[int, ...], list[int], int]:
    """Support, integer weights ``|x_i| * L`` and the common denominator ``L``."""
    L = 1
    for _, v in x.coords:
        L = math.lcm(L, v.denominator)
    weights = [abs(v.numerator) * (L // v.denominator) for _, v in x.coords]
    return x.support, weights, L


def _weight_array(weights: Sequence[int]) -> np.ndarray:
    if sum(weights) < _INT64_SAFE:
        return np.asarray(weights, dtype=np.int64)
    return np.asarray(list(weights), dtype=object)


# -- enumeration engine ---------------------------------------------------------

@dataclass(frozen=True)
class MemberTable:
    support: tuple[int, ...]
    sets: tuple[tuple[int, ...], ...]   # nonempty members, as position tuples
    incidence: np.ndarray                # (m, k) bool
    first: np.ndarray                    # index of least element
    last: np.ndarray                     # index of largest element

    def __len__(self) -> int:
        return len(self.sets)


@lru_cache(maxsize=32)
def family_table(alpha: Ordinal, N: int, scan_cap: int):
    """All nonempty members of ``S_alpha`` inside {1..N} with bitmasks."""
    sets: list[tuple[int, ...]] = []

    def dfs(E: tuple[int, ...]) -> None:
        for m in range(E[-1] + 1 if E else 1, N + 1):
            F = E + (m,)
            if _member(alpha, F, scan_cap):
                sets.append(F)
                dfs(F)

    dfs(())
    masks = np.fromiter((sum(1 << (e - 1) for e in E) for E in sets), dtype=np.int64, count=len(sets))
    incidence = np.zeros((len(sets), N), dtype=bool)
    for r, E in enumerate(sets):
        incidence[r, [e - 1 for e in E]] = True
    return tuple(sets), masks, incidence


@lru_cache(maxsize=256)
def _dfs_members(alpha: Ordinal, support: tuple[int, ...], scan_cap: int, max_members: int) -> tuple:
    out: list[tuple[int, ...]] = []
    k = len(support)

    def dfs(idx: tuple[int, ...], E: tuple[int, ...]) -> None:
        out.append(idx)
        if len(out) > max_members:
            raise BudgetExceeded(f"more than {max_members} members inside a support of size {k}")
        for r in range(idx[-1] + 1, k):
            F = E + (support[r],)
            if _member(alpha, F, scan_cap):
                dfs(idx + (r,), F)

    for i in range(k):
        dfs((i,), (support[i],))
    return tuple(out)


@lru_cache(maxsize=4096)
def member_table(
    alpha: Ordinal,
    support: tuple[int, ...],
    *,
    table_ceiling: int,
    scan_cap: int,
    max_members: int,
    allow_family_table: bool = True,
) -> MemberTable:
    k = len(support)
    if allow_family_table and support and support[-1] <= table_ceiling:
        N = support[-1]
        sets, masks, incidence = family_table(alpha, N, scan_cap)
        smask = sum(1 << (e - 1) for e in support)
        keep = np.nonzero((masks & ~np.int64(smask)) == 0)[0]
        cols = [e - 1 for e in support]
        inc = incidence[np.ix_(keep, cols)]
        kept_sets = tuple(sets[r] for r in keep)
    else:
        idx_sets = _dfs_members(alpha, support, scan_cap, max_members)
        inc = np.zeros((len(idx_sets), k), dtype=bool)
        for r, idx in enumerate(idx_sets):
            inc[r, list(idx)] = True
        kept_sets = tuple(tuple(support[t] for t in idx) for idx in idx_sets)
    if len(kept_sets) == 0:
        first = last = np.zeros(0, dtype=np.int64)
    else:
        first = inc.argmax(axis=1)
        last = k - 1 - inc[:, ::-1].argmax(axis=1)
    return MemberTable(support, kept_sets, inc, first, last)


def enumeration_blocks(table: MemberTable, weights: Sequence[int]) -> tuple[np.ndarray, list[list[int]]]:
    """Member values and ``best[i][j]`` = max value with least index i, largest index j."""
    k = len(table.support)
    w = _weight_array(weights)
    if len(table) == 0:
        return np.zeros(0, dtype=w.dtype), [[0] * k for _ in range(k)]
    if w.dtype == object:
        values = np.array([sum(int(wt) for wt, on in zip(w, row) if on) for row in table.incidence], dtype=object)
        flat = np.zeros(k * k, dtype=object)
    else:
        values = table.incidence.astype(np.int64) @ w
        flat = np.zeros(k * k, dtype=np.int64)
    np.maximum.at(flat, table.first * k + table.last, values)
    grid = flat.reshape(k, k)
    return values, [[int(v) for v in row] for row in grid]


def prefix_max(best: list[list[int]]) -> list[list[int]]:
    """Turn 'largest index exactly j' into 'largest index at most j'."""
    out = []
    for row in best:
        acc, new = 0, []
        for v in row:
            acc = max(acc, v)
            new.append(acc)
        out.append(new)
    return out


# -- structural engine ----------------------------------------------------------

class StructuralSolver:
    """Fill block tables by recursion on the ordinal (see module docstring)."""

    def __init__(self, positions: Sequence[int], weights: Sequence[int], *, scan_cap: int) -> None:
        self.positions = tuple(positions)
        self.k = len(self.positions)
        self.w = _weight_array(weights)
        self.dtype = self.w.dtype
        self.scan_cap = scan_cap
        self.tables: dict[Ordinal, np.ndarray] = {}
        self.row_source: dict[Ordinal, list[Ordinal]] = {}
        self._h_cache: dict[Ordinal, list[np.ndarray]] = {}
        # blocks allowed after the first one, per least element
        self.extra = [min(s - 1, self.k) for s in self.positions]
        self._upper = np.arange(self.k)[None, :]

    def _zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def table(self, alpha: Ordinal) -> np.ndarray:
        alpha = normalize_level(alpha, self.k)
        if alpha in self.tables:
            return self.tables[alpha]
        k = self.k
        kd = kind(alpha)
        if kd is OrdinalKind.ZERO:
            B = self._zeros((k, k))
            for i in range(k):
                B[i, i:] = self.w[i]
        elif kd is OrdinalKind.SUCCESSOR:
            B = self._successor(self.table(alpha.predecessor), alpha.predecessor)
        else:
            B, sources = self._limit(alpha)
            self.row_source[alpha] = sources
        self.tables[alpha] = B
        return B

    def _limit(self, lam: Ordinal) -> tuple[np.ndarray, list[Ordinal]]:
        k = self.k
        B = self._zeros((k, k))
        sources: list[Ordinal] = []
        for i, s in enumerate(self.positions):
            if is_successor_chain(lam):
                stages = [min(s, k)]
            else:
                if s > self.scan_cap:
                    raise BudgetExceeded(f"S_{lam} row for least element {s} needs {s} stages (cap {self.scan_cap})")
                stages = range(1, s + 1)
            best_row, best_src = None, None
            for n in stages:
                src = normalize_level(fundamental_sequence(lam, n).successor(), k)
                row = self.table(src)[i]
                if best_row is None:
                    best_row, best_src = row.copy(), src
                elif np.any(row > best_row):
                    if np.all(row >= best_row):
                        best_row, best_src = row.copy(), src
                    else:
                        best_row = np.maximum(best_row, row)
                        best_src = None
            B[i] = best_row
            sources.append(best_src)
        return B, sources

    def _h_step(self, B: np.ndarray, H_prev: np.ndarray) -> np.ndarray:
        """Best total of at most c blocks inside [a..j], from the (c-1) table."""
        k = self.k
        H = self._zeros((k + 1, k))
        for a in range(k - 1, -1, -1):
            cand = B[a, a:, None] + H_prev[a + 1:k + 1, :]
            mask = np.arange(a, k)[:, None] <= self._upper
            cand = np.where(mask, cand, 0)
            H[a] = np.maximum(H[a + 1], cand.max(axis=0))
        return H

    def _h_tables(self, beta: Ordinal, B: np.ndarray, upto: int) -> list[np.ndarray]:
        cached = self._h_cache.get(beta)
        if cached is not None and (len(cached) > upto or cached[-1] is None):
            return cached
        Hs = [self._zeros((self.k + 1, self.k))]
        for c in range(1, upto + 1):
            H = self._h_step(B, Hs[-1])
            if np.array_equal(H, Hs[-1]):
                Hs.append(None)  # saturated: later counts change nothing
                break
            Hs.append(H)
        self._h_cache[beta] = Hs
        return Hs

    @staticmethod
    def _h_get(Hs: list, c: int) -> np.ndarray:
        if c < len(Hs) and Hs[c] is not None:
            return Hs[c]
        return Hs[-2] if Hs[-1] is None else Hs[-1]

    def _successor(self, B: np.ndarray, beta: Ordinal) -> np.ndarray:
        k = self.k
        Hs = self._h_tables(beta, B, max(self.extra, default=0))
        out = self._zeros((k, k))
        for i in range(k):
            H = self._h_get(Hs, self.extra[i])
            cand = B[i, i:, None] + H[i + 1:k + 1, :]
            mask = np.arange(i, k)[:, None] <= self._upper
            out[i] = np.where(mask, cand, 0).max(axis=0)
        return out

    def best(self, alpha: Ordinal) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.table(alpha)]

    # -- witnesses ---------------------------------------------------------
    def realize(self, alpha: Ordinal, i: int, j: int) -> tuple[int, ...]:
        """Indices of a member attaining ``table(alpha)[i][j]``."""
        alpha = normalize_level(alpha, self.k)
        B = self.table(alpha)
        kd = kind(alpha)
        if kd is OrdinalKind.ZERO:
            return (i,)
        if kd is OrdinalKind.LIMIT:
            src = self.row_source[alpha][i]
            if src is None:
                target = B[i, j]
                for n in range(1, self.positions[i] + 1):
                    src = normalize_level(fundamental_sequence(alpha, n).successor(), self.k)
                    if self.table(src)[i, j] == target:
                        break
            return self.realize(src, i, j)
        beta = alpha.predecessor
        Bb = self.table(beta)
        Hs = self._h_tables(beta, Bb, max(self.extra, default=0))
        H = self._h_get(Hs, self.extra[i])
        target = B[i, j]
        for t in range(i, j + 1):
            if Bb[i, t] + H[t + 1, j] == target:
                return self.realize(beta, i, t) + self._realize_h(beta, Hs, self.extra[i], t + 1, j)
        raise AssertionError("block table is inconsistent")

    def _realize_h(self, beta: Ordinal, Hs: list, c: int, a: int, j: int) -> tuple[int, ...]:
        out: tuple[int, ...] = ()
        Bb = self.table(beta)
        while a <= j and c > 0:
            H = self._h_get(Hs, c)
            value = H[a, j]
            if value == 0:
                break
            if value == H[a + 1, j]:
                a += 1
                continue
            Hprev = self._h_get(Hs, c - 1) if c - 1 > 0 else self._zeros((self.k + 1, self.k))
            for t in range(a, j + 1):
                if Bb[a, t] + Hprev[t + 1, j] == value:
                    out += self.realize(beta, a, t)
                    a, c = t + 1, c - 1
                    break
            else:
                raise AssertionError("count table is inconsistent")
        return out


# -- the Baernstein dynamic program -------------------------------------------

def block_dp(best: list[list[int]], power: Callable, add: Callable = None, better: Callable = None):
    """``dp[i]`` = best sum of ``power(block)`` over successive blocks starting at index >= i.

    ``best`` may use either 'largest index exactly j' or 'at most j'
    semantics; both give the same optimum.
    """
    k = len(best)
    dp = [power(0)] * (k + 1)
    add = add or (lambda a, b: a + b)
    better = better or max
    for i in range(k - 1, -1, -1):
        cur = dp[i + 1]
        row = best[i]
        for j in range(i, k):
            if row[j]:
                cur = better(cur, add(power(row[j]), dp[j + 1]))
        dp[i] = cur
    return dp


def interval_power_fn(p: Fraction, scale: int):
    from .intervals import Interval, power_bounds

    cache: dict[int, Interval] = {}

    def f(v: int):
        if v == 0:
            return Interval.point(0)
        if v not in cache:
            cache[v] = power_bounds(Fraction(v), p, scale)
        return cache[v]

    return f
