"""Exact Schreier, Baernstein, l_p and interval-blocking norms, plus a domination falsifier.

Values come back as :class:`NormValue`: an exact rational, an exact p-th power
(integer ``p``) or a certified rational interval (non-integer ``p``).  Only
``|x_i|`` matters, so every evaluator works on the support with positive
integer weights ``|x_i| * L``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .config import DEFAULT_BUDGET, Budget
from .engines import (
    StructuralSolver,
    block_dp,
    enumeration_blocks,
    interval_power_fn,
    member_table,
    scaled_weights,
)
from .errors import BudgetExceeded
from .intervals import Interval, interval_root, iroot
from .ordinal import Ordinal, as_ordinal
from .report import FAIL, INFO, PASS, CheckReport, timed
from .values import Exponent, NormValue, RationalVector, as_fraction, compare_values, ratio

ENGINES = ("auto", "enumerate", "structural")
MAX_WITNESSES = 10


def _resolve_engine(engine: str, support: tuple[int, ...], budget: Budget) -> str:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    if engine == "auto":
        return "enumerate" if support[-1] <= budget.table_ceiling else "structural"
    if engine == "enumerate" and support[-1] > budget.table_ceiling and len(support) > budget.support_ceiling:
        raise BudgetExceeded(
            f"support of size {len(support)} exceeds the enumeration ceiling {budget.support_ceiling}"
        )
    return engine


class _Blocks:
    """Block table for one (alpha, support, weights) triple plus witness recovery."""

    def __init__(self, alpha: Ordinal, support: tuple[int, ...], weights: list[int], budget: Budget, engine: str):
        self.support = support
        self.k = len(support)
        self.engine = _resolve_engine(engine, support, budget)
        if self.engine == "enumerate":
            self.table = member_table(
                alpha,
                support,
                table_ceiling=budget.table_ceiling,
                scan_cap=budget.limit_scan_cap,
                max_members=budget.max_members,
            )
            self.values, self.best = enumeration_blocks(self.table, weights)
        else:
            self.alpha = alpha
            self.solver = StructuralSolver(support, weights, scan_cap=budget.limit_scan_cap)
            self.best = self.solver.best(alpha)

    def first_block(self, i: int, js: list[int]) -> tuple[tuple[int, ...], int]:
        """Least member starting at index i and ending at one of ``js`` with the tabulated value."""
        if self.engine == "enumerate":
            t = self.table
            ok = np.zeros(self.k, dtype=bool)
            ok[js] = True
            target = np.array([self.best[i][j] for j in range(self.k)], dtype=object)
            rows = np.nonzero((t.first == i) & ok[t.last])[0]
            cands = [t.sets[r] for r in rows if self.values[r] == target[t.last[r]]]
            block = min(cands)
            return block, self.support.index(block[-1])
        j = js[0]
        idx = self.solver.realize(self.alpha, i, j)
        return tuple(self.support[t] for t in idx), j


def _partition_witness(blocks: _Blocks, dp: list, power: Callable) -> list[tuple[int, ...]]:
    out = []
    i, k = 0, blocks.k
    while i < k:
        js = [j for j in range(i, k) if blocks.best[i][j] and power(blocks.best[i][j]) + dp[j + 1] == dp[i]]
        if not js:
            i += 1
            continue
        block, j = blocks.first_block(i, js)
        out.append(block)
        i = j + 1
    return out


def _noninteger_scale(count: int, tol: Fraction) -> int:
    return max(1, math.ceil(Fraction(count + 2) / tol))


def _root_interval(make_total: Callable[[int], Interval], p: Fraction, L: int, tol: Fraction, count: int) -> NormValue:
    """Enclose ``total ** (1/p) / L`` to width ``tol``; ``make_total(scale)`` encloses the total."""
    scale = _noninteger_scale(count, tol)
    while True:
        total = make_total(scale)
        root = interval_root(total, p, scale)
        lo, hi = root.lo / L, root.hi / L
        if hi - lo <= tol:
            return NormValue.interval(lo, hi)
        scale *= 4


# -- public evaluators ---------------------------------------------------------

def lp_norm(p: Exponent | str | int | Fraction, x: RationalVector, *, tolerance: Fraction = DEFAULT_BUDGET.tolerance) -> NormValue:
    p = Exponent.parse(p)
    if not x:
        return NormValue.exact(Fraction(0))
    if p.is_inf:
        return NormValue.exact(max(abs(v) for v in x.values))
    if p.is_integer:
        q = p.as_int()
        return NormValue.pth(sum((abs(v) ** q for v in x.values), Fraction(0)), q)
    _, weights, L = scaled_weights(x)

    def total(scale: int) -> Interval:
        f = interval_power_fn(p.value, scale)
        acc = Interval.point(0)
        for w in weights:
            acc = acc + f(w)
        return acc

    return _root_interval(total, p.value, L, tolerance, len(weights))


def schreier_norm(
    alpha: Ordinal | str | int,
    x: RationalVector,
    *,
    budget: Budget = DEFAULT_BUDGET,
    engine: str = "auto",
    witness: bool = True,
) -> NormValue:
    """``max`` over members ``E`` of ``sum_{i in E} |x_i|``, with the least optimal ``E``."""
    alpha = as_ordinal(alpha)
    if not x:
        return NormValue.exact(Fraction(0), witness=[] if witness else None)
    support, weights, L = scaled_weights(x)
    blocks = _Blocks(alpha, support, weights, budget, engine)
    top = max(max(row) for row in blocks.best)
    value = NormValue.exact(Fraction(top, L))
    if not witness:
        return value
    for i in range(blocks.k):
        js = [j for j in range(i, blocks.k) if blocks.best[i][j] == top]
        if js:
            E, _ = blocks.first_block(i, js)
            return value.with_witness(list(E))
    raise AssertionError("unreachable")


def baernstein_norm(
    alpha: Ordinal | str | int,
    p: Exponent | str | int | Fraction,
    x: RationalVector,
    *,
    budget: Budget = DEFAULT_BUDGET,
    engine: str = "auto",
    witness: bool = True,
) -> NormValue:
    """Supremum of ``(sum_j (sum_{i in E_j} |x_i|)^p)^(1/p)`` over successive members ``E_1 < E_2 < ...``."""
    alpha = as_ordinal(alpha)
    p = Exponent.parse(p)
    if p.is_inf:
        value = schreier_norm(alpha, x, budget=budget, engine=engine, witness=witness)
        return value.with_witness([value.witness]) if witness and value.witness else value
    if not x:
        return NormValue.exact(Fraction(0), witness=[] if witness else None)
    support, weights, L = scaled_weights(x)
    blocks = _Blocks(alpha, support, weights, budget, engine)
    if p.is_integer:
        q = p.as_int()
        power = lambda v: v**q  # noqa: E731
        dp = block_dp(blocks.best, power)
        value = NormValue.pth(Fraction(dp[0], L**q), q)
    else:
        def total(scale: int) -> Interval:
            return block_dp(blocks.best, interval_power_fn(p.value, scale), better=Interval.hull_max)[0]

        value = _root_interval(total, p.value, L, budget.tolerance, blocks.k)
        # witness: a partition optimal for the certified lower bounds
        lo_of = interval_power_fn(p.value, _noninteger_scale(blocks.k, budget.tolerance))
        power = lambda v: lo_of(v).lo  # noqa: E731
        dp = block_dp(blocks.best, power)
    if not witness:
        return value
    return value.with_witness([list(b) for b in _partition_witness(blocks, dp, power)])


# -- norm descriptors ---------------------------------------------------------

@dataclass(frozen=True)
class Norm:
    """Which norm: ``schreier:<alpha>``, ``baernstein:<alpha>:<p>`` or ``lp:<p>``."""

    kind: str
    alpha: Ordinal | None = None
    p: Exponent | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("schreier", "baernstein", "lp"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind in ("schreier", "baernstein") and self.alpha is None:
            raise ValueError(f"{self.kind} norm needs an ordinal")
        if self.kind in ("baernstein", "lp") and self.p is None:
            raise ValueError(f"{self.kind} norm needs an exponent")

    @classmethod
    def schreier(cls, alpha) -> "Norm":
        return cls("schreier", as_ordinal(alpha))

    @classmethod
    def baernstein(cls, alpha, p) -> "Norm":
        return cls("baernstein", as_ordinal(alpha), Exponent.parse(p))

    @classmethod
    def lp(cls, p) -> "Norm":
        return cls("lp", None, Exponent.parse(p))

    @classmethod
    def parse(cls, text: str) -> "Norm":
        parts = [t.strip() for t in text.split(":")]
        try:
            if parts[0] == "schreier" and len(parts) == 2:
                return cls.schreier(parts[1])
            if parts[0] == "baernstein" and len(parts) == 3:
                return cls.baernstein(parts[1], parts[2])
            if parts[0] == "lp" and len(parts) == 2:
                return cls.lp(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad norm descriptor {text!r}: {exc}") from None
        raise ValueError(f"bad norm descriptor {text!r}; use schreier:A, baernstein:A:P or lp:P")

    def __str__(self) -> str:
        if self.kind == "schreier":
            return f"schreier:{self.alpha}"
        if self.kind == "baernstein":
            return f"baernstein:{self.alpha}:{self.p}"
        return f"lp:{self.p}"

    def to_json(self) -> str:
        return str(self)

    @property
    def power(self) -> int | None:
        """Integer exponent whose powers are exact for this norm (1 for sup-type norms)."""
        if self.kind == "schreier" or self.p.is_inf:
            return 1
        return self.p.as_int() if self.p.is_integer else None

    def evaluate(self, x: RationalVector, *, budget: Budget = DEFAULT_BUDGET, witness: bool = True) -> NormValue:
        if self.kind == "schreier":
            return schreier_norm(self.alpha, x, budget=budget, witness=witness)
        if self.kind == "baernstein":
            return baernstein_norm(self.alpha, self.p, x, budget=budget, witness=witness)
        return lp_norm(self.p, x, tolerance=budget.tolerance)

    def powers_rows(
        self, support: tuple[int, ...], rows: np.ndarray, L: int, *, budget: Budget = DEFAULT_BUDGET
    ) -> tuple[int, list[Fraction]] | None:
        """Exact ``q``-th powers of the row norms (see :meth:`evaluate_rows`), or None for non-integer p."""
        q = self.power
        if q is None:
            return None
        if len(rows) == 0:
            return q, []
        if self.kind == "lp":
            if self.p.is_inf:
                return 1, [Fraction(int(max(row)), L) for row in rows]
            return q, [Fraction(sum(int(v) ** q for v in row), L**q) for row in rows]
        sup_type = self.kind == "schreier" or self.p.is_inf
        totals = BlockBatch(self.alpha, support, budget).totals(rows, None if sup_type else q)
        return q, [Fraction(t, L**q) for t in totals]

    def evaluate_rows(
        self, support: tuple[int, ...], rows: np.ndarray, L: int, *, budget: Budget = DEFAULT_BUDGET
    ) -> list[NormValue]:
        """Norms of the vectors ``sum_t rows[r, t] / L * e_{support[t]}`` (rows are non-negative ints)."""
        powered = self.powers_rows(support, rows, L, budget=budget)
        if powered is not None:
            q, values = powered
            return [NormValue.pth(v, q) for v in values]
        out = []
        for row in rows:
            x = RationalVector((s, Fraction(int(v), L)) for s, v in zip(support, row) if v)
            out.append(self.evaluate(x, budget=budget, witness=False))
        return out


@lru_cache(maxsize=4096)
def _batch_layout(alpha: Ordinal, support: tuple[int, ...], table_ceiling: int, scan_cap: int, max_members: int):
    """Member incidence sorted by (first, last) index plus group boundaries."""
    k = len(support)
    t = member_table(alpha, support, table_ceiling=table_ceiling, scan_cap=scan_cap, max_members=max_members)
    key = t.first * k + t.last
    order = np.argsort(key, kind="stable")
    skey = key[order]
    starts = np.flatnonzero(np.r_[True, skey[1:] != skey[:-1]]) if len(skey) else np.zeros(0, dtype=np.int64)
    inc = t.incidence[order].astype(np.int64)
    gkey = skey[starts]
    gi, gj = (gkey // k).tolist(), (gkey % k).tolist()
    by_start: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for i in set(gi):
        gs = [g for g in range(len(gi)) if gi[g] == i]
        by_start[i] = (np.array(gs, dtype=np.int64), np.array([gj[g] + 1 for g in gs], dtype=np.int64))
    return inc, starts, by_start


class BlockBatch:
    """Evaluate one Schreier-type norm on many weight vectors over a common support."""

    def __init__(self, alpha: Ordinal, support: tuple[int, ...], budget: Budget = DEFAULT_BUDGET) -> None:
        self.alpha = alpha
        self.support = tuple(support)
        self.k = len(self.support)
        self.budget = budget
        self.engine = _resolve_engine("auto", self.support, budget)
        if self.engine == "enumerate":
            self.inc, self.starts, self.by_start = _batch_layout(
                alpha, self.support, budget.table_ceiling, budget.limit_scan_cap, budget.max_members
            )

    def totals(self, rows: np.ndarray, p: int | None) -> list[int]:
        """Scaled p-th power of the norm per row (``p=None``: the Schreier sup)."""
        rows = np.asarray(rows)
        if self.engine == "structural":
            out = []
            for row in rows:
                w = [int(v) for v in row]
                best = StructuralSolver(self.support, w, scan_cap=self.budget.limit_scan_cap).best(self.alpha)
                if p is None:
                    out.append(max(max(r) for r in best))
                else:
                    out.append(block_dp(best, lambda v: v**p)[0])
            return out
        if rows.dtype == object:
            top = max(sum(int(v) for v in row) for row in rows)
        else:
            top = int(rows.sum(axis=1).max())
        if rows.dtype != object and top < 2**62:
            vals = self.inc @ rows.T
        else:
            vals = self.inc.astype(object) @ rows.T.astype(object)
        if p is None:
            return [int(v) for v in vals.max(axis=0)]
        grouped = np.maximum.reduceat(vals, self.starts, axis=0)
        dtype = np.int64 if top**p < 2**62 and grouped.dtype != object else object
        grouped = grouped.astype(dtype) ** p
        dp = np.zeros((self.k + 1, rows.shape[0]), dtype=dtype)
        for i in range(self.k - 1, -1, -1):
            cur = dp[i + 1]
            if i in self.by_start:
                gs, nxt = self.by_start[i]
                cur = np.maximum(cur, (grouped[gs] + dp[nxt]).max(axis=0))
            dp[i] = cur
        return [int(v) for v in dp[0]]


# -- interval-blocking composition -------------------------------------------

InnerNorm = Callable[[RationalVector], NormValue]


def composite_norm(
    inner: Norm | InnerNorm,
    outer: Norm,
    x: RationalVector,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> NormValue:
    """Sup over interval blockings of the outer norm of inner block values.

    Each piece's value is placed at the piece's least support position.  Cuts
    between support points only move that position left, which cannot raise
    a right-dominant outer norm, so cutting at support points is exhaustive.
    """
    inner_fn: InnerNorm = (lambda v: inner.evaluate(v, budget=budget, witness=False)) if isinstance(inner, Norm) else inner
    if not x:
        return NormValue.exact(Fraction(0), witness=[])
    support = x.support
    k = len(support)
    if k > budget.composite_ceiling:
        raise BudgetExceeded(f"support of size {k} exceeds the interval-partition ceiling {budget.composite_ceiling}")
    piece_value: dict[tuple[int, int], NormValue] = {}
    for a in range(k):
        for b in range(a, k):
            piece_value[a, b] = inner_fn(x.restrict(support[a:b + 1]))

    q = outer.power if outer.kind == "lp" else None
    all_exact = all(v.mode == "exact" for v in piece_value.values())
    lp_exact = q is not None and not outer.p.is_inf and all(v.exact_power(q) is not None for v in piece_value.values())
    tol = budget.tolerance

    best_key, best_val, best_cuts = None, None, None
    for cuts in itertools.product((False, True), repeat=k - 1):
        pieces, start = [], 0
        for t, cut in enumerate(cuts, start=1):
            if cut:
                pieces.append((start, t - 1))
                start = t
        pieces.append((start, k - 1))
        vals = [piece_value[pc] for pc in pieces]
        if lp_exact:
            key = sum((v.exact_power(q) for v in vals), Fraction(0))
            cand = key
        elif outer.kind == "lp" and outer.p.is_inf and all_exact:
            key = max(v.value for v in vals)
            cand = key
        elif all_exact:
            cand = outer.evaluate(
                RationalVector((support[a], v.value) for (a, _), v in zip(pieces, vals)), budget=budget, witness=False
            )
            key = cand
        else:
            encl = [v.enclosure(tol / 4) for v in vals]
            lo = outer.evaluate(RationalVector((support[a], e.lo) for (a, _), e in zip(pieces, encl)), budget=budget, witness=False)
            hi = outer.evaluate(RationalVector((support[a], e.hi) for (a, _), e in zip(pieces, encl)), budget=budget, witness=False)
            cand = Interval(lo.enclosure(tol / 4).lo, hi.enclosure(tol / 4).hi)
            key = cand
        if best_key is None:
            best_key, best_val, best_cuts = key, cand, pieces
        elif isinstance(key, Interval):
            if key.lo > best_key.lo:
                best_cuts = pieces
            best_key = best_key.hull_max(key)
            best_val = best_key
        elif isinstance(key, NormValue):
            if compare_values(key, best_key) > 0:
                best_key, best_val, best_cuts = key, cand, pieces
        elif key > best_key:
            best_key, best_val, best_cuts = key, cand, pieces

    blocks = [list(support[a:b + 1]) for a, b in best_cuts]
    if lp_exact:
        return NormValue.pth(best_val, q).with_witness(blocks)
    if isinstance(best_val, Interval):
        return NormValue.interval(best_val.lo, best_val.hi, witness=blocks)
    if isinstance(best_val, NormValue):
        return best_val.with_witness(blocks)
    return NormValue.exact(best_val, witness=blocks)


# -- domination falsifier -------------------------------------------------------

@dataclass(frozen=True)
class BlockSequence:
    blocks: tuple[RationalVector, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for n, z in enumerate(blocks):
            if not z:
                raise ValueError(f"block {n} is zero")
        for n, (z, w) in enumerate(zip(blocks, blocks[1:])):
            if z.max_supp() >= w.min_supp():
                raise ValueError(f"blocks {n} and {n + 1} are not successive")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def minima(self) -> tuple[int, ...]:
        return tuple(z.min_supp() for z in self.blocks)

    @classmethod
    def basis(cls, positions: Iterable[int]) -> "BlockSequence":
        return cls(tuple(RationalVector.basis(m) for m in positions))

    def to_json(self) -> list:
        return [z.to_json() for z in self.blocks]


def coefficient_search_set(
    n: int, *, seed: int, samples: int, exhaustive_max: int = 12, denominator: int = 12
) -> list[tuple[Fraction, ...]]:
    """{0,1}-patterns (n <= exhaustive_max), spikes, the flat vector, then seeded random rationals in [0,1]."""
    rows: list[tuple[Fraction, ...]] = []
    one, zero = Fraction(1), Fraction(0)
    if n <= exhaustive_max:
        for bits in itertools.product((0, 1), repeat=n):
            if any(bits):
                rows.append(tuple(one if b else zero for b in bits))
    rows.extend(tuple(one if t == s else zero for t in range(n)) for s in range(n))
    rows.append(tuple(one for _ in range(n)))
    rng = random.Random(seed)
    for _ in range(samples):
        row = tuple(Fraction(rng.randint(0, denominator), denominator) for _ in range(n))
        if any(row):
            rows.append(row)
    return list(dict.fromkeys(rows))


def _inverse_norm_bounds(v: NormValue, G: int) -> tuple[int, int]:
    """Integers ``lo <= G / v <= hi`` with ``hi - lo <= 1``."""
    if v.mode == "exact":
        t = G / v.value
        return math.floor(t), math.ceil(t)
    if v.mode == "pth-power":
        q = v.p
        t = Fraction(G**q) / v.power
        lo = iroot(t.numerator // t.denominator, q)
        exact = lo**q == t
        return lo, lo if exact else lo + 1
    return math.floor(G / v.hi), math.ceil(G / v.lo)


def check_domination(
    upper: BlockSequence,
    upper_norm: Norm,
    lower_positions: Sequence[int],
    lower_norm: Norm,
    C: Any,
    *,
    normalize: bool = False,
    seed: int = 0,
    samples: int | None = None,
    budget: Budget = DEFAULT_BUDGET,
    coefficients: list[tuple[Fraction, ...]] | None = None,
    refine_rounds: int = 4,
) -> CheckReport:
    """Search for ``a >= 0`` with ``||sum a_n z_n|| > C ||sum a_n e_{k_n}||``.

    With ``normalize`` the blocks are divided by their norms.  Those norms may
    be irrational; the left side is then enclosed between the norms of two
    rational vectors (the norm is monotone in each |coordinate|), refined
    until the comparison is decided or the refinement rounds run out.
    """
    with timed() as ms:
        report = _check_domination(
            upper, upper_norm, tuple(lower_positions), lower_norm, as_fraction(C),
            normalize, seed, budget.coefficient_samples if samples is None else samples, budget,
            coefficients, refine_rounds,
        )
    report.runtime_ms = ms[0]
    return report


def _check_domination(upper, upper_norm, lower_positions, lower_norm, C, normalize, seed, samples, budget, coefficients, refine_rounds):
    n = len(upper)
    if len(lower_positions) != n:
        raise ValueError("upper and lower sequences must have the same length")
    if any(a >= b for a, b in zip(lower_positions, lower_positions[1:])) or (lower_positions and lower_positions[0] < 1):
        raise ValueError("lower positions must be strictly increasing positive integers")
    if C <= 0:
        raise ValueError("the constant must be positive")
    rows = coefficients if coefficients is not None else coefficient_search_set(n, seed=seed, samples=samples)

    support = tuple(i for z in upper.blocks for i in z.support)
    block_of = np.array([b for b, z in enumerate(upper.blocks) for _ in z.coords], dtype=np.int64)
    Lx = 1
    for z in upper.blocks:
        for v in z.values:
            Lx = math.lcm(Lx, v.denominator)
    X = np.array([abs(v) * Lx for z in upper.blocks for v in z.values], dtype=object).astype(np.int64)
    D = 1
    for row in rows:
        for a in row:
            D = math.lcm(D, a.denominator)
    A = np.array([[int(a * D) for a in row] for row in rows], dtype=object)

    block_norms = [upper_norm.evaluate(z, budget=budget, witness=False) for z in upper.blocks] if normalize else None
    q1, q2 = upper_norm.power, lower_norm.power
    solver = _ExactComparison if q1 is not None and q2 is not None else _ValueComparison
    cmp = solver(upper_norm, lower_norm, C, budget)

    def lhs_weights(idx: np.ndarray, G: int):
        if normalize:
            bounds = [_inverse_norm_bounds(v, G) for v in block_norms]
            Qlo = np.array([b[0] for b in bounds], dtype=object)
            Qhi = np.array([b[1] for b in bounds], dtype=object)
        else:
            G = 1
            Qlo = Qhi = np.ones(n, dtype=object)
        L = D * G * Lx
        sub = A[idx]
        Wlo = _compact(sub[:, block_of] * Qlo[block_of] * X.astype(object))
        if Qlo is Qhi or all(Qlo == Qhi):
            return Wlo, Wlo, L
        return Wlo, _compact(sub[:, block_of] * Qhi[block_of] * X.astype(object)), L

    rhs = cmp.rhs(lower_positions, _compact(A), D)

    G = 2**12
    pending = np.arange(len(rows))
    lhs_lo: list = [None] * len(rows)
    lhs_hi: list = [None] * len(rows)
    verdict = [0] * len(rows)  # 1 violated, -1 safe, 0 undecided
    for _ in range(refine_rounds + 1):
        if len(pending) == 0:
            break
        Wlo, Whi, L = lhs_weights(pending, G)
        lo = cmp.lhs(support, Wlo, L)
        hi = lo if Whi is Wlo else cmp.lhs(support, Whi, L)
        still = []
        for t, r in enumerate(pending.tolist()):
            vlo, vhi = lo[t], hi[t]
            active = [a for a in rows[r] if a]
            if normalize and len(active) == 1:
                vlo = vhi = cmp.constant(active[0])  # homogeneity: one normalized block
            lhs_lo[r], lhs_hi[r] = vlo, vhi
            if cmp.compare(vlo, rhs[r]) == 1:
                verdict[r] = 1
            elif cmp.compare(vhi, rhs[r]) <= 0:
                verdict[r] = -1
            else:
                still.append(r)
        pending = np.array(still, dtype=np.int64)
        G = G**2

    max_ratio, arg = cmp.max_ratio(lhs_lo, lhs_hi, rhs)

    violated = [r for r in range(len(rows)) if verdict[r] == 1]
    undecided = [r for r in range(len(rows)) if verdict[r] == 0]
    status = FAIL if violated else (INFO if undecided else PASS)
    witnesses = [
        {"coefficients": list(rows[r]), "upper_at_least": cmp.value(lhs_lo[r]), "lower": cmp.value(rhs[r], lower=True)}
        for r in violated[:MAX_WITNESSES]
    ] + [
        {"undecided_coefficients": list(rows[r]), "upper_within": [cmp.value(lhs_lo[r]), cmp.value(lhs_hi[r])],
         "lower": cmp.value(rhs[r], lower=True)}
        for r in undecided[:MAX_WITNESSES]
    ]
    report = CheckReport(
        check_name="domination",
        status=status,
        parameters={
            "upper_norm": str(upper_norm),
            "lower_norm": str(lower_norm),
            "lower_positions": list(lower_positions),
            "upper_blocks": upper.to_json(),
            "C": C,
            "normalize": normalize,
            "seed": seed,
            "random_samples": samples,
        },
        witnesses=witnesses,
    )
    report.observe("verdict", "falsified" if violated else "not falsified")
    report.observe("coefficient_vectors", len(rows))
    report.observe("violations", len(violated))
    report.observe("undecided", len(undecided))
    report.observe("max_ratio", max_ratio)
    report.observe("max_ratio_coefficients", list(rows[arg]))
    report.notes.append(
        "falsifier: a pass means no tested coefficient vector violates the inequality; it is not a proof of domination"
    )
    return report


class _ValueComparison:
    """Comparisons on :class:`NormValue` objects (used for non-integer exponents)."""

    def __init__(self, upper_norm: Norm, lower_norm: Norm, C: Fraction, budget: Budget) -> None:
        self.upper, self.lower, self.C, self.budget = upper_norm, lower_norm, C, budget

    def lhs(self, support, W, L):
        return self.upper.evaluate_rows(support, W, L, budget=self.budget)

    def rhs(self, positions, A, D):
        return self.lower.evaluate_rows(positions, A, D, budget=self.budget)

    def constant(self, a: Fraction) -> NormValue:
        return NormValue.exact(a)

    def compare(self, lhs: NormValue, rhs: NormValue) -> int:
        return compare_values(lhs, rhs, self.C)

    def value(self, v: NormValue, lower: bool = False) -> NormValue:
        return v

    def max_ratio(self, lo: list, hi: list, rhs: list) -> tuple[NormValue, int]:
        tol = self.budget.tolerance
        max_lo = max_hi = None
        arg = 0
        for r in range(len(rhs)):
            rlo, rhi = ratio(lo[r], rhs[r], tol), ratio(hi[r], rhs[r], tol)
            if max_hi is None or compare_values(rhi, max_hi) == 1:
                max_hi, arg = rhi, r
            if max_lo is None or compare_values(rlo, max_lo) == 1:
                max_lo = rlo
        if max_lo == max_hi:
            return max_hi, arg
        return NormValue.interval(max_lo.enclosure(tol).lo, max_hi.enclosure(tol).hi), arg


class _ExactComparison:
    """Integer comparisons for integer exponents.

    A value is a pair ``(T, S)`` meaning ``norm ** q = T / S``; the two sides
    are compared after raising to ``Q = lcm(q_upper, q_lower)``.
    """

    def __init__(self, upper_norm: Norm, lower_norm: Norm, C: Fraction, budget: Budget) -> None:
        self.upper, self.lower, self.budget = upper_norm, lower_norm, budget
        self.q1, self.q2 = upper_norm.power, lower_norm.power
        self.Q = math.lcm(self.q1, self.q2)
        self.e1, self.e2 = self.Q // self.q1, self.Q // self.q2
        self.cn, self.cd = C.numerator ** self.Q, C.denominator ** self.Q

    def _rows(self, norm: Norm, support, W, L) -> list[tuple[int, int]]:
        q, vals = norm.powers_rows(support, W, L, budget=self.budget)
        return [(v.numerator, v.denominator) for v in vals]

    def lhs(self, support, W, L):
        return self._rows(self.upper, support, W, L)

    def rhs(self, positions, A, D):
        return self._rows(self.lower, positions, A, D)

    def constant(self, a: Fraction) -> tuple[int, int]:
        return a.numerator ** self.q1, a.denominator ** self.q1

    def _pow(self, lhs, rhs) -> tuple[int, int]:
        """``(lhs / rhs) ** Q`` as numerator, denominator."""
        return lhs[0] ** self.e1 * rhs[1] ** self.e2, lhs[1] ** self.e1 * rhs[0] ** self.e2

    def compare(self, lhs, rhs) -> int:
        num, den = self._pow(lhs, rhs)
        a, b = num * self.cd, den * self.cn
        return (a > b) - (a < b)

    def value(self, v, lower: bool = False) -> NormValue:
        return NormValue.pth(Fraction(v[0], v[1]), self.q2 if lower else self.q1)

    def max_ratio(self, lo: list, hi: list, rhs: list) -> tuple[NormValue, int]:
        best_lo = best_hi = None
        arg = 0
        for r in range(len(rhs)):
            a, b = self._pow(lo[r], rhs[r]), self._pow(hi[r], rhs[r])
            if best_hi is None or b[0] * best_hi[1] > best_hi[0] * b[1]:
                best_hi, arg = b, r
            if best_lo is None or a[0] * best_lo[1] > best_lo[0] * a[1]:
                best_lo = a
        top = NormValue.pth(Fraction(*best_hi), self.Q)
        if best_lo[0] * best_hi[1] == best_hi[0] * best_lo[1]:
            return top, arg
        tol = self.budget.tolerance
        bottom = NormValue.pth(Fraction(*best_lo), self.Q)
        return NormValue.interval(bottom.enclosure(tol).lo, top.enclosure(tol).hi), arg


def _compact(W: np.ndarray) -> np.ndarray:
    """Object int matrix to int64 when every row sum fits."""
    if W.size and max(sum(int(v) for v in row) for row in W) < 2**62:
        return W.astype(np.int64)
    return W
