"""Repeated averages ``x_n^{a,I}`` as exact rational vectors.

The vectors at level ``a`` are produced by a lazy generator that consumes
the index stream ``I`` left to right:

* level 0 yields ``e_{i}`` for successive stream elements;
* level ``b+1`` averages the next ``s`` level-``b`` vectors, where ``s`` is
  the least unused stream element (the least support point of the first of
  them);
* a limit level ``l`` yields the first level-``l[m]+1`` vector of the
  remaining stream, where ``m`` is its least element.

Supports grow very fast (``s**k`` points at finite level ``k``), so every
run carries an entry budget and fails before allocating anything that would
exceed it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

from .config import DEFAULT_BUDGET, Budget
from .errors import BudgetExceeded
from .ordinal import Ordinal, OrdinalKind, as_ordinal, fundamental_sequence, kind
from .report import FAIL, PASS, CheckReport, timed
from .schreier import SchreierFamily, format_set
from .values import RationalVector

MAX_DEPTH = 400


@dataclass(frozen=True)
class IndexStream:
    """Strictly increasing sequence: an explicit prefix, then a rule.

    ``rule="geometric"`` continues with ``i_{n+1} = ratio * i_n``;
    ``rule="finite"`` means the prefix is all there is.
    """

    prefix: tuple[int, ...]
    rule: str = "geometric"
    ratio: int = 3
    growth3: bool = False   # require 3 i_n <= i_{n+1}
    offset: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(int(i) for i in self.prefix))
        if not self.prefix:
            raise ValueError("stream prefix must be nonempty")
        if self.prefix[0] < 1 or any(a >= b for a, b in zip(self.prefix, self.prefix[1:])):
            raise ValueError("stream prefix must be strictly increasing positive integers")
        if self.rule not in ("geometric", "finite"):
            raise ValueError(f"unknown stream rule {self.rule!r}")
        if self.rule == "geometric" and self.ratio < 2:
            raise ValueError("geometric ratio must be an integer >= 2")
        if self.growth3:
            if any(3 * a > b for a, b in zip(self.prefix, self.prefix[1:])):
                raise ValueError("prefix violates 3 i_n <= i_(n+1)")
            if self.rule == "geometric" and self.ratio < 3:
                raise ValueError("ratio must be >= 3 when 3 i_n <= i_(n+1) is required")

    @classmethod
    def geometric(cls, start: int, ratio: int = 3, *, growth3: bool = False) -> "IndexStream":
        return cls((start,), "geometric", ratio, growth3)

    @classmethod
    def from_mapping(cls, data: dict[str, Any], *, growth3: bool = False) -> "IndexStream":
        try:
            return cls(
                tuple(data["prefix"]),
                data.get("rule", "geometric"),
                int(data.get("ratio", 3)),
                bool(data.get("growth3", growth3)),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad stream description {data!r}: {exc}") from None

    def element(self, n: int) -> int:
        """The ``n``-th element, counting from 0."""
        m = self.offset + n
        if m < len(self.prefix):
            return self.prefix[m]
        if self.rule == "finite":
            raise BudgetExceeded(f"finite stream exhausted after {len(self.prefix)} elements")
        return self.prefix[-1] * self.ratio ** (m - len(self.prefix) + 1)

    def head(self, n: int) -> list[int]:
        return [self.element(t) for t in range(n)]

    def tail(self, n: int) -> "IndexStream":
        return IndexStream(self.prefix, self.rule, self.ratio, self.growth3, self.offset + n)

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "rule": self.rule, "ratio": self.ratio, "growth3": self.growth3, "offset": self.offset}


class _Run:
    """Shared cursor and entry accounting for one generation run."""

    def __init__(self, stream: IndexStream, cap: int) -> None:
        self.stream = stream
        self.pos = 0
        self.entries = 0
        self.cap = cap

    def peek(self) -> int:
        return self.stream.element(self.pos)

    def take(self) -> int:
        i = self.stream.element(self.pos)
        self.pos += 1
        return i

    def charge(self, n: int, what: str) -> None:
        if self.entries + n > self.cap:
            raise BudgetExceeded(
                f"{what} needs at least {n} more coefficient entries "
                f"({self.entries} used, cap {self.cap})"
            )
        self.entries += n


def _support_lower_bound(alpha: Ordinal, s: int, cap: int) -> int:
    """Points in the support of a level-``alpha`` vector with least element ``s``.

    Finite level ``k``: at least ``s**k`` (each of the ``s`` averaged vectors
    starts at ``>= s``).  Infinite levels: at least ``s`` (capped at ``cap+1``).
    """
    if s == 1 or not alpha:
        return 1
    if alpha.is_finite:
        k = alpha.finite_part()
        out = 1
        for _ in range(k):
            out *= s
            if out > cap:
                return cap + 1
        return out
    return s


def _level(alpha: Ordinal, run: _Run, depth: int) -> Iterator[list[tuple[int, Fraction]]]:
    if depth > MAX_DEPTH:
        raise BudgetExceeded(f"averages recursion deeper than {MAX_DEPTH} levels")
    kd = kind(alpha)
    if kd is OrdinalKind.ZERO:
        while True:
            run.charge(1, "a basis vector")
            yield [(run.take(), Fraction(1))]
    elif kd is OrdinalKind.SUCCESSOR:
        beta = alpha.predecessor
        sub = _level(beta, run, depth + 1)
        while True:
            s = run.peek()
            need = _support_lower_bound(alpha, s, run.cap)
            if run.entries + need > run.cap:
                raise BudgetExceeded(
                    f"a level-{alpha} average starting at {s} has at least {need} entries "
                    f"({run.entries} used, cap {run.cap})"
                )
            acc: list[tuple[int, Fraction]] = []
            for _ in range(s):
                acc.extend(next(sub))
            w = Fraction(1, s)
            out = [(i, c * w) for i, c in acc]
            run.charge(len(out), f"a level-{alpha} average")
            yield out
    else:
        while True:
            m = run.peek()
            stage = fundamental_sequence(alpha, m).successor()
            need = _support_lower_bound(stage, m, run.cap)
            if run.entries + need > run.cap:
                raise BudgetExceeded(
                    f"a level-{alpha} vector starting at {m} (stage {stage}) has at least {need} entries "
                    f"({run.entries} used, cap {run.cap})"
                )
            yield next(_level(stage, run, depth + 1))


@dataclass
class AveragePrefix:
    alpha: Ordinal
    stream: IndexStream
    vectors: list[RationalVector] = field(default_factory=list)
    consumed: int = 0
    entries: int = 0

    def __len__(self) -> int:
        return len(self.vectors)

    def total(self, n: int | None = None) -> RationalVector:
        """``sum_{k <= n} x_k``."""
        acc: list[tuple[int, Fraction]] = []
        for x in self.vectors[: len(self.vectors) if n is None else n]:
            acc.extend(x.coords)
        return RationalVector(acc)

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "stream": self.stream.to_json(),
            "consumed": self.consumed,
            "vectors": [x.to_json() for x in self.vectors],
        }


def check_invariants(prefix: AveragePrefix, *, scan_cap: int = DEFAULT_BUDGET.limit_scan_cap) -> None:
    """Raise AssertionError unless convexity, prefix and maximality hold."""
    family = SchreierFamily(prefix.alpha, scan_cap=scan_cap)
    used: list[int] = []
    for n, x in enumerate(prefix.vectors, start=1):
        if any(v <= 0 for v in x.values) or sum(x.values, Fraction(0)) != 1:
            raise AssertionError(f"x_{n} is not a convex combination")
        if used and x.min_supp() <= used[-1]:
            raise AssertionError(f"supports of x_{n - 1} and x_{n} are not successive")
        used.extend(x.support)
        if not family.is_maximal(x.support):
            raise AssertionError(f"supp x_{n} = {format_set(x.support)} is not maximal in S_{prefix.alpha}")
    if used != prefix.stream.head(prefix.consumed):
        raise AssertionError("the supports do not cover an initial segment of the stream")


def generate(
    alpha: Ordinal | str | int,
    stream: IndexStream,
    N: int,
    *,
    budget: Budget = DEFAULT_BUDGET,
    check: bool = True,
) -> AveragePrefix:
    """The first ``N`` repeated averages of level ``alpha`` along ``stream``."""
    alpha = as_ordinal(alpha)
    if N < 1:
        raise ValueError("N must be >= 1")
    run = _Run(stream, budget.entry_cap)
    gen = _level(alpha, run, 0)
    vectors = [RationalVector(next(gen)) for _ in range(N)]
    prefix = AveragePrefix(alpha, stream, vectors, run.pos, run.entries)
    if check:
        check_invariants(prefix, scan_cap=budget.limit_scan_cap)
    return prefix


def generate_upto(
    alpha: Ordinal | str | int, stream: IndexStream, N: int, *, budget: Budget = DEFAULT_BUDGET
) -> tuple[AveragePrefix, str | None]:
    """Largest prefix of length ``<= N`` that fits the budget, plus the reason it stopped early."""
    alpha = as_ordinal(alpha)
    reason = None
    best = AveragePrefix(alpha, stream)
    for n in range(1, N + 1):
        try:
            best = generate(alpha, stream, n, budget=budget)
        except BudgetExceeded as exc:
            reason = str(exc)
            break
    return best, reason


def mass_bound_check(
    prefix: AveragePrefix,
    N_sum: int,
    truncation: int | None = None,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> CheckReport:
    """Largest ``||E (x_1 + ... + x_N)||_1`` over members ``E``; passes when it is at most 2.

    With ``truncation`` the members are enumerated inside ``{1..truncation}``;
    without it the maximum over all members is computed exactly by the
    Schreier-norm engine (members may be shrunk to the support).
    """
    from .norms import schreier_norm

    with timed() as ms:
        if not prefix.stream.growth3:
            raise ValueError("the stream must carry the 3 i_n <= i_(n+1) requirement")
        if not 0 <= N_sum <= len(prefix):
            raise ValueError(f"N_sum must lie in 0..{len(prefix)}")
        y = prefix.total(N_sum)
        if truncation is not None:
            family = SchreierFamily(prefix.alpha, enum_ceiling=budget.enum_ceiling, scan_cap=budget.limit_scan_cap)
            coords = y.as_dict()
            best, arg = Fraction(0), ()
            for E in family.enumerate(truncation):
                mass = sum((coords.get(i, Fraction(0)) for i in E), Fraction(0))
                if mass > best:
                    best, arg = mass, E
        elif y:
            value = schreier_norm(prefix.alpha, y, budget=budget)
            best, arg = value.value, tuple(value.witness)
        else:
            best, arg = Fraction(0), ()
        ok = best <= 2
        report = CheckReport(
            check_name="averages.mass_bound",
            status=PASS if ok else FAIL,
            parameters={
                "alpha": str(prefix.alpha),
                "stream": prefix.stream.to_json(),
                "N_sum": N_sum,
                "truncation": "none" if truncation is None else truncation,
            },
            witnesses=[{"set": list(arg), "mass": best}],
        )
        report.observe("max_mass", best)
        report.observe("bound", 2)
        report.observe("support_size", len(y))
    report.runtime_ms = ms[0]
    return report
