"""Schreier families: membership, maximality, enumeration and structural audits.

Finite sets are plain tuples of strictly increasing positive integers.  The
family ``S_a`` is built from ``S_0`` (the empty set and singletons) by

* successor: unions of at most ``min E_1`` successive members of the previous
  family;
* limit ``l``: sets ``E`` lying in ``S_{l[n]+1}`` for some ``n <= min E``,
  where ``l[n]`` is the fundamental sequence from :mod:`.ordinal`.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import BudgetExceeded, NotAMember
from .ordinal import (
    Ordinal,
    OrdinalKind,
    as_ordinal,
    fundamental_sequence,
    is_successor_chain,
    kind,
)
from .report import FAIL, INFO, PASS, CheckReport, timed

FiniteSet = tuple  # tuple[int, ...], strictly increasing, elements >= 1

DEFAULT_ENUM_CEILING = 20
DEFAULT_LIMIT_SCAN_CAP = 10_000
MAX_WITNESSES = 25


def as_set(elements: Iterable[int]) -> FiniteSet:
    E = tuple(int(e) for e in elements)
    if any(e < 1 for e in E):
        raise ValueError(f"set elements must be positive integers: {E}")
    if any(a >= b for a, b in zip(E, E[1:])):
        raise ValueError(f"set elements must be strictly increasing: {E}")
    return E


_SET_RE = re.compile(r"^\s*\{\s*([0-9,\s]*)\}\s*$")


def parse_set(text: str) -> FiniteSet:
    """Parse ``{2,3,7}``; elements must already be sorted."""
    m = _SET_RE.match(text)
    if not m:
        raise ValueError(f"not a set literal: {text!r}")
    body = m.group(1).strip()
    if not body:
        return ()
    return as_set(int(tok) for tok in body.split(","))


def format_set(E: FiniteSet) -> str:
    return "{" + ",".join(map(str, E)) + "}"


def set_min(E: FiniteSet) -> float | int:
    return E[0] if E else float("inf")


def set_max(E: FiniteSet) -> int:
    return E[-1] if E else 0


def is_spread(F: FiniteSet, E: FiniteSet) -> bool:
    """True when ``F`` is a spread of ``E``."""
    return len(E) == len(F) and all(e <= f for e, f in zip(E, F))


def normalize_level(alpha: Ordinal, size: int) -> Ordinal:
    """Smallest ordinal with the same family restricted to sets of ``size`` elements.

    Write ``alpha = g + m`` with ``g`` zero or a limit.  The families
    ``S_{g+m}`` increase with ``m`` and every finite ``E`` that enters the
    chain at all enters by stage ``g + |E|`` (an induction on ``|E|`` over
    the greedy decomposition), so stages past ``g + size`` add nothing.
    """
    base, m = alpha.split_finite()
    if m > size:
        return base.plus(size)
    return alpha


@lru_cache(maxsize=None)
def _member(alpha: Ordinal, E: FiniteSet, scan_cap: int) -> bool:
    if len(E) <= 1:
        return True
    alpha = normalize_level(alpha, len(E))
    k = kind(alpha)
    if k is OrdinalKind.ZERO:
        return False
    if k is OrdinalKind.SUCCESSOR:
        beta = alpha.predecessor
        bound = E[0]
        pieces = 0
        start = 0
        while start < len(E):
            pieces += 1
            if pieces > bound:
                return False
            start += _longest_prefix(beta, E[start:], scan_cap)
        return True
    if is_successor_chain(alpha):
        # l[n] + 1 = g + n + 1 increases with n; the largest admissible n decides.
        n = min(E[0], len(E))
        return _member(fundamental_sequence(alpha, n).successor(), E, scan_cap)
    top = E[0]
    if top > scan_cap:
        raise BudgetExceeded(
            f"membership in S_{alpha} needs {top} fundamental-sequence stages (cap {scan_cap})"
        )
    return any(
        _member(fundamental_sequence(alpha, n).successor(), E, scan_cap)
        for n in range(top, 0, -1)
    )


def _longest_prefix(beta: Ordinal, E: FiniteSet, scan_cap: int) -> int:
    """Length of the longest initial segment of ``E`` lying in ``S_beta``."""
    lo, hi = 1, len(E)
    # prefixes of members are members, so membership is monotone in length
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _member(beta, E[:mid], scan_cap):
            lo = mid
        else:
            hi = mid - 1
    return lo


def greedy_decomposition(alpha: Ordinal, E: FiniteSet, scan_cap: int = DEFAULT_LIMIT_SCAN_CAP) -> list[FiniteSet]:
    """Split ``E`` greedily into longest successive ``S_alpha`` pieces."""
    alpha = as_ordinal(alpha)
    pieces = []
    start = 0
    while start < len(E):
        step = _longest_prefix(alpha, E[start:], scan_cap)
        pieces.append(E[start:start + step])
        start += step
    return pieces


def clear_cache() -> None:
    _member.cache_clear()


class SchreierFamily:
    """Handle on ``S_alpha``; membership answers are memoised per (alpha, E)."""

    def __init__(
        self,
        alpha: Ordinal | int | str,
        *,
        probe_window: int = 1,
        enum_ceiling: int = DEFAULT_ENUM_CEILING,
        scan_cap: int = DEFAULT_LIMIT_SCAN_CAP,
    ) -> None:
        if probe_window < 1:
            raise ValueError("probe_window must be >= 1")
        self.alpha = as_ordinal(alpha)
        self.probe_window = probe_window
        self.enum_ceiling = enum_ceiling
        self.scan_cap = scan_cap

    def __repr__(self) -> str:
        return f"SchreierFamily({self.alpha})"

    def __contains__(self, E: Iterable[int]) -> bool:
        return self.is_member(E)

    def is_member(self, E: Iterable[int]) -> bool:
        return _member(self.alpha, as_set(E), self.scan_cap)

    def _require_member(self, E: FiniteSet) -> None:
        if not _member(self.alpha, E, self.scan_cap):
            raise NotAMember(f"{format_set(E)} is not in S_{self.alpha}")

    def is_maximal(self, E: Iterable[int]) -> bool:
        E = as_set(E)
        self._require_member(E)
        top = set_max(E)
        return not any(
            _member(self.alpha, E + (m,), self.scan_cap)
            for m in range(top + 1, top + 1 + self.probe_window)
        )

    def maximal_extension(
        self,
        E: Iterable[int],
        start: int,
        *,
        growth: int | None = None,
        max_size: int = 100_000,
    ) -> FiniteSet:
        """Extend ``E`` greedily by the smallest admissible values ``>= start``.

        With ``growth=c`` every new element is also at least ``c`` times the
        previous one.
        """
        F = as_set(E)
        self._require_member(F)
        if start <= set_max(F):
            raise ValueError("start must exceed max E")
        while True:
            lo = max(start, set_max(F) + 1)
            if growth and F:
                lo = max(lo, growth * F[-1])
            for m in range(lo, lo + self.probe_window):
                if _member(self.alpha, F + (m,), self.scan_cap):
                    F = F + (m,)
                    break
            else:
                return F
            if len(F) > max_size:
                raise BudgetExceeded(f"maximal extension in S_{self.alpha} exceeds {max_size} elements")

    def enumerate(self, N: int) -> list[FiniteSet]:
        """Members contained in {1..N}, in lexicographic (tuple) order."""
        self._check_ceiling(N)
        out: list[FiniteSet] = []

        def dfs(E: FiniteSet) -> None:
            out.append(E)
            for m in range(set_max(E) + 1, N + 1):
                F = E + (m,)
                if _member(self.alpha, F, self.scan_cap):
                    dfs(F)

        dfs(())
        return out

    def _check_ceiling(self, N: int) -> None:
        if N < 0:
            raise ValueError("N must be non-negative")
        if N > self.enum_ceiling:
            raise BudgetExceeded(f"truncation {N} exceeds enumeration ceiling {self.enum_ceiling}")

    def audit(self, N: int) -> CheckReport:
        """Check hereditary, spreading and successor monotonicity on subsets of {1..N}.

        For limit ordinals the report also lists sets in ``S_{l[n]+1}`` that
        are missing from ``S_{l[m]}`` (n < m <= N); these are informational.
        """
        self._check_ceiling(N)
        with timed() as clock:
            report = self._audit(N)
        report.runtime_ms = clock[0]
        return report

    def _audit(self, N: int) -> CheckReport:
        a = self.alpha
        cap = self.scan_cap
        members = [E for E in all_subsets(N) if _member(a, E, cap)]
        witnesses: list[dict] = []

        hered_bad = []
        for E in members:
            for r in range(len(E)):
                F = E[:r] + E[r + 1:]
                if not _member(a, F, cap):
                    hered_bad.append({"member": E, "subset": F})
        spread_bad = []
        for E in members:
            for r in range(len(E)):
                nxt = E[r + 1] if r + 1 < len(E) else N + 1
                if E[r] + 1 < nxt:
                    G = E[:r] + (E[r] + 1,) + E[r + 1:]
                    if not _member(a, G, cap):
                        spread_bad.append({"member": E, "spread": G})
        succ = a.successor()
        mono_bad = [{"member": E} for E in members if not _member(succ, E, cap)]

        for name, bad in (("hereditary", hered_bad), ("spreading", spread_bad), ("successor_monotone", mono_bad)):
            for w in bad[:MAX_WITNESSES]:
                witnesses.append({"property": name, **w})

        nesting: list[dict] = []
        nesting_count = 0
        if kind(a) is OrdinalKind.LIMIT:
            subsets = list(all_subsets(N))
            for n, m in itertools.combinations(range(1, N + 1), 2):
                lower = fundamental_sequence(a, n).successor()
                upper = fundamental_sequence(a, m)
                for E in subsets:
                    if _member(lower, E, cap) and not _member(upper, E, cap):
                        nesting_count += 1
                        if len(nesting) < MAX_WITNESSES:
                            nesting.append({"n": n, "m": m, "set": E})

        failed = bool(hered_bad or spread_bad or mono_bad)
        report = CheckReport(
            check_name="schreier.audit",
            status=FAIL if failed else PASS,
            parameters={"alpha": str(a), "N": N},
            witnesses=witnesses,
        )
        report.observe("members", len(members))
        report.observe("hereditary", PASS if not hered_bad else FAIL)
        report.observe("spreading", PASS if not spread_bad else FAIL)
        report.observe("successor_monotone", PASS if not mono_bad else FAIL)
        report.observe("hereditary_violations", len(hered_bad))
        report.observe("spreading_violations", len(spread_bad))
        report.observe("successor_monotone_violations", len(mono_bad))
        if kind(a) is OrdinalKind.LIMIT:
            report.observe("nesting", INFO)
            report.observe("nesting_findings", nesting_count)
            report.observe("nesting_examples", nesting)
            report.notes.append(
                "nesting findings compare S_{l[n]+1} with S_{l[m]} under the standard "
                "fundamental sequence; they are informational, not failures"
            )
        report.notes.append(
            "hereditary and spreading are checked through one-element deletions and "
            "unit shifts, which generate all subsets and spreads"
        )
        return report


def all_subsets(N: int) -> Iterator[FiniteSet]:
    """Every subset of {1..N} as a sorted tuple (2^N of them)."""
    ground = range(1, N + 1)
    for r in range(N + 1):
        yield from itertools.combinations(ground, r)


def maximal_branch_ends(family: SchreierFamily, N: int) -> list[FiniteSet]:
    """Nonempty members of the truncation with no one-point extension inside {1..N}."""
    members = family.enumerate(N)
    ends = []
    for E in members:
        if not E:
            continue
        if not any(_member(family.alpha, E + (m,), family.scan_cap) for m in range(E[-1] + 1, N + 1)):
            ends.append(E)
    return ends


def iter_spreads(E: FiniteSet, N: int) -> Iterator[FiniteSet]:
    """Every spread ``G`` of ``E`` (``g_k >= e_k``, increasing) with ``max G <= N``, ``E`` first."""
    E = as_set(E)

    def rec(k: int, prev: int) -> Iterator[tuple[int, ...]]:
        if k == len(E):
            yield ()
            return
        # leave room for the remaining len(E) - k - 1 elements
        for g in range(max(E[k], prev + 1), N - (len(E) - k - 1) + 1):
            for rest in rec(k + 1, g):
                yield (g,) + rest

    yield from rec(0, 0)
