"""Slow reference implementations used to cross-check the fast paths.

Nothing here shares code with the greedy membership test or the norm
dynamic programs: membership tries every split into successive blocks, and
the norms enumerate every sequence of successive members.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from .ordinal import Ordinal, OrdinalKind, fundamental_sequence, kind


def compositions(E: tuple) -> list[list[tuple]]:
    """All ways to cut ``E`` into nonempty consecutive pieces."""
    n = len(E)
    out = []
    for cuts in itertools.product((False, True), repeat=max(n - 1, 0)):
        pieces, start = [], 0
        for i, cut in enumerate(cuts, start=1):
            if cut:
                pieces.append(E[start:i])
                start = i
        pieces.append(E[start:])
        out.append(pieces)
    return out


@lru_cache(maxsize=None)
def member_brute(alpha: Ordinal, E: tuple) -> bool:
    if not E:
        return True
    k = kind(alpha)
    if k is OrdinalKind.ZERO:
        return len(E) == 1
    if k is OrdinalKind.SUCCESSOR:
        beta = alpha.predecessor
        return any(
            len(pieces) <= E[0] and all(member_brute(beta, piece) for piece in pieces)
            for pieces in compositions(E)
        )
    return any(member_brute(fundamental_sequence(alpha, n).successor(), E) for n in range(1, E[0] + 1))


def successive_member_sequences(alpha: Ordinal, support: tuple) -> list[list[tuple]]:
    """Every finite sequence ``E_1 < E_2 < ...`` of nonempty members inside ``support``.

    Elements are scanned left to right; each is skipped, appended to the open
    block, or opens a new block.  A block is kept only if it is a member.
    """
    out: list[list[tuple]] = []

    def rec(idx: int, closed: list[tuple], current: tuple) -> None:
        if idx == len(support):
            blocks = closed + ([current] if current else [])
            out.append(blocks)
            return
        e = support[idx]
        rec(idx + 1, closed, current)
        if current and member_brute(alpha, current + (e,)):
            rec(idx + 1, closed, current + (e,))
        rec(idx + 1, closed + ([current] if current else []), (e,))

    rec(0, [], ())
    return out


def baernstein_brute_powers(alpha: Ordinal, ps: tuple[int, ...], coords: dict[int, Fraction]) -> dict[int, Fraction]:
    """Exact ``||x||^p`` for several integer ``p`` from one enumeration of block sequences."""
    support = tuple(sorted(coords))
    L = 1
    for v in coords.values():
        L = math.lcm(L, Fraction(v).denominator)
    w = {i: int(abs(Fraction(v)) * L) for i, v in coords.items()}
    best = {p: 0 for p in ps}
    for blocks in successive_member_sequences(alpha, support):
        sums = [sum(w[i] for i in B) for B in blocks]
        for p in ps:
            val = sum(s**p for s in sums)
            if val > best[p]:
                best[p] = val
    return {p: Fraction(best[p], L**p) for p in ps}


def baernstein_pth_brute(alpha: Ordinal, p: int, coords: dict[int, Fraction]) -> tuple[Fraction, list[tuple]]:
    """Exact ``||x||^p`` in the Baernstein space for integer ``p`` plus a maximiser."""
    support = tuple(sorted(coords))
    best, arg = Fraction(0), []
    for blocks in successive_member_sequences(alpha, support):
        val = sum((sum((abs(coords[i]) for i in B), Fraction(0)) ** p for B in blocks), Fraction(0))
        if val > best:
            best, arg = val, blocks
    return best, arg


def schreier_norm_brute(alpha: Ordinal, coords: dict[int, Fraction]) -> Fraction:
    support = tuple(sorted(coords))
    best = Fraction(0)
    for r in range(1, len(support) + 1):
        for E in itertools.combinations(support, r):
            if member_brute(alpha, E):
                best = max(best, sum((abs(coords[i]) for i in E), Fraction(0)))
    return best


def interval_partitions(support: tuple) -> list[list[tuple]]:
    """Partitions of a sorted support into consecutive runs."""
    return compositions(support)
