"""Countable ordinals in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` terms with
strictly decreasing exponents.  Exponents are themselves :class:`Ordinal`
values, so the representation is recursive; the default working range is
below ``w^w`` (finite exponents only) and is enforced by the parser and the
configuration rather than by the type.
"""
from __future__ import annotations

import enum
import re
from functools import total_ordering
from typing import Iterator

from .errors import NonCanonicalOrdinal


class OrdinalKind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: tuple = ()) -> None:
        terms = tuple(terms)
        prev = None
        for term in terms:
            if len(term) != 2:
                raise NonCanonicalOrdinal(f"malformed term {term!r}")
            exp, coeff = term
            if not isinstance(exp, Ordinal):
                raise NonCanonicalOrdinal(f"exponent {exp!r} is not an Ordinal")
            if isinstance(coeff, bool) or not isinstance(coeff, int) or coeff < 1:
                raise NonCanonicalOrdinal(f"coefficient {coeff!r} must be a positive integer")
            if prev is not None and compare(prev, exp) <= 0:
                raise NonCanonicalOrdinal("exponents must be strictly decreasing")
            prev = exp
        self.terms = terms
        self._hash = hash(terms)

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exponent: "Ordinal | int", coefficient: int = 1) -> "Ordinal":
        if isinstance(exponent, int):
            exponent = cls.of(exponent)
        return cls(((exponent, coefficient),))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other: "Ordinal") -> bool:
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) < 0

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Ordinal({self})"

    def __str__(self) -> str:
        return format_ordinal(self)

    def __reduce__(self):
        return (Ordinal, (self.terms,))

    # -- structure -------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    def finite_part(self) -> int:
        """Coefficient of the ``w^0`` term (0 if absent)."""
        if self.terms and not self.terms[-1][0]:
            return self.terms[-1][1]
        return 0

    def split_finite(self) -> tuple["Ordinal", int]:
        """Write ``self = base + m`` with ``base`` zero or a limit."""
        m = self.finite_part()
        if m:
            return Ordinal(self.terms[:-1]), m
        return self, 0

    def successor(self) -> "Ordinal":
        if self.terms and not self.terms[-1][0]:
            return Ordinal(self.terms[:-1] + ((ZERO, self.terms[-1][1] + 1),))
        return Ordinal(self.terms + ((ZERO, 1),))

    def plus(self, n: int) -> "Ordinal":
        """``self + n`` for a natural number ``n``."""
        if n < 0:
            raise ValueError("n must be non-negative")
        if n == 0:
            return self
        base, m = self.split_finite()
        return Ordinal(base.terms + ((ZERO, m + n),))

    @property
    def predecessor(self) -> "Ordinal":
        if kind(self) is not OrdinalKind.SUCCESSOR:
            raise ValueError(f"{self} is not a successor ordinal")
        c = self.terms[-1][1]
        head = self.terms[:-1]
        return Ordinal(head + ((ZERO, c - 1),)) if c > 1 else Ordinal(head)

    def exponents_below(self, ceiling: "Ordinal") -> bool:
        return compare(self, ceiling) < 0


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))
OMEGA_POW_OMEGA = Ordinal(((OMEGA, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: -1, 0 or 1."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def kind(a: Ordinal) -> OrdinalKind:
    if not a.terms:
        return OrdinalKind.ZERO
    if not a.terms[-1][0]:
        return OrdinalKind.SUCCESSOR
    return OrdinalKind.LIMIT


def fundamental_sequence(lam: Ordinal, n: int) -> Ordinal:
    """The n-th term of the standard fundamental sequence of a limit ordinal.

    With ``lam = g + w^b`` (last term split off once), ``lam[n]`` is
    ``g + w^d * n`` when ``b = d + 1`` and ``g + w^(b[n])`` when ``b`` is a
    limit.
    """
    if kind(lam) is not OrdinalKind.LIMIT:
        raise ValueError(f"{lam} is not a limit ordinal")
    if n < 1:
        raise ValueError("n must be >= 1")
    exp, coeff = lam.terms[-1]
    head = lam.terms[:-1] + (((exp, coeff - 1),) if coeff > 1 else ())
    if kind(exp) is OrdinalKind.SUCCESSOR:
        return Ordinal(head + ((exp.predecessor, n),))
    return Ordinal(head + ((fundamental_sequence(exp, n), 1),))


def is_successor_chain(lam: Ordinal) -> bool:
    """True when ``lam = g + w``, so that ``lam[n] + 1 = g + n + 1``.

    For such limits the families indexed by ``lam[n] + 1`` increase with n.
    """
    return kind(lam) is OrdinalKind.LIMIT and lam.terms[-1][0] == ONE


def iter_below(bound: int, max_degree: int = 2) -> Iterator[Ordinal]:
    """All ordinals whose CNF has degree <= max_degree and coefficients < bound."""

    def rec(deg: int) -> Iterator[tuple]:
        if deg < 0:
            yield ()
            return
        for c in range(bound):
            for rest in rec(deg - 1):
                yield (((Ordinal.of(deg), c),) if c else ()) + rest

    for terms in rec(max_degree):
        yield Ordinal(terms)


# -- text syntax -----------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if not exp:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite:
            base = f"w^{exp.finite_part()}"
        else:
            base = f"w^({format_ordinal(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w|ω)|(\^)|(\*)|(\+)|(\()|(\)))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise NonCanonicalOrdinal(f"unexpected character at {pos}: {text[pos:]!r}")
        kinds = ("int", "w", "^", "*", "+", "(", ")")
        for k, g in zip(kinds, m.groups()):
            if g is not None:
                tokens.append((k, g))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, k: str) -> str:
        if self.peek() != k:
            raise NonCanonicalOrdinal(f"expected {k!r} at token {self.i}")
        tok = self.tokens[self.i][1]
        self.i += 1
        return tok

    def ordinal(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        if len(terms) == 1 and terms[0] is None:
            return ZERO
        if any(t is None for t in terms):
            raise NonCanonicalOrdinal("'0' may only appear alone")
        # Ordinal() rejects non-decreasing exponents, e.g. "w + w^2" or "w + w".
        return Ordinal(tuple(terms))

    def term(self):
        if self.peek() == "int":
            n = int(self.take("int"))
            if n == 0:
                return None
            return (ZERO, n)
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            if self.peek() == "int":
                exp = Ordinal.of(int(self.take("int")))
            elif self.peek() == "w":
                self.take("w")
                exp = OMEGA
            else:
                self.take("(")
                exp = self.ordinal()
                self.take(")")
            if not exp:
                raise NonCanonicalOrdinal("write w^0 as 1")
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            coeff = int(self.take("int"))
            if coeff < 1:
                raise NonCanonicalOrdinal("coefficients must be positive")
        return (exp, coeff)


def parse_ordinal(text: str, ceiling: Ordinal | None = OMEGA_POW_OMEGA) -> Ordinal:
    """Parse ``w^2*3 + w*2 + 5`` style literals (``w`` or ``ω`` for omega).

    Input must already be in Cantor normal form; ``w + w^2`` or ``w + w`` are
    rejected instead of being normalised.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise NonCanonicalOrdinal("empty ordinal literal")
    parser = _Parser(tokens)
    a = parser.ordinal()
    if parser.i != len(tokens):
        raise NonCanonicalOrdinal(f"trailing input in {text!r}")
    if ceiling is not None and compare(a, ceiling) >= 0:
        raise NonCanonicalOrdinal(f"{a} is not below the configured ceiling {ceiling}")
    return a


def as_ordinal(value: "Ordinal | int | str") -> Ordinal:
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int):
        return Ordinal.of(value)
    return parse_ordinal(value, ceiling=None)
