"""Rational interval enclosures for real powers and roots of rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def iroot(n: int, q: int) -> int:
    """floor(n ** (1/q)) for integers n >= 0, q >= 1."""
    if n < 0 or q < 1:
        raise ValueError("iroot needs n >= 0 and q >= 1")
    if n < 2 or q == 1:
        return n
    x = 1 << ((n.bit_length() + q - 1) // q)  # x >= true root
    while True:
        y = ((q - 1) * x + n // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    while x ** q > n:
        x -= 1
    while (x + 1) ** q <= n:
        x += 1
    return x


def exact_root(r: Fraction, q: int) -> Fraction | None:
    """``r ** (1/q)`` when it is rational, else None."""
    a, b = r.numerator, r.denominator
    ra, rb = iroot(a, q), iroot(b, q)
    if ra ** q == a and rb ** q == b:
        return Fraction(ra, rb)
    return None


def root_bounds(r: Fraction, q: int, scale: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= r**(1/q) <= hi`` with ``hi - lo <= 1/(den(r)*scale)``."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("negative radicand")
    exact = exact_root(r, q)
    if exact is not None:
        return exact, exact
    a, b = r.numerator, r.denominator
    # (a/b)^(1/q) = (a * b^(q-1))^(1/q) / b
    m = iroot(a * b ** (q - 1) * scale ** q, q)
    return Fraction(m, b * scale), Fraction(m + 1, b * scale)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: Fraction | int) -> "Interval":
        v = Fraction(v)
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Interval | Fraction | int") -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def scale(self, c: Fraction) -> "Interval":
        c = Fraction(c)
        if c < 0:
            raise ValueError("only non-negative scaling is supported")
        return Interval(self.lo * c, self.hi * c)

    def hull_max(self, other: "Interval") -> "Interval":
        """Enclosure of max(a, b) for a in self, b in other."""
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def to_json(self) -> dict:
        from .report import rational_str

        return {"lo": rational_str(self.lo), "hi": rational_str(self.hi)}


def power_bounds(r: Fraction, p: Fraction, scale: int) -> Interval:
    """Enclosure of ``r ** p`` for rational ``r >= 0`` and rational ``p > 0``."""
    p = Fraction(p)
    lo, hi = root_bounds(Fraction(r) ** p.numerator, p.denominator, scale)
    return Interval(lo, hi)


def interval_power(iv: Interval, p: Fraction, scale: int) -> Interval:
    """Enclosure of ``t ** p`` over ``t`` in ``iv`` (monotone for t >= 0)."""
    return Interval(power_bounds(iv.lo, p, scale).lo, power_bounds(iv.hi, p, scale).hi)


def interval_root(iv: Interval, p: Fraction, scale: int) -> Interval:
    """Enclosure of ``t ** (1/p)`` over ``t`` in ``iv``."""
    return interval_power(iv, 1 / Fraction(p), scale)
