"""Exact value types: finitely supported rational vectors, exponents, norm values."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .intervals import Interval, exact_root, root_bounds
from .report import rational_str


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'a/b' string")
    return Fraction(value)


class RationalVector:
    """Finitely supported vector on positions 1, 2, ... with rational entries."""

    __slots__ = ("coords", "_hash")

    def __init__(self, entries: Mapping[int, Any] | Iterable[tuple[int, Any]] = ()) -> None:
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[int, Fraction] = {}
        for pos, val in items:
            pos = int(pos)
            if pos < 1:
                raise ValueError(f"positions must be >= 1, got {pos}")
            acc[pos] = acc.get(pos, Fraction(0)) + as_fraction(val)
        self.coords: tuple[tuple[int, Fraction], ...] = tuple(
            (i, v) for i, v in sorted(acc.items()) if v != 0
        )
        self._hash = hash(self.coords)

    @classmethod
    def basis(cls, n: int, scale: Any = 1) -> "RationalVector":
        return cls({n: scale})

    @classmethod
    def ones(cls, positions: Iterable[int]) -> "RationalVector":
        return cls({i: 1 for i in positions})

    # -- JSON ----------------------------------------------------------------
    @classmethod
    def from_json(cls, data: str | dict) -> "RationalVector":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or not isinstance(data.get("coords"), list):
            raise ValueError('vector JSON must look like {"coords": [{"i": .., "num": .., "den": ..}, ...]}')
        out = []
        last = 0
        for k, entry in enumerate(data["coords"]):
            try:
                i, num, den = entry["i"], entry["num"], entry.get("den", 1)
            except (KeyError, TypeError):
                raise ValueError(f"coords[{k}]: needs keys i, num, den") from None
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, num, den)):
                raise ValueError(f"coords[{k}]: i, num, den must be integers")
            if i <= last:
                raise ValueError(f"coords[{k}]: positions must be strictly increasing and >= 1")
            if den < 1 or math.gcd(num, den) != 1:
                raise ValueError(f"coords[{k}]: den must be >= 1 and gcd(num, den) = 1")
            if num == 0:
                raise ValueError(f"coords[{k}]: zero entries are not stored")
            last = i
            out.append((i, Fraction(num, den)))
        return cls(out)

    def to_json(self) -> dict:
        return {"coords": [{"i": i, "num": v.numerator, "den": v.denominator} for i, v in self.coords]}

    # -- accessors -----------------------------------------------------------
    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.coords)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.coords)

    def min_supp(self) -> float | int:
        return self.coords[0][0] if self.coords else math.inf

    def max_supp(self) -> int:
        return self.coords[-1][0] if self.coords else 0

    def __getitem__(self, pos: int) -> Fraction:
        return dict(self.coords).get(pos, Fraction(0))

    def __len__(self) -> int:
        return len(self.coords)

    def __bool__(self) -> bool:
        return bool(self.coords)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coords)

    def l1(self) -> Fraction:
        return sum((abs(v) for _, v in self.coords), Fraction(0))

    # -- algebra -------------------------------------------------------------
    def __add__(self, other: "RationalVector") -> "RationalVector":
        return RationalVector(list(self.coords) + list(other.coords))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        return self + (-other)

    def __neg__(self) -> "RationalVector":
        return RationalVector((i, -v) for i, v in self.coords)

    def __mul__(self, c: Any) -> "RationalVector":
        c = as_fraction(c)
        return RationalVector((i, c * v) for i, v in self.coords)

    __rmul__ = __mul__

    def __abs__(self) -> "RationalVector":
        return RationalVector((i, abs(v)) for i, v in self.coords)

    def restrict(self, E: Iterable[int]) -> "RationalVector":
        keep = set(E)
        return RationalVector((i, v) for i, v in self.coords if i in keep)

    def restrict_range(self, lo: int, hi: int) -> "RationalVector":
        """Coordinates with ``lo <= i < hi``."""
        return RationalVector((i, v) for i, v in self.coords if lo <= i < hi)

    def moved(self, new_positions: Iterable[int]) -> "RationalVector":
        """Place the k-th coordinate at the k-th of ``new_positions``."""
        new_positions = list(new_positions)
        if len(new_positions) != len(self.coords):
            raise ValueError("need one new position per support element")
        return RationalVector(zip(new_positions, self.values))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalVector) and self.coords == other.coords

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {rational_str(v)}" for i, v in self.coords)
        return f"RationalVector({{{body}}})"


@dataclass(frozen=True)
class Exponent:
    """p in [1, inf]; ``value is None`` stands for infinity."""

    value: Fraction | None

    def __post_init__(self) -> None:
        if self.value is not None and self.value < 1:
            raise ValueError(f"exponent must be >= 1, got {self.value}")

    @classmethod
    def parse(cls, text: "str | int | Fraction | Exponent") -> "Exponent":
        if isinstance(text, Exponent):
            return text
        if isinstance(text, str) and text.strip().lower() in {"inf", "infinity", "∞"}:
            return cls(None)
        return cls(as_fraction(text))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def is_integer(self) -> bool:
        return self.value is not None and self.value.denominator == 1

    def as_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer exponent")
        return self.value.numerator

    def __str__(self) -> str:
        return "inf" if self.value is None else rational_str(self.value)

    def to_json(self) -> str:
        return str(self)


def _scale_for(tol: Fraction) -> int:
    return max(1, math.ceil(1 / Fraction(tol)))


@dataclass(frozen=True)
class NormValue:
    """A norm value: an exact rational, an exact p-th power, or a certified interval."""

    mode: str
    value: Fraction | None = None
    power: Fraction | None = None
    p: int | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None
    witness: Any = field(default=None, compare=False)

    @classmethod
    def exact(cls, value: Fraction, witness: Any = None) -> "NormValue":
        return cls("exact", value=Fraction(value), witness=witness)

    @classmethod
    def pth(cls, power: Fraction, p: int, witness: Any = None) -> "NormValue":
        """Value ``power ** (1/p)``; collapses to exact mode when the root is rational."""
        power = Fraction(power)
        if p == 1:
            return cls.exact(power, witness)
        root = exact_root(power, p)
        if root is not None:
            return cls("exact", value=root, witness=witness)
        return cls("pth-power", power=power, p=p, witness=witness)

    @classmethod
    def interval(cls, lo: Fraction, hi: Fraction, witness: Any = None) -> "NormValue":
        if lo == hi:
            return cls.exact(lo, witness)
        return cls("interval", lo=Fraction(lo), hi=Fraction(hi), witness=witness)

    def with_witness(self, witness: Any) -> "NormValue":
        return NormValue(self.mode, self.value, self.power, self.p, self.lo, self.hi, witness)

    @property
    def is_exact(self) -> bool:
        return self.mode != "interval"

    def exact_power(self, q: int) -> Fraction | None:
        """``value ** q`` as an exact rational if this representation allows it."""
        if self.mode == "exact":
            return self.value ** q
        if self.mode == "pth-power" and q % self.p == 0:
            return self.power ** (q // self.p)
        return None

    def enclosure(self, tol: Fraction = Fraction(1, 10**12)) -> Interval:
        if self.mode == "exact":
            return Interval.point(self.value)
        if self.mode == "pth-power":
            lo, hi = root_bounds(self.power, self.p, _scale_for(tol))
            return Interval(lo, hi)
        return Interval(self.lo, self.hi)

    def to_json(self) -> dict:
        from .report import jsonable

        if self.mode == "exact":
            data = {"mode": "exact", "value": rational_str(self.value)}
        elif self.mode == "pth-power":
            data = {"mode": "pth-power", "p": self.p, "pth_power": rational_str(self.power)}
        else:
            data = {"mode": "interval", "lo": rational_str(self.lo), "hi": rational_str(self.hi)}
        if self.witness is not None:
            data["witness"] = jsonable(self.witness)
        return data

    def __str__(self) -> str:
        if self.mode == "exact":
            return rational_str(self.value)
        if self.mode == "pth-power":
            return f"({rational_str(self.power)})^(1/{self.p})"
        return f"[{rational_str(self.lo)}, {rational_str(self.hi)}]"


def common_power(*values: NormValue) -> int | None:
    q = 1
    for v in values:
        if v.mode == "interval":
            return None
        if v.mode == "pth-power":
            q = math.lcm(q, v.p)
    return q


def compare_values(
    a: NormValue, b: NormValue, factor: Fraction = Fraction(1), *, max_digits: int = 200
) -> int | None:
    """Sign of ``a - factor * b``; exact when possible, else by interval refinement.

    Returns None when refinement to ``max_digits`` digits cannot separate them.
    """
    factor = Fraction(factor)
    q = common_power(a, b)
    if q is not None:
        lhs, rhs = a.exact_power(q), factor ** q * b.exact_power(q)
        return (lhs > rhs) - (lhs < rhs)
    digits = 15
    while digits <= max_digits:
        tol = Fraction(1, 10**digits)
        ia, ib = a.enclosure(tol), b.enclosure(tol).scale(factor)
        if ia.hi < ib.lo:
            return -1
        if ia.lo > ib.hi:
            return 1
        if ia.lo == ia.hi == ib.lo == ib.hi:
            return 0
        digits *= 2
    return None


def ratio(a: NormValue, b: NormValue, tol: Fraction = Fraction(1, 10**12)) -> NormValue:
    """``a / b`` in the best available mode."""
    q = common_power(a, b)
    if q is not None:
        return NormValue.pth(a.exact_power(q) / b.exact_power(q), q)
    ia, ib = a.enclosure(tol), b.enclosure(tol)
    if ib.lo == 0:
        raise ZeroDivisionError("denominator enclosure touches zero")
    return NormValue.interval(ia.lo / ib.hi, ia.hi / ib.lo)
