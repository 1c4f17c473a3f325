"""Machine-readable check reports with canonical JSON serialisation."""
from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
INFO = "info"
_STATUSES = (PASS, FAIL, INFO)


def rational_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def jsonable(obj: Any) -> Any:
    """Convert to JSON-ready data; rationals become exact strings, never floats."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, float):
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    return str(obj)


def canonical_dumps(data: Any) -> str:
    return json.dumps(jsonable(data), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class CheckReport:
    check_name: str
    status: str
    parameters: dict[str, Any] = field(default_factory=dict)
    observed: list[tuple[str, Any]] = field(default_factory=list)
    witnesses: list[Any] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    runtime_ms: int = 0

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witnesses:
            raise ValueError("a failing report must carry at least one witness")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def observe(self, label: str, value: Any) -> None:
        self.observed.append((label, value))

    def get(self, label: str) -> Any:
        for key, value in self.observed:
            if key == label:
                return value
        raise KeyError(label)

    def canonical(self) -> dict[str, Any]:
        """Everything except wall-clock data."""
        return {
            "schema": SCHEMA_VERSION,
            "check_name": self.check_name,
            "status": self.status,
            "parameters": jsonable(self.parameters),
            "observed": [{"label": k, "value": jsonable(v)} for k, v in self.observed],
            "witnesses": jsonable(self.witnesses),
            "notes": list(self.notes),
        }

    def to_json(self) -> dict[str, Any]:
        data = self.canonical()
        data["runtime_ms"] = self.runtime_ms
        return data

    def digest(self) -> str:
        return hashlib.sha256(canonical_dumps(self.canonical()).encode()).hexdigest()


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


@contextmanager
def timed() -> Iterator[list[int]]:
    """Yield a one-element list that receives the elapsed milliseconds."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int((time.perf_counter() - start) * 1000)
