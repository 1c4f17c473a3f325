"""Budgets, tolerances and seeds; loaded from YAML/JSON and overridden by CLI flags."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError
from .ordinal import OMEGA_POW_OMEGA, Ordinal, parse_ordinal


@dataclass(frozen=True)
class Budget:
    enum_ceiling: int = 20          # largest N for S_a ∩ P({1..N})
    support_ceiling: int = 25       # largest support for enumeration-based norms
    composite_ceiling: int = 20     # largest support for interval-partition search
    table_ceiling: int = 16         # positions up to this reuse a cached family table
    max_members: int = 2_000_000    # member-table rows before giving up
    entry_cap: int = 1_000_000      # rational coefficients created by one average run
    coefficient_samples: int = 64   # seeded random coefficient vectors per check
    limit_scan_cap: int = 10_000    # fundamental-sequence stages scanned per query
    probe_window: int = 1           # extensions probed by the maximality test
    tolerance: Fraction = Fraction(1, 10**12)


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Config:
    budget: Budget = field(default_factory=Budget)
    seed: int = 0
    ordinal_ceiling: Ordinal = OMEGA_POW_OMEGA

    def replace(self, **changes: Any) -> "Config":
        budget_changes = {k: v for k, v in changes.items() if k in _BUDGET_FIELDS}
        top = {k: v for k, v in changes.items() if k not in _BUDGET_FIELDS}
        cfg = dataclasses.replace(self, **top)
        if budget_changes:
            cfg = dataclasses.replace(cfg, budget=dataclasses.replace(cfg.budget, **budget_changes))
        return cfg

    def to_json(self) -> dict:
        from .report import jsonable

        data = {f.name: getattr(self.budget, f.name) for f in dataclasses.fields(Budget)}
        data["seed"] = self.seed
        data["ordinal_ceiling"] = str(self.ordinal_ceiling)
        return jsonable(data)


_BUDGET_FIELDS = {f.name for f in dataclasses.fields(Budget)}
_INT_FIELDS = _BUDGET_FIELDS - {"tolerance"}


def _positive_int(path: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{path}: expected a positive integer, got {value!r}")
    return value


def _tolerance(path: str, value: Any) -> Fraction:
    try:
        tol = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{path}: expected a number such as 1e-12 or 1/10^12, got {value!r}") from None
    if not 0 < tol < 1:
        raise ConfigError(f"{path}: must lie in (0, 1)")
    return tol


def config_from_mapping(data: dict[str, Any], base: Config | None = None) -> Config:
    base = base or Config()
    if not isinstance(data, dict):
        raise ConfigError("<root>: expected a mapping")
    changes: dict[str, Any] = {}
    flat = dict(data)
    nested = flat.pop("budget", None) or flat.pop("budgets", None) or {}
    if not isinstance(nested, dict):
        raise ConfigError("budget: expected a mapping")
    items = [(f"budget.{k}", k, v) for k, v in nested.items()] + [(k, k, v) for k, v in flat.items()]
    for path, key, value in items:
        if key in _INT_FIELDS:
            changes[key] = _positive_int(path, value)
        elif key == "tolerance":
            changes[key] = _tolerance(path, value)
        elif key == "seed":
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < 2**64:
                raise ConfigError(f"{path}: expected an unsigned 64-bit integer")
            changes[key] = value
        elif key == "ordinal_ceiling":
            try:
                changes[key] = parse_ordinal(str(value), ceiling=None)
            except ValueError as exc:
                raise ConfigError(f"{path}: {exc}") from None
        else:
            raise ConfigError(f"{path}: unknown setting")
    return base.replace(**changes)


def load_config(path: str | Path | None) -> Config:
    """Read a YAML or JSON config; a missing path yields the documented defaults."""
    if path is None:
        return Config()
    path = Path(path)
    if not path.exists():
        return Config()
    text = path.read_text()
    try:
        data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from None
    return config_from_mapping(data or {})
