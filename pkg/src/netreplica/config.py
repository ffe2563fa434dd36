"""Edit configuration and the two named presets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from typing import List, Optional


class ConfigError(ValueError):
    def __init__(self, field_name: str, msg: str):
        super().__init__(f"{field_name}: {msg}")
        self.field = field_name


@dataclass
class EditConfig:
    """Per-level edit rates plus switches for the optional editing features.

    Rates are indexed by hierarchy level (0 = finest); levels past the end of
    a list have rate 0.  ``spath_sample_size=None`` means ``min(|E|, 1000)``.
    """

    node_edit_rates: List[float] = field(default_factory=list)
    edge_edit_rates: List[float] = field(default_factory=list)
    node_growth_rates: List[float] = field(default_factory=list)
    edge_growth_rates: List[float] = field(default_factory=list)
    bfs_horizon: int = 20
    spath_sample_size: Optional[int] = None
    deferential_detachment: bool = False
    mutual_neighbor_protection: bool = False
    enforce_connectivity: bool = False
    max_density: float = 0.9
    loop_safety_factor: int = 10
    rng_seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for name in ("node_edit_rates", "edge_edit_rates"):
            for i, r in enumerate(getattr(self, name)):
                if not 0.0 <= r <= 1.0:
                    raise ConfigError(name, f"rate at level {i} must be in [0, 1], got {r}")
        for name in ("node_growth_rates", "edge_growth_rates"):
            for i, r in enumerate(getattr(self, name)):
                if not -1.0 <= r <= 1.0:
                    raise ConfigError(name, f"growth at level {i} must be in [-1, 1], got {r}")
        if int(self.bfs_horizon) != self.bfs_horizon or self.bfs_horizon < 1:
            raise ConfigError("bfs_horizon", f"must be a positive integer, got {self.bfs_horizon}")
        if self.spath_sample_size is not None and self.spath_sample_size < 1:
            raise ConfigError("spath_sample_size", "must be positive")
        if not 0.0 < self.max_density <= 1.0:
            raise ConfigError("max_density", f"must be in (0, 1], got {self.max_density}")
        if self.loop_safety_factor < 1:
            raise ConfigError("loop_safety_factor", "must be a positive integer")

    @staticmethod
    def _at(rates: List[float], level: int) -> float:
        return rates[level] if 0 <= level < len(rates) else 0.0

    def node_rate(self, level: int) -> float:
        return self._at(self.node_edit_rates, level)

    def edge_rate(self, level: int) -> float:
        return self._at(self.edge_edit_rates, level)

    def node_growth(self, level: int) -> float:
        return self._at(self.node_growth_rates, level)

    def edge_growth(self, level: int) -> float:
        return self._at(self.edge_growth_rates, level)

    def has_edits_at(self, level: int) -> bool:
        return self.node_rate(level) > 0 or self.edge_rate(level) > 0

    def has_edits_above(self, level: int) -> bool:
        deepest = max(len(self.node_edit_rates), len(self.edge_edit_rates))
        return any(self.has_edits_at(j) for j in range(level + 1, deepest))

    def scaled(self, factor: float) -> "EditConfig":
        """Same config with every edit rate multiplied by ``factor``."""
        return replace(
            self,
            node_edit_rates=[r * factor for r in self.node_edit_rates],
            edge_edit_rates=[r * factor for r in self.edge_edit_rates],
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EditConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown configuration key")
        kwargs = {}
        for k, v in data.items():
            if k.endswith("_rates"):
                if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                    raise ConfigError(k, "must be a list of numbers")
                v = [float(x) for x in v]
            elif k in ("bfs_horizon", "loop_safety_factor", "rng_seed") or (k == "spath_sample_size" and v is not None):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise ConfigError(k, "must be an integer")
            elif k in ("deferential_detachment", "mutual_neighbor_protection", "enforce_connectivity"):
                if not isinstance(v, bool):
                    raise ConfigError(k, "must be true or false")
            elif k == "max_density":
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ConfigError(k, "must be a number")
            kwargs[k] = v
        return cls(**kwargs)


def preset(name: str, **overrides) -> EditConfig:
    """``p1``: 8% then 7% on two levels.  ``p2``: 5%, 4%, 3%, 2%, 1% on five levels."""
    name = name.lower()
    if name == "p1":
        rates = [0.08, 0.07]
    elif name == "p2":
        rates = [0.05, 0.04, 0.03, 0.02, 0.01]
    elif name == "zero":
        rates = []
    else:
        raise ConfigError("preset", f"unknown preset {name!r} (expected p1, p2 or zero)")
    return EditConfig(node_edit_rates=list(rates), edge_edit_rates=list(rates), **overrides)
