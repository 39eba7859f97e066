"""
Resource bounds shared by every enumeration and search
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class Bounds:
    """Limits that turn runaway computations into explicit errors"""
    max_order: int = 1_000_000
    subgroup_scan: int = 2000
    quotient_degree: int = 10_000
    max_degree: int = 100_000
    search_budget: int = 10_000_000

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "Bounds":
        """Build bounds from the `bounds` section of a loaded config"""
        section = (config or {}).get("bounds", {}) or {}
        defaults = cls()
        return cls(
            max_order=int(section.get("max_order", defaults.max_order)),
            subgroup_scan=int(section.get("subgroup_scan", defaults.subgroup_scan)),
            quotient_degree=int(section.get("quotient_degree", defaults.quotient_degree)),
            max_degree=int(section.get("max_degree", defaults.max_degree)),
            search_budget=int(section.get("search_budget", defaults.search_budget)),
        )

    def override(self, **values: Optional[int]) -> "Bounds":
        """Return a copy with every non-None value replaced"""
        return replace(self, **{k: v for k, v in values.items() if v is not None})


# Global bounds instance
_bounds: Bounds = Bounds()


def get_bounds() -> Bounds:
    """Get the process-wide bounds"""
    return _bounds


def set_bounds(bounds: Bounds):
    """Set the process-wide bounds"""
    global _bounds
    _bounds = bounds
