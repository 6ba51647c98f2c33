"""Default resource caps and the run configuration record."""

from __future__ import annotations

from dataclasses import dataclass

# Ambient width guard: operations that enumerate F_2^d refuse larger d.
MAX_WIDTH = 24

# Cap on the number of cyclic transversals an enumeration may produce.
MAX_TRANSVERSALS = 10**6

# Cap on intermediate ray counts in double-description runs.
MAX_DD_RAYS = 200_000

# Cap on the number of linear maps enumerated for relaxations.
MAX_MAPS = 2**20


@dataclass
class RunConfig:
    """Caps, seed, and output format shared by the CLI commands."""

    max_width: int = MAX_WIDTH
    max_transversals: int = MAX_TRANSVERSALS
    max_dd_rays: int = MAX_DD_RAYS
    max_maps: int = MAX_MAPS
    seed: int = 0
    output: str = "text"
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("max_width", "max_transversals", "max_dd_rays", "max_maps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output!r}")
