"""The unit of reasoning: one object's discrete per-time-step behaviour."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError

VERTICAL = ("top", "bottom")
HORIZONTAL = ("left", "right")
PLACEMENT_LEVELS = 3


@dataclass(frozen=True)
class BehaviourStep:
    """Discrete facts of one time-step (magnitude stays numeric, 1 decimal)."""

    time_step: int
    magnitude: float
    sector: str
    area_bucket: str
    mip_bucket: str
    placement: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if self.time_step < 1:
            raise DataError(f"time_step {self.time_step} must be >= 1")
        if self.magnitude < 0:
            raise DataError(f"negative magnitude {self.magnitude}")
        if len(self.placement) != PLACEMENT_LEVELS:
            raise DataError(
                f"placement must have {PLACEMENT_LEVELS} levels, "
                f"got {len(self.placement)}")
        for vert, horiz in self.placement:
            if vert not in VERTICAL or horiz not in HORIZONTAL:
                raise DataError(f"bad placement pair ({vert}, {horiz})")


@dataclass(frozen=True)
class ObjectBehaviour:
    """One object's behaviour across its surviving time-steps."""

    object_label: str
    clip_id: str
    steps: tuple[BehaviourStep, ...]

    def __post_init__(self) -> None:
        if not self.object_label:
            raise DataError("object_label must be nonempty")
        if not self.steps:
            raise DataError("behaviour must have at least one step")
        times = [s.time_step for s in self.steps]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DataError(f"time_steps {times} not strictly increasing")

    @property
    def key(self) -> str:
        return f"{self.clip_id}#{self.object_label}"
