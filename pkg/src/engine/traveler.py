"""Traveler agents and their state machine."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional

import numpy as np

from src.core.exceptions import InvariantViolation
from src.fixed.boarding import QueueEntry
from src.learning.experience import RealizedLegExperience
from src.paths.alternatives import Mode, PathAlternative


class TravelerState(str, Enum):
    ARRIVED_AT_STOP = "arrived_at_stop"
    WAITING_FIX = "waiting_fix"
    WAITING_FLEX = "waiting_flex"
    ON_BOARD = "on_board"
    COMPLETED = "completed"


ALLOWED_TRANSITIONS: Dict[TravelerState, FrozenSet[TravelerState]] = {
    TravelerState.ARRIVED_AT_STOP: frozenset({
        TravelerState.WAITING_FIX, TravelerState.WAITING_FLEX, TravelerState.COMPLETED,
    }),
    TravelerState.WAITING_FIX: frozenset({TravelerState.ON_BOARD}),
    TravelerState.WAITING_FLEX: frozenset({TravelerState.ON_BOARD}),
    TravelerState.ON_BOARD: frozenset({TravelerState.ARRIVED_AT_STOP}),
    TravelerState.COMPLETED: frozenset(),
}


@dataclass
class TravelerAgent:
    """One simulated passenger within a day."""

    id: str
    origin: str
    destination: str
    category: str
    group: str
    departure: float
    rng: np.random.Generator
    paths: List[PathAlternative]
    state: TravelerState = TravelerState.ARRIVED_AT_STOP
    location: str = ""
    board_stop: Optional[str] = None
    present: bool = True
    ready_at: float = 0.0
    queue_entry: Optional[QueueEntry] = None
    experience: Optional[RealizedLegExperience] = None
    experiences: List[RealizedLegExperience] = field(default_factory=list)
    legs_ridden: List[Mode] = field(default_factory=list)
    n_denied: int = 0
    completed_at: Optional[float] = None

    def __post_init__(self):
        if not self.location:
            self.location = self.origin

    @property
    def od(self) -> str:
        return f"{self.origin}>{self.destination}"

    @property
    def path_type(self) -> str:
        return "-".join(m.value.upper() for m in self.legs_ridden) or "WALK"

    def transition(self, new_state: TravelerState):
        if new_state not in ALLOWED_TRANSITIONS[self.state]:
            raise InvariantViolation(
                f"traveler {self.id}: illegal transition {self.state.value} -> {new_state.value}"
            )
        self.state = new_state
