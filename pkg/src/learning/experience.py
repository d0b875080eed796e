"""Realized level-of-service experiences captured within a day."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

from src.paths.alternatives import Mode


class Quantity(str, Enum):
    WAIT = "wait"
    IVT = "ivt"


class Sharing(str, Enum):
    INDIVIDUAL = "individual"
    OD = "od"


def od_key(origin: str, destination: str) -> str:
    return f"{origin}>{destination}"


def experience_group(traveler_id: str, od: str, sharing: Sharing) -> str:
    """Ledger group a traveler reads from and contributes to."""
    return od if Sharing(sharing) is Sharing.OD else traveler_id


@dataclass(frozen=True)
class InVehicleInterval:
    duration: float
    load_factor: float
    seated: bool

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("in-vehicle interval duration must be >= 0")


@dataclass
class RealizedLegExperience:
    """What one traveler experienced on one transit leg.

    ``components`` are the ledger keys the experience is credited to: the
    distinct first legs of the path-set the traveler committed to.
    """

    traveler_id: str
    od: str
    category: str
    mode: Mode
    components: Tuple[str, ...]
    day: int
    nominal_wait: float = 0.0
    denied_wait: float = 0.0
    intervals: List[InVehicleInterval] = field(default_factory=list)
    anticipated_wait: float = 0.0
    anticipated_ivt: float = 0.0
    path_type: str = ""
    censored: bool = False

    def __post_init__(self):
        if self.nominal_wait < 0 or self.denied_wait < 0:
            raise ValueError(f"negative wait for {self.traveler_id}")
