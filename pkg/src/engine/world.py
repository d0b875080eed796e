"""Static inputs of a simulation: network, services, path sets, behavior and demand."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Tuple

import numpy as np

from src.choice.utility import ValueOfTime
from src.fixed.lines import FixLine
from src.fixed.vehicles import VehicleType
from src.learning.crowding import CrowdingCurve
from src.learning.experience import Sharing
from src.learning.ledger import PriorKey
from src.network.network import Network, Route
from src.paths.alternatives import GlobalPathSet


@dataclass(frozen=True)
class TravelerSpec:
    """A traveler to inject: identity, OD and arrival time at the origin."""

    id: str
    origin: str
    destination: str
    time: float


class DemandModel(Protocol):
    def ods(self) -> List[Tuple[str, str]]:
        ...

    def generate(self, day: int, rng: np.random.Generator) -> List[TravelerSpec]:
        ...


@dataclass(frozen=True)
class FlexSetup:
    vehicle_type: VehicleType
    fleet: Dict[str, int]
    service_area: Tuple[str, ...]
    balance_stops: Tuple[str, ...] = ()
    assignment_interval: float = 5.0
    rebalancing_interval: Optional[float] = None
    allow_assigned_insertion: bool = True

    @property
    def size(self) -> int:
        return sum(self.fleet.values())


@dataclass
class SimulationWorld:
    """Everything a replication reads but never mutates."""

    name: str
    variant: str
    net: Network
    lines: Dict[str, FixLine]
    flex: Optional[FlexSetup]
    flex_routes: Dict[Tuple[str, str], Route]
    path_set: GlobalPathSet
    priors: Dict[PriorKey, float]
    vot: ValueOfTime
    curve: CrowdingCurve
    demand: DemandModel
    sharing: Sharing = Sharing.INDIVIDUAL
    window_start: float = 0.0
    window_end: float = 10800.0
    drain: float = 7200.0
    warmup: bool = True
    walk_variability: float = 0.0
    trace_decisions: bool = False
    path_types: Dict[str, List[str]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.path_types:
            self.path_types = available_path_types(self.path_set)

    @property
    def horizon(self) -> float:
        return self.window_end + self.drain


def available_path_types(path_set: GlobalPathSet) -> Dict[str, List[str]]:
    """Path types offered per OD category."""
    types: Dict[str, set] = {}
    for origin, destination in path_set.ods():
        category = path_set.category(origin, destination)
        types.setdefault(category, set()).update(p.path_type for p in path_set.get(origin, destination))
    return {category: sorted(types[category]) for category in sorted(types)}
