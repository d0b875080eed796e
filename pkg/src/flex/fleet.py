"""FLEX fleet state, nearest-vehicle assignment and rule-based rebalancing."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from src.core.logger import get_component_logger
from src.fixed.vehicles import Cabin, VehicleType
from src.flex.plans import TripPlan, cumulative_wait


TravelTime = Callable[[str, str], float]


class VehicleStatus(str, Enum):
    ON_CALL = "on_call"
    EN_ROUTE = "en_route"
    SERVING = "serving"


@dataclass
class FlexVehicle:
    id: str
    vehicle_type: VehicleType
    stop: str
    status: VehicleStatus = VehicleStatus.ON_CALL
    destination: Optional[str] = None
    plan: Optional[TripPlan] = None
    cabin: Cabin = None
    holding: bool = False

    def __post_init__(self):
        if self.cabin is None:
            self.cabin = Cabin(self.vehicle_type)


@dataclass
class FleetState:
    """Statuses of all FLEX vehicles."""

    vehicles: Dict[str, FlexVehicle] = field(default_factory=dict)

    @classmethod
    def from_positions(cls, positions: Dict[str, int], vehicle_type: VehicleType) -> "FleetState":
        fleet = cls()
        counter = 0
        for stop_id in sorted(positions):
            for _ in range(positions[stop_id]):
                vid = f"flex_{counter:03d}"
                fleet.vehicles[vid] = FlexVehicle(vid, vehicle_type, stop_id)
                counter += 1
        return fleet

    def on_call(self) -> List[FlexVehicle]:
        return [self.vehicles[vid] for vid in sorted(self.vehicles)
                if self.vehicles[vid].status is VehicleStatus.ON_CALL]

    def supply(self, stops: Iterable[str]) -> Dict[str, int]:
        """On-call vehicles at each stop plus vehicles en route to it."""
        counts = {stop_id: 0 for stop_id in sorted(set(stops))}
        for vehicle in self.vehicles.values():
            if vehicle.status is VehicleStatus.ON_CALL and vehicle.stop in counts:
                counts[vehicle.stop] += 1
            elif vehicle.status is VehicleStatus.EN_ROUTE and vehicle.destination in counts:
                counts[vehicle.destination] += 1
        return counts


def assignment_call(plans: List[TripPlan], fleet: FleetState, now: float,
                    travel_time: TravelTime) -> List[Tuple[TripPlan, FlexVehicle]]:
    """Assign unassigned plans to the nearest on-call vehicles.

    Plans are ranked by cumulative waiting time (descending, earlier creation
    first on ties); each takes the on-call vehicle with the smallest
    free-flow time to its first stop (smaller vehicle id on ties).

    Returns:
        Assigned (plan, vehicle) pairs in assignment order
    """
    pending = sorted((p for p in plans if not p.is_assigned and not p.is_complete),
                     key=lambda p: (-cumulative_wait(p, now), p.id))
    available = fleet.on_call()
    assignments: List[Tuple[TripPlan, FlexVehicle]] = []
    for plan in pending:
        if not available:
            break
        vehicle = min(available, key=lambda v: (travel_time(v.stop, plan.first_stop), v.id))
        available.remove(vehicle)
        vehicle.status = VehicleStatus.SERVING
        vehicle.plan = plan
        vehicle.destination = plan.first_stop
        plan.vehicle_id = vehicle.id
        assignments.append((plan, vehicle))
    if assignments:
        get_component_logger("flex_dispatch").debug("assignment_call", "Plans assigned", {
            "time": now,
            "assigned": len(assignments),
            "pending": len(pending) - len(assignments),
        })
    return assignments


def rebalancing_call(fleet: FleetState, balance_stops: Iterable[str],
                     travel_time: TravelTime) -> List[Tuple[FlexVehicle, str]]:
    """Even out supply over the balance stops.

    While the supply spread exceeds one, the on-call vehicle closest to the
    lowest-supply stop, taken from a stop holding more supply, is sent there.

    Returns:
        (vehicle, target stop) moves in the order issued
    """
    supply = fleet.supply(balance_stops)
    moves: List[Tuple[FlexVehicle, str]] = []
    if not supply:
        return moves
    while max(supply.values()) - min(supply.values()) > 1:
        target = min(supply, key=lambda s: (supply[s], s))
        donors = [v for v in fleet.on_call()
                  if v.stop in supply and supply[v.stop] > supply[target] + 1]
        if not donors:
            break
        vehicle = min(donors, key=lambda v: (travel_time(v.stop, target), v.id))
        supply[vehicle.stop] -= 1
        supply[target] += 1
        vehicle.status = VehicleStatus.EN_ROUTE
        vehicle.destination = target
        moves.append((vehicle, target))
    return moves
