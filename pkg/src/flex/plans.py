"""FLEX requests, trip-plans and no-backtracking insertion."""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from src.fixed.vehicles import VehicleType
from src.network.network import Route


@dataclass(frozen=True)
class Request:
    """A FLEX trip request."""

    traveler_id: str
    pickup: str
    dropoff: str
    desired_pickup_time: float
    submitted_at: float

    def __post_init__(self):
        if self.pickup == self.dropoff:
            raise ValueError(f"request of {self.traveler_id}: pickup equals drop-off")
        if self.desired_pickup_time < self.submitted_at:
            raise ValueError(f"request of {self.traveler_id}: desired pickup before submission")


@dataclass
class Visit:
    stop: str
    route_index: int
    pickups: List[str] = field(default_factory=list)
    dropoffs: List[str] = field(default_factory=list)


@dataclass
class TripPlan:
    """Ordered stop visits along a forward route, bundling requests."""

    id: int
    route_stops: List[str]
    visits: List[Visit] = field(default_factory=list)
    requests: Dict[str, Request] = field(default_factory=dict)
    vehicle_id: Optional[str] = None
    progress: int = 0  # index into route_stops of the next stop not yet served
    picked_up: set = field(default_factory=set)
    dropped_off: set = field(default_factory=set)

    @property
    def first_stop(self) -> str:
        return self.route_stops[0]

    @property
    def is_assigned(self) -> bool:
        return self.vehicle_id is not None

    @property
    def is_complete(self) -> bool:
        return bool(self.requests) and len(self.dropped_off) == len(self.requests)

    def visit_at(self, route_index: int) -> Optional[Visit]:
        for visit in self.visits:
            if visit.route_index == route_index:
                return visit
        return None

    def position(self, stop_id: str) -> Optional[int]:
        try:
            return self.route_stops.index(stop_id)
        except ValueError:
            return None

    def spans(self) -> Dict[str, Tuple[int, int]]:
        """Pickup/drop-off route indexes per request id."""
        pickup: Dict[str, int] = {}
        dropoff: Dict[str, int] = {}
        for visit in self.visits:
            for rid in visit.pickups:
                pickup[rid] = visit.route_index
            for rid in visit.dropoffs:
                dropoff[rid] = visit.route_index
        return {rid: (pickup[rid], dropoff[rid]) for rid in self.requests}

    def forecast_loads(self) -> List[int]:
        """Forecast on-board load when leaving each route position."""
        loads = [0] * len(self.route_stops)
        for start, end in self.spans().values():
            for i in range(start, end):
                loads[i] += 1
        return loads


def cumulative_wait(plan: TripPlan, now: float) -> float:
    """Sum over the plan's requests of the time waited past the desired pickup time."""
    return float(sum(max(0.0, now - req.desired_pickup_time) for req in plan.requests.values()))


def _extension(plan: TripPlan, stops: List[str], routes: Mapping[Tuple[str, str], Route]) -> Optional[List[str]]:
    """Stops appended after the plan end to reach ``stops`` in order, or None if it revisits."""
    added: List[str] = []
    last = plan.route_stops[-1]
    for stop in stops:
        if stop == last:
            continue
        route = routes.get((last, stop))
        if route is None or not route.reachable:
            return None
        added.extend(route.stops[1:])
        last = stop
    seen = set(plan.route_stops)
    for stop in added:
        if stop in seen:
            return None
        seen.add(stop)
    return added


def _placement(plan: TripPlan, req: Request,
               routes: Mapping[Tuple[str, str], Route]) -> Optional[Tuple[int, int, List[str]]]:
    """Route indexes of pickup and drop-off plus route extension, or None if backtracking."""
    ip = plan.position(req.pickup)
    if ip is not None and ip < plan.progress:
        return None
    if ip is not None:
        iq = plan.position(req.dropoff)
        if iq is not None:
            return (ip, iq, []) if iq > ip else None
        added = _extension(plan, [req.dropoff], routes)
        if added is None:
            return None
        return ip, len(plan.route_stops) + added.index(req.dropoff), added
    if plan.position(req.dropoff) is not None:
        return None
    added = _extension(plan, [req.pickup, req.dropoff], routes)
    if added is None:
        return None
    base = len(plan.route_stops)
    return base + added.index(req.pickup), base + added.index(req.dropoff), added


def feasible_insertion(plan: TripPlan, req: Request, vtype: VehicleType,
                       routes: Mapping[Tuple[str, str], Route]) -> bool:
    """Whether a request can join the plan without backtracking or overloading.

    Args:
        plan: Existing trip-plan
        req: New request
        vtype: Vehicle type serving the plan
        routes: Pre-generated FLEX shortest routes

    Returns:
        True if both stops lie ahead on (or extend) the plan route in order
        and the forecast load stays within capacity
    """
    placement = _placement(plan, req, routes)
    if placement is None:
        return False
    ip, iq, _ = placement
    loads = plan.forecast_loads()
    for i in range(ip, min(iq, len(loads))):
        if loads[i] + 1 > vtype.capacity:
            return False
    return True


def insert_request(plan: TripPlan, req: Request, routes: Mapping[Tuple[str, str], Route]):
    placement = _placement(plan, req, routes)
    if placement is None:
        raise ValueError(f"request of {req.traveler_id} cannot be inserted in plan {plan.id}")
    ip, iq, added = placement
    plan.route_stops.extend(added)
    for index, kind in ((ip, "pickups"), (iq, "dropoffs")):
        visit = plan.visit_at(index)
        if visit is None:
            visit = Visit(plan.route_stops[index], index)
            plan.visits.append(visit)
            plan.visits.sort(key=lambda v: v.route_index)
        getattr(visit, kind).append(req.traveler_id)
    plan.requests[req.traveler_id] = req


class PlanBook:
    """All trip-plans of one day in creation order."""

    def __init__(self, routes: Mapping[Tuple[str, str], Route], vehicle_type: VehicleType,
                 allow_assigned_insertion: bool = True):
        self.routes = routes
        self.vehicle_type = vehicle_type
        self.allow_assigned_insertion = allow_assigned_insertion
        self.plans: List[TripPlan] = []
        self._next_id = 0

    def open_plans(self) -> List[TripPlan]:
        return [p for p in self.plans if not p.is_complete]

    def unassigned(self) -> List[TripPlan]:
        return [p for p in self.plans if not p.is_assigned and not p.is_complete]

    def new_plan(self, req: Request) -> TripPlan:
        route = self.routes.get((req.pickup, req.dropoff))
        if route is None or not route.reachable:
            raise ValueError(f"no FLEX route {req.pickup}->{req.dropoff}")
        plan = TripPlan(id=self._next_id, route_stops=list(route.stops))
        self._next_id += 1
        plan.visits = [
            Visit(req.pickup, 0, pickups=[req.traveler_id]),
            Visit(req.dropoff, len(plan.route_stops) - 1, dropoffs=[req.traveler_id]),
        ]
        plan.requests[req.traveler_id] = req
        self.plans.append(plan)
        return plan


def submit_request(req: Request, book: PlanBook) -> TripPlan:
    """Insert a request into the first feasible plan, or open a direct plan.

    Plans are scanned in creation order. Acceptance is unconditional.
    """
    for plan in book.open_plans():
        if plan.is_assigned and not book.allow_assigned_insertion:
            continue
        if feasible_insertion(plan, req, book.vehicle_type, book.routes):
            insert_request(plan, req, book.routes)
            return plan
    return book.new_plan(req)
