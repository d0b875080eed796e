"""Within-day discrete-event simulation of FIX and FLEX supply and traveler decisions."""

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.choice.mnl import ActionAlternative, DecisionKind, DecisionModel, action_logsum
from src.choice.utility import path_utility
from src.core.exceptions import InvariantViolation
from src.core.invariants import InvariantChecker
from src.core.logger import get_component_logger
from src.engine.events import EventQueue, Phase, SimEvent
from src.engine.traveler import TravelerAgent, TravelerState
from src.engine.world import SimulationWorld
from src.fixed.boarding import QueueEntry, StopQueue, VehicleTripState, process_vehicle_arrival
from src.fixed.lines import dispatch_timetable
from src.fixed.vehicles import OnboardPassenger, dwell_time
from src.flex.fleet import FleetState, FlexVehicle, VehicleStatus, assignment_call, rebalancing_call
from src.flex.plans import PlanBook, Request, TripPlan, submit_request
from src.learning.experience import InVehicleInterval, Quantity, RealizedLegExperience, experience_group, od_key
from src.learning.ledger import ExperienceLedger
from src.network.network import sample_running_time, walk_time
from src.paths.alternatives import Mode, PathAlternative
from src.paths.path_sets import (
    alight_sets,
    awaited_lines,
    board_stay_partition,
    connection_sets,
    continuation,
    dropoff_sets,
    mode_sets,
)


STRANDED = "STRANDED"


def supply_stream(seed: int, replication: int, day: int) -> np.random.Generator:
    return np.random.default_rng([seed, replication, day, 0])


def traveler_stream(seed: int, replication: int, day: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, replication, day, 1, index])


def demand_stream(seed: int, replication: int, day: int) -> np.random.Generator:
    return np.random.default_rng([seed, replication, day, 2])


@dataclass
class ServiceStats:
    """Passenger and vehicle meters of one service type inside the demand window."""

    passenger_m: float = 0.0
    vehicle_m: float = 0.0
    seat_m: float = 0.0
    deadhead_m: float = 0.0
    rebalancing_m: float = 0.0
    boardings: int = 0
    denied_boardings: int = 0


@dataclass
class TravelerOutcome:
    traveler_id: str
    od: str
    category: str
    path_type: str
    completed: bool
    departure: float
    arrival: Optional[float]
    n_denied: int


@dataclass
class DayResult:
    day: int
    replication: int
    variant: str
    travelers: List[TravelerOutcome]
    experiences: List[RealizedLegExperience]
    services: Dict[str, ServiceStats]
    decisions: Dict[str, int] = field(default_factory=dict)
    lines: Dict[str, ServiceStats] = field(default_factory=dict)  # FIX stats per base line
    end_time: float = 0.0

    @property
    def stranded(self) -> int:
        return sum(1 for t in self.travelers if not t.completed)

    @property
    def injected(self) -> int:
        return len(self.travelers)


class DaySimulation:
    """One simulated day of one replication."""

    def __init__(self, world: SimulationWorld, ledger: ExperienceLedger, day: int, replication: int,
                 seed: int, checker: Optional[InvariantChecker] = None):
        self.world = world
        self.net = world.net
        self.ledger = ledger
        self.day = day
        self.replication = replication
        self.seed = seed
        self.checker = checker or InvariantChecker()
        self.logger = get_component_logger("engine")
        self.decisions = DecisionModel(trace=world.trace_decisions)

        self.events = EventQueue()
        self.supply_rng = supply_stream(seed, replication, day)
        self.queues = StopQueue()
        self.travelers: Dict[str, TravelerAgent] = {}
        self.experiences: List[RealizedLegExperience] = []
        self.services = {"FIX": ServiceStats(), "FLEX": ServiceStats()}
        self.line_stats: Dict[str, ServiceStats] = {
            base: ServiceStats() for base in sorted({line.base_line for line in world.lines.values()})
        }
        self._utilities: Dict[Tuple[str, str], float] = {}
        self._n_completed = 0

        self.book: Optional[PlanBook] = None
        self.fleet: Optional[FleetState] = None
        self.plan_of: Dict[str, TripPlan] = {}
        self._visit_arrival: Dict[str, float] = {}
        self._visit_alighted: Dict[str, int] = {}
        if world.flex is not None:
            self.book = PlanBook(world.flex_routes, world.flex.vehicle_type, world.flex.allow_assigned_insertion)
            self.fleet = FleetState.from_positions(world.flex.fleet, world.flex.vehicle_type)

        self._handlers = {
            "fix_arrival": self._on_fix_arrival_event,
            "flex_arrival": self._on_flex_arrival_event,
            "flex_reposition": self._on_flex_reposition,
            "at_stop": self._on_at_stop_event,
            "ready": self._on_ready_event,
            "reach_destination": self._on_reach_destination,
            "dispatch": self._on_dispatch_tick,
            "rebalance": self._on_rebalance_tick,
        }

    # ------------------------------------------------------------------
    # Setup and main loop
    # ------------------------------------------------------------------

    def _schedule_supply(self):
        world = self.world
        for line_id in sorted(world.lines):
            line = world.lines[line_id]
            for trip in dispatch_timetable(line, world.window_start, world.horizon, self.net, world.warmup):
                self.events.schedule(trip.departure, Phase.VEHICLE_ARRIVAL, "fix_arrival",
                                     VehicleTripState.start(line, trip.trip_id))
        if world.flex is not None:
            self.events.schedule(world.window_start, Phase.DISPATCH_TICK, "dispatch")
            if world.flex.rebalancing_interval:
                self.events.schedule(world.window_start, Phase.REBALANCE_TICK, "rebalance")
        self.events.schedule(world.horizon, Phase.DAY_END, "day_end")

    def _inject_demand(self, rng: np.random.Generator):
        world = self.world
        for index, spec in enumerate(world.demand.generate(self.day, rng)):
            paths = list(world.path_set.get(spec.origin, spec.destination))
            if not paths and spec.origin != spec.destination:
                raise InvariantViolation(f"traveler {spec.id}: no path alternatives for {spec.origin}->{spec.destination}")
            od = od_key(spec.origin, spec.destination)
            traveler = TravelerAgent(
                id=spec.id,
                origin=spec.origin,
                destination=spec.destination,
                category=world.path_set.category(spec.origin, spec.destination),
                group=experience_group(spec.id, od, world.sharing),
                departure=spec.time,
                rng=traveler_stream(self.seed, self.replication, self.day, index),
                paths=paths,
            )
            if traveler.id in self.travelers:
                raise InvariantViolation(f"duplicate traveler id {traveler.id}")
            self.travelers[traveler.id] = traveler
            self.events.schedule(spec.time, Phase.TRAVELER_DECISION, "at_stop", traveler.id)

    def run(self, demand_rng: np.random.Generator) -> DayResult:
        """Process events until every traveler completed or the horizon is reached."""
        start = time.time()
        self._schedule_supply()
        self._inject_demand(demand_rng)

        end_time = self.world.horizon
        while True:
            event = self.events.pop()
            if event is None or event.kind == "day_end":
                break
            self._handlers[event.kind](event)
            if self._n_completed == len(self.travelers):
                end_time = event.time
                break

        result = self._finish(end_time)
        self.logger.debug("run_day", "Day simulated", {
            "day": self.day,
            "replication": self.replication,
            "travelers": result.injected,
            "stranded": result.stranded,
            "duration_ms": round((time.time() - start) * 1000, 2),
        })
        return result

    def _finish(self, end_time: float) -> DayResult:
        outcomes: List[TravelerOutcome] = []
        injected = len(self.travelers)
        for traveler_id in sorted(self.travelers):
            traveler = self.travelers[traveler_id]
            completed = traveler.state is TravelerState.COMPLETED
            if traveler.experience is not None:
                traveler.experience.censored = True
                traveler.experiences.append(traveler.experience)
                self.experiences.append(traveler.experience)
                traveler.experience = None
            path_type = traveler.path_type if completed else STRANDED
            for exp in traveler.experiences:
                exp.path_type = path_type
            outcomes.append(TravelerOutcome(
                traveler_id=traveler.id,
                od=traveler.od,
                category=traveler.category,
                path_type=path_type,
                completed=completed,
                departure=traveler.departure,
                arrival=traveler.completed_at,
                n_denied=traveler.n_denied,
            ))

        stranded = sum(1 for o in outcomes if not o.completed)
        self.checker.check(injected == self._n_completed + stranded, "traveler_conservation", {
            "injected": injected, "completed": self._n_completed, "stranded": stranded,
        })
        if stranded:
            self.logger.warning("run_day", "Travelers stranded past the drain horizon", {
                "day": self.day,
                "replication": self.replication,
                "stranded": stranded,
            })
        return DayResult(
            day=self.day,
            replication=self.replication,
            variant=self.world.variant,
            travelers=outcomes,
            experiences=self.experiences,
            services=self.services,
            decisions={kind.value: n for kind, n in sorted(self.decisions.counts.items())},
            lines=self.line_stats,
            end_time=end_time,
        )

    # ------------------------------------------------------------------
    # Utilities and decisions
    # ------------------------------------------------------------------

    def _utility(self, traveler: TravelerAgent, path: PathAlternative) -> float:
        key = (traveler.group, path.key)
        if key not in self._utilities:
            self._utilities[key] = path_utility(path, self.ledger, traveler.group, self.world.vot)
        return self._utilities[key]

    def _logsum(self, traveler: TravelerAgent, paths: Sequence[PathAlternative]) -> float:
        return action_logsum([self._utility(traveler, p) for p in paths])

    def _choose(self, traveler: TravelerAgent, kind: DecisionKind,
                buckets: Iterable[Tuple[object, List[PathAlternative]]]) -> ActionAlternative:
        actions = [ActionAlternative(kind, label, list(paths), self._logsum(traveler, paths))
                   for label, paths in buckets if paths]
        if not actions:
            raise InvariantViolation(f"traveler {traveler.id}: empty {kind.value} path-set at {traveler.location}")
        return self.decisions.choose(traveler.id, actions, traveler.rng)

    def _anticipated(self, traveler: TravelerAgent, components: Sequence[str], quantity: Quantity) -> float:
        return float(np.mean([self.ledger.anticipate(traveler.group, c, quantity) for c in components]))

    def _new_experience(self, traveler: TravelerAgent, mode: Mode, components: Sequence[str]) -> RealizedLegExperience:
        return RealizedLegExperience(
            traveler_id=traveler.id,
            od=traveler.od,
            category=traveler.category,
            mode=mode,
            components=tuple(components),
            day=self.day,
            anticipated_wait=self._anticipated(traveler, components, Quantity.WAIT),
            anticipated_ivt=self._anticipated(traveler, components, Quantity.IVT),
        )

    # ------------------------------------------------------------------
    # Travelers
    # ------------------------------------------------------------------

    def _on_at_stop_event(self, event: SimEvent):
        self.on_traveler_at_stop(self.travelers[event.payload], event.time)

    def on_traveler_at_stop(self, traveler: TravelerAgent, now: float):
        """Connection, mode and drop-off decisions of a traveler standing at a stop."""
        self.checker.check(traveler.state is TravelerState.ARRIVED_AT_STOP, "traveler_state",
                           {"traveler": traveler.id, "state": traveler.state.value})
        if traveler.location == traveler.destination:
            self._complete(traveler, now)
            return
        if any(not p.legs for p in traveler.paths):
            link = self.net.walk_link(traveler.location, traveler.destination)
            duration = walk_time(link, self.world.vot.walk_speed, traveler.rng, self.world.walk_variability)
            self.events.schedule(now + duration, Phase.TRAVELER_DECISION, "reach_destination", traveler.id)
            return

        connection = self._choose(traveler, DecisionKind.CONNECTION, connection_sets(traveler.paths).items())
        board_stop = connection.label
        cells = mode_sets(connection.paths)
        mode_action = self._choose(traveler, DecisionKind.MODE, [(m, cells[m]) for m in (Mode.FIX, Mode.FLEX)])

        link = self.net.walk_link(traveler.location, board_stop)
        anticipated_walk = walk_time(link, self.world.vot.walk_speed)
        realized_walk = walk_time(link, self.world.vot.walk_speed, traveler.rng, self.world.walk_variability)
        traveler.board_stop = board_stop
        traveler.present = False

        if mode_action.label is Mode.FLEX:
            dropoff = self._choose(traveler, DecisionKind.DROPOFF, dropoff_sets(mode_action.paths).items())
            traveler.paths = dropoff.paths
            request = Request(traveler.id, board_stop, dropoff.label, now + anticipated_walk, now)
            plan = submit_request(request, self.book)
            self.plan_of[traveler.id] = plan
            self._check_plan(plan)
            traveler.transition(TravelerState.WAITING_FLEX)
            components = sorted({p.legs[0].key for p in dropoff.paths})
            traveler.experience = self._new_experience(traveler, Mode.FLEX, components)
        else:
            traveler.paths = mode_action.paths
            traveler.transition(TravelerState.WAITING_FIX)

        if realized_walk == 0:
            self.on_traveler_ready(traveler, now)
        else:
            self.events.schedule(now + realized_walk, Phase.TRAVELER_DECISION, "ready", traveler.id)

    def _on_ready_event(self, event: SimEvent):
        self.on_traveler_ready(self.travelers[event.payload], event.time)

    def on_traveler_ready(self, traveler: TravelerAgent, now: float):
        """Traveler reached the boarding stop: join the FIX queue or show up for the FLEX pickup."""
        traveler.present = True
        traveler.ready_at = now
        traveler.location = traveler.board_stop
        if traveler.state is TravelerState.WAITING_FIX:
            traveler.queue_entry = self.queues.join(traveler.board_stop, traveler.id,
                                                    awaited_lines(traveler.paths), now)
            return
        plan = self.plan_of[traveler.id]
        if plan.vehicle_id is None:
            return
        vehicle = self.fleet.vehicles[plan.vehicle_id]
        if vehicle.holding and vehicle.plan is plan and plan.route_stops[plan.progress] == traveler.board_stop:
            self._serve_flex_visit(vehicle, now)

    def _on_reach_destination(self, event: SimEvent):
        self._complete(self.travelers[event.payload], event.time)

    def _complete(self, traveler: TravelerAgent, now: float):
        traveler.location = traveler.destination
        traveler.transition(TravelerState.COMPLETED)
        traveler.completed_at = now
        self._n_completed += 1

    def _finish_leg(self, traveler: TravelerAgent, stop_id: str, now: float):
        traveler.experiences.append(traveler.experience)
        self.experiences.append(traveler.experience)
        traveler.experience = None
        traveler.location = stop_id
        traveler.transition(TravelerState.ARRIVED_AT_STOP)
        traveler.paths = continuation(traveler.paths, stop_id)
        self.checker.check(bool(traveler.paths) or stop_id == traveler.destination, "continuation",
                           {"traveler": traveler.id, "stop": stop_id})
        self.events.schedule(now, Phase.TRAVELER_DECISION, "at_stop", traveler.id)

    # ------------------------------------------------------------------
    # FIX service
    # ------------------------------------------------------------------

    def _on_fix_arrival_event(self, event: SimEvent):
        self.on_fix_arrival(event.payload, event.time)

    def on_fix_arrival(self, trip: VehicleTripState, now: float):
        """Alighting, board/stay and alighting decisions, FIFO boarding and departure of one FIX trip."""
        stop_id = trip.current_stop
        line_id = trip.line.id
        boarding_sets: Dict[str, List[PathAlternative]] = {}

        def wants_to_board(entry: QueueEntry) -> bool:
            traveler = self.travelers[entry.traveler_id]
            board, stay = board_stay_partition(traveler.paths, line_id)
            if not board:
                return False
            choice = self._choose(traveler, DecisionKind.BOARD, [("board", board), ("stay", stay)])
            if choice.label == "board":
                boarding_sets[traveler.id] = board
                return True
            return False

        def choose_alight(entry: QueueEntry) -> str:
            traveler = self.travelers[entry.traveler_id]
            choice = self._choose(traveler, DecisionKind.ALIGHT, alight_sets(boarding_sets[traveler.id]).items())
            traveler.paths = choice.paths
            return choice.label

        outcome = process_vehicle_arrival(trip, stop_id, self.queues, now, wants_to_board, choose_alight,
                                          self.checker)
        for passenger in outcome.alighted:
            self._alight_fix(passenger, stop_id, now)
        for entry, passenger in outcome.boarded:
            self._board_fix(entry, passenger, now)
        if self._in_window(now):
            for stats in (self.services["FIX"], self.line_stats[trip.line.base_line]):
                stats.boardings += len(outcome.boarded)
                stats.denied_boardings += len(outcome.denied)
        for entry in outcome.denied:
            self.travelers[entry.traveler_id].n_denied += 1

        if trip.at_terminal:
            return
        link = self.net.road_links[trip.next_link]
        duration = outcome.dwell + sample_running_time(link, self.supply_rng)
        cabin = trip.cabin
        load_factor = cabin.load_factor
        for passenger in cabin.passengers:
            self.travelers[passenger.traveler_id].experience.intervals.append(
                InVehicleInterval(duration, load_factor, passenger.seated))
        self._record_segment("FIX", link.length, cabin.load, cabin.vehicle_type.seats, now, trip.line.base_line)
        trip.stop_index += 1
        self.events.schedule(now + duration, Phase.VEHICLE_ARRIVAL, "fix_arrival", trip)

    def _board_fix(self, entry: QueueEntry, passenger: OnboardPassenger, now: float):
        traveler = self.travelers[entry.traveler_id]
        denied_since = entry.denied_since
        nominal = (denied_since if denied_since is not None else now) - entry.joined_at
        denied = now - denied_since if denied_since is not None else 0.0
        self.checker.check(abs(nominal + denied - (now - entry.joined_at)) < 1e-6, "wait_accounting",
                           {"traveler": traveler.id, "nominal": nominal, "denied": denied})
        components = sorted({p.legs[0].key for p in traveler.paths})
        traveler.experience = self._new_experience(traveler, Mode.FIX, components)
        traveler.experience.nominal_wait = nominal
        traveler.experience.denied_wait = denied
        traveler.queue_entry = None
        traveler.legs_ridden.append(Mode.FIX)
        traveler.transition(TravelerState.ON_BOARD)

    def _alight_fix(self, passenger: OnboardPassenger, stop_id: str, now: float):
        traveler = self.travelers[passenger.traveler_id]
        self.checker.check(passenger.alight_stop == stop_id, "alight_at_chosen_stop",
                           {"traveler": traveler.id, "chosen": passenger.alight_stop, "stop": stop_id})
        self._finish_leg(traveler, stop_id, now)

    # ------------------------------------------------------------------
    # FLEX service
    # ------------------------------------------------------------------

    def _drive(self, links: Sequence[str]) -> float:
        return float(sum(sample_running_time(self.net.road_links[link_id], self.supply_rng) for link_id in links))

    def _check_plan(self, plan: TripPlan):
        if not self.checker.enabled:
            return
        self.checker.check(len(set(plan.route_stops)) == len(plan.route_stops), "flex_no_backtracking",
                           {"plan": plan.id, "route": plan.route_stops})
        for rid, (pickup, dropoff) in plan.spans().items():
            self.checker.check(plan.progress <= pickup < dropoff or rid in plan.picked_up,
                               "flex_visit_order", {"plan": plan.id, "request": rid})
        loads = plan.forecast_loads()
        self.checker.check(max(loads, default=0) <= self.world.flex.vehicle_type.capacity,
                           "flex_forecast_capacity", {"plan": plan.id, "loads": loads})

    def _on_dispatch_tick(self, event: SimEvent):
        now = event.time
        pending = self.book.unassigned()
        if pending:
            for plan, vehicle in assignment_call(pending, self.fleet, now, self.net.route_time):
                self._start_plan(vehicle, plan, now)
        following = now + self.world.flex.assignment_interval
        if following <= self.world.horizon:
            self.events.schedule(following, Phase.DISPATCH_TICK, "dispatch")

    def _on_rebalance_tick(self, event: SimEvent):
        now = event.time
        moves = rebalancing_call(self.fleet, self.world.flex.balance_stops, self.net.route_time)
        for vehicle, target in moves:
            route = self.net.shortest_route(vehicle.stop, target)
            if self._in_window(now):
                self.services["FLEX"].rebalancing_m += self.net.route_length(route)
                self.services["FLEX"].vehicle_m += self.net.route_length(route)
            self.events.schedule(now + self._drive(route.links), Phase.VEHICLE_ARRIVAL, "flex_reposition",
                                 vehicle.id)
        if moves:
            get_component_logger("flex_dispatch").debug("rebalancing_call", "Vehicles repositioned", {
                "time": now, "moves": len(moves),
            })
        following = now + self.world.flex.rebalancing_interval
        if following <= self.world.horizon:
            self.events.schedule(following, Phase.REBALANCE_TICK, "rebalance")

    def _on_flex_reposition(self, event: SimEvent):
        vehicle = self.fleet.vehicles[event.payload]
        vehicle.stop = vehicle.destination
        vehicle.destination = None
        vehicle.status = VehicleStatus.ON_CALL

    def _start_plan(self, vehicle: FlexVehicle, plan: TripPlan, now: float):
        if vehicle.stop == plan.first_stop:
            self.on_flex_arrival(vehicle, now)
            return
        route = self.net.shortest_route(vehicle.stop, plan.first_stop)
        if self._in_window(now):
            self.services["FLEX"].deadhead_m += self.net.route_length(route)
            self.services["FLEX"].vehicle_m += self.net.route_length(route)
        self.events.schedule(now + self._drive(route.links), Phase.VEHICLE_ARRIVAL, "flex_arrival", vehicle.id)

    def _on_flex_arrival_event(self, event: SimEvent):
        self.on_flex_arrival(self.fleet.vehicles[event.payload], event.time)

    def on_flex_arrival(self, vehicle: FlexVehicle, now: float):
        """A FLEX vehicle reaches the next stop of its trip-plan route."""
        plan = vehicle.plan
        vehicle.stop = plan.route_stops[plan.progress]
        self._visit_arrival[vehicle.id] = now
        self._visit_alighted[vehicle.id] = 0
        for passenger in vehicle.cabin.alight_at(vehicle.stop):
            plan.dropped_off.add(passenger.traveler_id)
            self._visit_alighted[vehicle.id] += 1
            self._finish_leg(self.travelers[passenger.traveler_id], vehicle.stop, now)
        self._serve_flex_visit(vehicle, now)

    def _serve_flex_visit(self, vehicle: FlexVehicle, now: float):
        """Pick up the plan's travelers at the current stop, holding for those still walking."""
        plan = vehicle.plan
        index = plan.progress
        stop_id = plan.route_stops[index]
        arrived = self._visit_arrival[vehicle.id]
        visit = plan.visit_at(index)
        pickups = [rid for rid in (visit.pickups if visit else []) if rid not in plan.picked_up]
        if any(not self.travelers[rid].present for rid in pickups):
            vehicle.holding = True
            return
        vehicle.holding = False

        ready = max([arrived] + [self.travelers[rid].ready_at for rid in pickups])
        for rid in pickups:
            traveler = self.travelers[rid]
            self.checker.check(plan.vehicle_id == vehicle.id, "flex_assigned_vehicle",
                               {"traveler": rid, "vehicle": vehicle.id})
            self.checker.check(vehicle.cabin.has_room, "capacity", {"vehicle": vehicle.id, "stop": stop_id})
            boarded_at = max(arrived, traveler.ready_at)
            vehicle.cabin.board(rid, boarded_at, stop_id, alight_stop=plan.requests[rid].dropoff)
            plan.picked_up.add(rid)
            traveler.experience.nominal_wait = boarded_at - traveler.ready_at
            traveler.legs_ridden.append(Mode.FLEX)
            traveler.transition(TravelerState.ON_BOARD)
        if pickups and self._in_window(ready):
            self.services["FLEX"].boardings += len(pickups)

        n_alighted = self._visit_alighted.get(vehicle.id, 0)
        depart = ready + (dwell_time(len(pickups), n_alighted) if pickups or n_alighted else 0.0)
        plan.progress = index + 1

        if plan.progress >= len(plan.route_stops):
            self.checker.check(plan.is_complete and vehicle.cabin.load == 0, "flex_plan_complete",
                               {"plan": plan.id, "vehicle": vehicle.id})
            vehicle.plan = None
            vehicle.destination = None
            vehicle.status = VehicleStatus.ON_CALL
            return

        link = self.net.link_between(stop_id, plan.route_stops[index + 1])
        reach = depart + sample_running_time(link, self.supply_rng)
        cabin = vehicle.cabin
        for passenger in cabin.passengers:
            self.travelers[passenger.traveler_id].experience.intervals.append(InVehicleInterval(
                reach - max(arrived, passenger.boarded_at), cabin.load_factor, passenger.seated))
        cabin.reseat()
        self._record_segment("FLEX", link.length, cabin.load, cabin.vehicle_type.seats, depart)
        self.events.schedule(reach, Phase.VEHICLE_ARRIVAL, "flex_arrival", vehicle.id)

    # ------------------------------------------------------------------
    # Accounting
    # ------------------------------------------------------------------

    def _in_window(self, t: float) -> bool:
        return self.world.window_start <= t < self.world.window_end

    def _record_segment(self, service: str, length: float, load: int, seats: int, start: float,
                        base_line: Optional[str] = None):
        if not self._in_window(start):
            return
        targets = [self.services[service]]
        if base_line is not None:
            targets.append(self.line_stats[base_line])
        for stats in targets:
            stats.passenger_m += length * load
            stats.vehicle_m += length
            stats.seat_m += length * seats


def run_day(world: SimulationWorld, ledger: ExperienceLedger, day: int, replication: int, seed: int,
            checker: Optional[InvariantChecker] = None) -> DayResult:
    """Simulate one day with the ledger state carried into it.

    Args:
        world: Static scenario inputs
        ledger: Experience ledger of the replication (read only during the day)
        day: Day index (1-based)
        replication: Replication index
        seed: Base seed
        checker: Invariant checker, defaults to the configured profile

    Returns:
        Traveler outcomes, realized experiences and supply statistics
    """
    simulation = DaySimulation(world, ledger, day, replication, seed, checker)
    return simulation.run(demand_stream(seed, replication, day))
