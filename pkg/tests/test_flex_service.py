"""Tests for FLEX trip-plans, assignment and rebalancing."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.append(str(Path(__file__).parent.parent))

from src.fixed.vehicles import VehicleType
from src.flex.fleet import FleetState, VehicleStatus, assignment_call, rebalancing_call
from src.flex.plans import PlanBook, Request, cumulative_wait, feasible_insertion, submit_request
from src.network.network import flex_route_table


def _request(tid, pickup, dropoff, t=0.0):
    return Request(tid, pickup, dropoff, desired_pickup_time=t, submitted_at=t)


@pytest.fixture
def routes(corridor_net):
    return flex_route_table(corridor_net, ["A", "B", "C", "D"])


@pytest.fixture
def shuttle():
    return VehicleType("shuttle", capacity=10, seats=5)


class TestRequest:
    """Test request validation."""

    def test_pickup_equals_dropoff(self):
        with pytest.raises(ValueError):
            _request("t1", "A", "A")

    def test_desired_before_submission(self):
        with pytest.raises(ValueError):
            Request("t1", "A", "B", desired_pickup_time=5.0, submitted_at=10.0)


class TestPlanInsertion:
    """Test request bundling without backtracking."""

    def test_direct_plan_follows_shortest_route(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        plan = submit_request(_request("t1", "A", "C"), book)
        assert plan.route_stops == ["A", "B", "C"]
        assert [(v.stop, v.pickups, v.dropoffs) for v in plan.visits] == [
            ("A", ["t1"], []), ("C", [], ["t1"]),
        ]

    def test_request_extends_plan_forward(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        first = submit_request(_request("t1", "A", "C"), book)
        second = submit_request(_request("t2", "B", "D"), book)
        assert second is first
        assert first.route_stops == ["A", "B", "C", "D"]
        assert [v.stop for v in first.visits] == ["A", "B", "C", "D"]
        assert first.forecast_loads() == [1, 2, 1, 0]

    def test_shared_stops_reuse_visits(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        plan = submit_request(_request("t1", "A", "C"), book)
        submit_request(_request("t2", "A", "C"), book)
        assert len(plan.visits) == 2
        assert plan.visits[0].pickups == ["t1", "t2"]

    def test_backward_request_opens_new_plan(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        first = submit_request(_request("t1", "A", "D"), book)
        second = submit_request(_request("t2", "C", "A"), book)
        assert second is not first
        assert second.route_stops == ["C", "B", "A"]
        assert len(book.plans) == 2

    def test_served_stop_is_not_reused(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        plan = submit_request(_request("t1", "A", "D"), book)
        plan.progress = 1
        assert not feasible_insertion(plan, _request("t2", "A", "C"), shuttle, routes)
        assert feasible_insertion(plan, _request("t3", "B", "C"), shuttle, routes)

    def test_capacity_overlap_opens_new_plan(self, routes):
        single = VehicleType("single", capacity=1, seats=1)
        book = PlanBook(routes, single)
        first = submit_request(_request("t1", "A", "C"), book)
        second = submit_request(_request("t2", "B", "D"), book)
        assert second is not first
        # Back-to-back trips share the vehicle without overlap
        third = submit_request(_request("t3", "C", "D"), book)
        assert third is first

    def test_assigned_plans_closed_when_disallowed(self, routes, shuttle):
        book = PlanBook(routes, shuttle, allow_assigned_insertion=False)
        first = submit_request(_request("t1", "A", "C"), book)
        first.vehicle_id = "flex_000"
        second = submit_request(_request("t2", "A", "C"), book)
        assert second is not first

    def test_assigned_plans_open_by_default(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        first = submit_request(_request("t1", "A", "C"), book)
        first.vehicle_id = "flex_000"
        assert submit_request(_request("t2", "B", "C"), book) is first

    def test_cumulative_wait(self, routes, shuttle):
        book = PlanBook(routes, shuttle)
        plan = submit_request(_request("t1", "A", "C", t=100.0), book)
        submit_request(_request("t2", "A", "C", t=150.0), book)
        assert cumulative_wait(plan, 200.0) == pytest.approx(150.0)
        assert cumulative_wait(plan, 50.0) == 0.0


class TestAssignment:
    """Test nearest-vehicle assignment of trip-plans."""

    def test_longest_waiting_plan_first(self, corridor_net, routes, shuttle):
        book = PlanBook(routes, shuttle)
        early = submit_request(_request("t1", "C", "D", t=50.0), book)
        late = submit_request(_request("t2", "B", "A", t=100.0), book)
        fleet = FleetState.from_positions({"D": 1, "A": 1}, shuttle)

        pairs = assignment_call(book.plans, fleet, 200.0, corridor_net.route_time)

        assert [(p.id, v.id) for p, v in pairs] == [(early.id, "flex_001"), (late.id, "flex_000")]
        assert early.vehicle_id == "flex_001"
        assert fleet.vehicles["flex_001"].status is VehicleStatus.SERVING
        assert fleet.vehicles["flex_001"].destination == "C"

    def test_plans_wait_without_vehicles(self, corridor_net, routes, shuttle):
        book = PlanBook(routes, shuttle)
        submit_request(_request("t1", "A", "B"), book)
        submit_request(_request("t2", "D", "C"), book)
        fleet = FleetState.from_positions({"B": 1}, shuttle)
        pairs = assignment_call(book.plans, fleet, 10.0, corridor_net.route_time)
        assert len(pairs) == 1
        assert len(book.unassigned()) == 1
        assert assignment_call(book.plans, fleet, 20.0, corridor_net.route_time) == []

    def test_vehicle_id_breaks_distance_ties(self, corridor_net, routes, shuttle):
        book = PlanBook(routes, shuttle)
        submit_request(_request("t1", "B", "C"), book)
        fleet = FleetState.from_positions({"A": 1, "C": 1}, shuttle)
        [(_, vehicle)] = assignment_call(book.plans, fleet, 0.0, corridor_net.route_time)
        assert vehicle.id == "flex_000"


class TestRebalancing:
    """Test the supply-levelling rebalancing rule."""

    def test_spread_reduced_to_one(self, corridor_net, shuttle):
        fleet = FleetState.from_positions({"A": 3}, shuttle)
        moves = rebalancing_call(fleet, ["A", "B", "C", "D"], corridor_net.route_time)
        assert [target for _, target in moves] == ["B", "C"]
        supply = fleet.supply(["A", "B", "C", "D"])
        assert max(supply.values()) - min(supply.values()) <= 1
        assert all(v.status is VehicleStatus.EN_ROUTE for v, _ in moves)

    def test_balanced_fleet_stays(self, corridor_net, shuttle):
        fleet = FleetState.from_positions({"A": 1, "B": 1, "C": 1, "D": 1}, shuttle)
        assert rebalancing_call(fleet, ["A", "B", "C", "D"], corridor_net.route_time) == []

    def test_busy_vehicles_not_moved(self, corridor_net, shuttle):
        fleet = FleetState.from_positions({"A": 3}, shuttle)
        for vehicle in fleet.vehicles.values():
            vehicle.status = VehicleStatus.SERVING
        assert rebalancing_call(fleet, ["A", "B"], corridor_net.route_time) == []


class TestInsertionProperties:
    """Randomized request streams on a corridor keep every plan feasible."""

    def test_random_streams(self, make_corridor):
        stops = ["A", "B", "C", "D", "E", "F"]
        net = make_corridor(stops)
        routes = flex_route_table(net, stops)
        rng = np.random.default_rng(17)
        for _ in range(200):
            capacity = int(rng.integers(1, 5))
            book = PlanBook(routes, VehicleType("v", capacity, capacity))
            for k in range(15):
                pickup, dropoff = rng.choice(stops, size=2, replace=False)
                submit_request(_request(f"t{k}", str(pickup), str(dropoff)), book)
            for plan in book.plans:
                route = plan.route_stops
                assert len(set(route)) == len(route)
                assert all(abs(stops.index(a) - stops.index(b)) == 1 for a, b in zip(route[:-1], route[1:]))
                assert max(plan.forecast_loads()) <= capacity
                for rid, (pickup_at, dropoff_at) in plan.spans().items():
                    assert pickup_at < dropoff_at
                    assert route[pickup_at] == plan.requests[rid].pickup
                    assert route[dropoff_at] == plan.requests[rid].dropoff
            assert sum(len(p.requests) for p in book.plans) == 15
