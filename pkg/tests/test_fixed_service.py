"""Tests for fixed lines, dwell times, seating and FIFO boarding."""

import math
import sys
from dataclasses import fields
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent.parent))

from src.core.invariants import InvariantChecker
from src.fixed.boarding import StopQueue, VehicleTripState, process_vehicle_arrival
from src.fixed.lines import FixLine, combined_headway, dispatch_timetable, warmup_span
from src.fixed.vehicles import Cabin, VehicleType, dwell_time


def _line(line_id="L1", headway=600.0, vtype=None, stops=("A", "B", "C", "D")):
    links = tuple(f"{a}{b}" for a, b in zip(stops[:-1], stops[1:]))
    return FixLine(line_id, tuple(stops), links, vtype or VehicleType("bus", 3, 2), headway=headway)


class TestDwellTime:
    """Test the linear dwell-time model."""

    @pytest.mark.parametrize("boarding,alighting,expected", [
        (0, 0, 5.14),
        (28, 0, 102.58),
        (2, 3, 17.20),
    ])
    def test_values(self, boarding, alighting, expected):
        assert dwell_time(boarding, alighting) == pytest.approx(expected, abs=1e-9)

    def test_negative_counts(self):
        with pytest.raises(ValueError):
            dwell_time(-1, 0)


class TestCabin:
    """Test seat assignment and reseating."""

    def test_boarders_sit_while_seats_remain(self, bus):
        cabin = Cabin(bus)
        first = cabin.board("t1", 0, "A")
        second = cabin.board("t2", 0, "A")
        third = cabin.board("t3", 0, "A")
        assert first.seated and second.seated and not third.seated
        assert cabin.load_factor == pytest.approx(1.5)
        with pytest.raises(OverflowError):
            cabin.board("t4", 0, "A")

    def test_standee_takes_vacated_seat(self, bus):
        cabin = Cabin(bus)
        cabin.board("t1", 0, "A", alight_stop="B")
        cabin.board("t2", 0, "A", alight_stop="C")
        standee = cabin.board("t3", 0, "A", alight_stop="C")
        leaving = cabin.alight_at("B")
        assert [p.traveler_id for p in leaving] == ["t1"]
        cabin.reseat()
        assert standee.seated
        assert cabin.seated == 2


class TestTimetable:
    """Test headway dispatching and warm-up."""

    def test_combined_headway(self):
        lines = [_line("a", 1800), _line("b", 1800), _line("c", 450)]
        assert combined_headway(lines) == pytest.approx(300.0)

    def test_combined_headway_without_frequency(self):
        line = FixLine("x", ("A", "B"), ("AB",), VehicleType("bus", 3, 2), departures=(100.0,))
        assert math.isinf(combined_headway([line]))

    def test_headway_departures(self):
        trips = dispatch_timetable(_line(headway=600), 0, 1800)
        assert [t.departure for t in trips] == [0, 600, 1200]
        assert len({t.trip_id for t in trips}) == 3

    def test_explicit_departures(self):
        line = FixLine("x", ("A", "B"), ("AB",), VehicleType("bus", 3, 2), departures=(10.0, 500.0, 4000.0))
        assert [t.departure for t in dispatch_timetable(line, 0, 3600)] == [10.0, 500.0]

    def test_warmup_starts_before_window(self, corridor_net):
        line = _line(headway=600)
        trips = dispatch_timetable(line, 0, 1800, corridor_net, warmup=True)
        departures = [t.departure for t in trips]
        assert departures[0] <= -warmup_span(line, corridor_net) + 600
        assert all(b - a == 600 for a, b in zip(departures[:-1], departures[1:]))

    def test_base_line_groups_directions(self, bus):
        assert _line("176E", vtype=bus).base_line == "176E"
        east = FixLine("176E", ("A", "B"), ("AB",), bus, headway=600, base="176")
        west = FixLine("176W", ("B", "A"), ("BA",), bus, headway=600, base="176")
        assert east.base_line == west.base_line == "176"

    def test_invalid_lines(self, bus):
        with pytest.raises(ValueError):
            FixLine("x", ("A",), (), bus, headway=600)
        with pytest.raises(ValueError):
            FixLine("x", ("A", "B"), ("AB",), bus)
        with pytest.raises(ValueError):
            FixLine("x", ("A", "B"), ("AB",), bus, departures=(5.0, 5.0))


class TestBoarding:
    """Test FIFO boarding, denied boarding and alighting."""

    def test_trip_state_keeps_live_counters_only(self, bus):
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        assert [f.name for f in fields(trip)] == [
            "line", "trip_id", "cabin", "stop_index", "boardings", "alightings",
        ]

    def test_fifo_with_denied_boarding(self, bus):
        queue = StopQueue()
        for i in range(4):
            queue.join("A", f"t{i}", frozenset({"L1"}), now=float(i))
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        checker = InvariantChecker(enabled=True)

        outcome = process_vehicle_arrival(trip, "A", queue, 100.0, lambda e: True, lambda e: "C", checker)

        assert [e.traveler_id for e, _ in outcome.boarded] == ["t0", "t1", "t2"]
        assert [e.traveler_id for e in outcome.denied] == ["t3"]
        assert outcome.denied[0].denied_since == 100.0
        assert [e.traveler_id for e in queue.waiting("A")] == ["t3"]
        assert outcome.dwell == pytest.approx(dwell_time(3, 0))

    def test_denied_since_kept_across_vehicles(self, bus):
        queue = StopQueue()
        for i in range(4):
            queue.join("A", f"t{i}", frozenset({"L1"}), now=0.0)
        line = _line(vtype=bus)
        process_vehicle_arrival(VehicleTripState.start(line, "L1#0"), "A", queue, 50.0,
                                lambda e: True, lambda e: "B")
        second = process_vehicle_arrival(VehicleTripState.start(line, "L1#1"), "A", queue, 650.0,
                                         lambda e: True, lambda e: "B")
        entry, _ = second.boarded[0]
        assert entry.traveler_id == "t3"
        assert entry.denied_since == 50.0

    def test_irrelevant_line_skipped(self, bus):
        queue = StopQueue()
        queue.join("A", "t0", frozenset({"OTHER"}), now=0.0)
        asked = []
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        outcome = process_vehicle_arrival(trip, "A", queue, 10.0, lambda e: asked.append(e) or True,
                                          lambda e: "B")
        assert asked == []
        assert outcome.boarded == [] and outcome.denied == []

    def test_staying_traveler_not_denied(self, bus):
        queue = StopQueue()
        queue.join("A", "t0", frozenset({"L1"}), now=0.0)
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        outcome = process_vehicle_arrival(trip, "A", queue, 10.0, lambda e: False, lambda e: "B")
        assert outcome.denied == []
        assert queue.waiting("A")[0].denied_since is None

    def test_alight_at_chosen_stop_and_terminal(self, bus):
        queue = StopQueue()
        queue.join("A", "t0", frozenset({"L1"}), now=0.0)
        queue.join("A", "t1", frozenset({"L1"}), now=0.0)
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        choices = {"t0": "B", "t1": "D"}
        process_vehicle_arrival(trip, "A", queue, 0.0, lambda e: True, lambda e: choices[e.traveler_id])

        trip.stop_index = 1
        at_b = process_vehicle_arrival(trip, "B", queue, 100.0, lambda e: True, lambda e: "D")
        assert [p.traveler_id for p in at_b.alighted] == ["t0"]

        trip.stop_index = 3
        checker = InvariantChecker(enabled=True)
        at_d = process_vehicle_arrival(trip, "D", queue, 300.0, lambda e: True, lambda e: "D", checker)
        assert [p.traveler_id for p in at_d.alighted] == ["t1"]
        assert trip.boardings == trip.alightings == 2

    def test_wrong_stop_rejected(self, bus):
        trip = VehicleTripState.start(_line(vtype=bus), "L1#0")
        with pytest.raises(ValueError):
            process_vehicle_arrival(trip, "B", StopQueue(), 0.0, lambda e: True, lambda e: "C")
