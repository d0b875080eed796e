"""Tests for the event queue, traveler states and simulated days."""

import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

sys.path.append(str(Path(__file__).parent.parent))

from src.core.exceptions import InvariantViolation
from src.core.invariants import InvariantChecker
from src.engine.events import EventQueue, Phase
from src.engine.runner import run_replication
from src.engine.simulation import STRANDED, run_day
from src.engine.traveler import TravelerAgent, TravelerState
from src.learning.experience import Quantity
from src.learning.ledger import ExperienceLedger, collect_day
from src.paths.alternatives import Mode
from src.scenario.demand import CompositeDemand
from src.scenario.kpis import compute_kpis, mode_split_rows
from src.scenario.loader import build_world, validate_document


SEED = 20240101


def _day(world, day=1, replication=0, seed=SEED, ledger=None):
    ledger = ledger if ledger is not None else ExperienceLedger(world.priors)
    return run_day(world, ledger, day, replication, seed, InvariantChecker(enabled=True))


@pytest.fixture(scope="module")
def toy_day(toy_world):
    return _day(toy_world)


@pytest.fixture(scope="module")
def fix_only_world(toy_config):
    """Toy network without FLEX and a five-seat bus, so travelers get denied boarding."""
    data = toy_config.model_dump(by_alias=True, exclude={"variants"}, exclude_none=True)
    data.pop("flex")
    data["vehicle_types"][0].update(capacity=5, seats=5)
    return build_world(validate_document(data, "fix-only"))


class TestEventQueue:
    """Test deterministic event ordering."""

    def test_time_phase_sequence_order(self):
        queue = EventQueue()
        queue.schedule(10, Phase.DAY_END, "end")
        queue.schedule(10, Phase.VEHICLE_ARRIVAL, "first")
        queue.schedule(5, Phase.DISPATCH_TICK, "early")
        queue.schedule(10, Phase.TRAVELER_DECISION, "decide")
        queue.schedule(10, Phase.VEHICLE_ARRIVAL, "second")
        kinds = [queue.pop().kind for _ in range(5)]
        assert kinds == ["early", "first", "second", "decide", "end"]
        assert queue.pop() is None

    def test_no_scheduling_into_the_past(self):
        queue = EventQueue()
        queue.schedule(5, Phase.VEHICLE_ARRIVAL, "a")
        queue.pop()
        queue.schedule(5, Phase.TRAVELER_DECISION, "same time is fine")
        with pytest.raises(ValueError):
            queue.schedule(4.5, Phase.VEHICLE_ARRIVAL, "late")


class TestTravelerAgent:
    """Test the traveler state machine."""

    def test_legal_path(self):
        agent = TravelerAgent("t1", "A", "B", "ALL", "t1", 0.0, np.random.default_rng(0), [])
        assert agent.location == "A"
        for state in (TravelerState.WAITING_FIX, TravelerState.ON_BOARD, TravelerState.ARRIVED_AT_STOP,
                      TravelerState.COMPLETED):
            agent.transition(state)
        assert agent.state is TravelerState.COMPLETED

    def test_illegal_transition(self):
        agent = TravelerAgent("t1", "A", "B", "ALL", "t1", 0.0, np.random.default_rng(0), [])
        with pytest.raises(InvariantViolation):
            agent.transition(TravelerState.ON_BOARD)

    def test_path_type_from_legs(self):
        agent = TravelerAgent("t1", "A", "B", "ALL", "t1", 0.0, np.random.default_rng(0), [])
        assert agent.path_type == "WALK"
        agent.legs_ridden.extend([Mode.FIX, Mode.FLEX])
        assert agent.path_type == "FIX-FLEX"


class TestToyDay:
    """Day 1 of the toy scenario with one FLEX vehicle at A."""

    def test_everyone_completes(self, toy_day):
        assert toy_day.injected == 100
        assert toy_day.stranded == 0
        assert {t.path_type for t in toy_day.travelers} <= {"FIX", "FLEX"}

    def test_fix_travelers_wait_for_next_departure(self, toy_day):
        fix = [e for e in toy_day.experiences if e.mode is Mode.FIX]
        assert fix
        assert all(e.nominal_wait == pytest.approx(599.0) for e in fix)
        assert all(e.denied_wait == 0 for e in fix)

    def test_flex_overflow_waits_for_deadheading_vehicles(self, toy_day):
        waits = sorted(e.nominal_wait for e in toy_day.experiences if e.mode is Mode.FLEX)
        immediate = [w for w in waits if w == 0]
        assert len(immediate) == min(10, len(waits))
        assert all(w == pytest.approx(1800.0) for w in waits[len(immediate):])

    def test_flex_deadhead_counted(self, toy_day):
        flex = {k.service: k for k in compute_kpis(toy_day)}["FLEX"]
        n_flex = sum(1 for t in toy_day.travelers if t.path_type == "FLEX")
        overflow_plans = -(-max(0, n_flex - 10) // 10)
        assert flex.deadhead_km == pytest.approx(15.0 * overflow_plans)
        assert flex.boardings == n_flex

    def test_experiences_carry_anticipations(self, toy_day):
        fix = next(e for e in toy_day.experiences if e.mode is Mode.FIX)
        assert fix.anticipated_wait == 300.0
        assert fix.anticipated_ivt == 1800.0
        assert fix.intervals and fix.intervals[0].seated

    def test_deterministic(self, toy_world, toy_day):
        again = _day(toy_world)
        assert again.travelers == toy_day.travelers
        assert [e.nominal_wait for e in again.experiences] == [e.nominal_wait for e in toy_day.experiences]

    def test_replications_differ(self, toy_world, toy_day):
        other = _day(toy_world, replication=1)
        assert [t.path_type for t in other.travelers] != [t.path_type for t in toy_day.travelers]


class TestEdgeDays:
    """Days with no demand, stranded travelers and denied boardings."""

    def test_zero_demand(self, toy_world):
        empty = replace(toy_world, demand=CompositeDemand([]))
        result = _day(empty)
        assert result.injected == 0
        assert result.stranded == 0
        assert result.experiences == []

    def test_stranded_past_horizon(self, toy_world):
        short = replace(toy_world, window_end=100.0, drain=0.0)
        result = _day(short)
        assert result.stranded == 100
        assert all(t.path_type == STRANDED and t.arrival is None for t in result.travelers)
        assert result.experiences
        assert all(e.censored for e in result.experiences)

        rows = {r["path_type"]: r for r in mode_split_rows(result, short.path_types)}
        assert rows[STRANDED]["share"] == 1.0
        assert rows["FIX"]["count"] == rows["FLEX"]["count"] == 0

    def test_denied_boarding(self, fix_only_world):
        result = _day(fix_only_world)
        assert result.stranded == 0
        fix = {k.service: k for k in compute_kpis(result)}["FIX"]
        assert fix.denied_boardings > 0
        denied = [e for e in result.experiences if e.denied_wait > 0]
        assert len(denied) == 95
        assert all(e.nominal_wait == pytest.approx(599.0) for e in result.experiences)
        assert max(e.denied_wait for e in result.experiences) == pytest.approx(600.0 * 19)
        assert sum(t.n_denied for t in result.travelers) > 0


class TestReplication:
    """Test the day-to-day loop of one replication."""

    def test_days_with_learning(self, toy_world):
        checker = InvariantChecker(enabled=True)
        result = run_replication(toy_world, 0, 3, SEED, ledger_snapshots=True, checker=checker)
        assert result.stranded == 0
        assert checker.checks > 0
        assert sorted({row["day"] for row in result.mode_split}) == [1, 2, 3]
        assert {row["day"] for row in result.ledger} == {1, 2, 3}
        assert all(row["n_exp"] <= row["day"] for row in result.ledger)

    def test_fix_experience_learned(self, toy_world):
        ledger = ExperienceLedger(toy_world.priors)
        day_one = _day(toy_world, ledger=ledger)
        collect_day(day_one.experiences, ledger, 1, toy_world.sharing, toy_world.curve)
        fix = next(e for e in day_one.experiences if e.mode is Mode.FIX)
        assert ledger.anticipate(fix.traveler_id, fix.components[0], Quantity.WAIT) == pytest.approx(599.0)
