"""End-to-end checks on the bundled toy and branched scenarios."""

import os
import sys
from pathlib import Path

import pandas as pd
import pytest

sys.path.append(str(Path(__file__).parent.parent))

from src.core.config import SCENARIO_DIR
from src.core.invariants import InvariantChecker
from src.engine.runner import run_replication, run_scenario
from src.engine.simulation import STRANDED, run_day
from src.learning.ledger import ExperienceLedger
from src.paths.alternatives import Mode
from src.scenario.kpis import compute_kpis, compute_line_kpis
from src.scenario.loader import build_world, deep_merge, parse_scenario, validate_document


SEED = 20240101
WORKERS = max(1, min(8, os.cpu_count() or 1))
BUNDLED = sorted(path.stem for path in SCENARIO_DIR.glob("*.yaml"))


def _rescaled(config, scale, source):
    data = config.model_dump(mode="json", by_alias=True, exclude_none=True)
    return validate_document(deep_merge(data, {"demand": {"scale": scale}}), source)


@pytest.fixture(scope="module")
def small_branched_world(branched_config):
    """Branched scenario at a reduced demand."""
    return build_world(_rescaled(branched_config, 0.1, "branched-small"))


def _late_ivt(learning: pd.DataFrame, first_day: int) -> pd.Series:
    """Leg-weighted experienced ivt per (category, path_type), summed over the legs of the path."""
    late = learning[(learning["day"] >= first_day) & (learning["quantity"] == "ivt")].copy()
    late["total"] = late["experienced"] * late["n"]
    legs = late.groupby(["category", "path_type", "mode"])[["total", "n"]].sum()
    per_leg = legs["total"] / legs["n"]
    return per_leg.groupby(level=["category", "path_type"]).sum()


class TestToyFirstDay:
    """Day 1 of the toy scenario, before any learning."""

    def test_flex_share_across_replications(self, toy_world):
        riders = 0
        total = 0
        for replication in range(20):
            result = run_day(toy_world, ExperienceLedger(toy_world.priors), 1, replication, SEED)
            riders += sum(1 for t in result.travelers if t.path_type == "FLEX")
            total += result.injected
        assert riders / total == pytest.approx(0.72, abs=0.03)

    def test_overflow_riders_wait_for_deadhead(self, toy_world):
        result = run_day(toy_world, ExperienceLedger(toy_world.priors), 1, 3, SEED)
        waits = [e.nominal_wait for e in result.experiences if e.mode is Mode.FLEX]
        assert sorted(set(waits)) == [0.0, 1800.0]
        assert waits.count(0.0) == 10


@pytest.mark.slow
class TestToyConvergence:
    """Day-to-day learning on the toy scenario: 75 days, 20 replications per fleet size."""

    @pytest.fixture(scope="class")
    def late_flex_share(self, toy_config):
        results = run_scenario(toy_config, days=75, replications=20, parallel=WORKERS)
        split = pd.DataFrame(results.rows("mode_split"))
        late = split[(split["day"] >= 60) & (split["path_type"] == "FLEX")]
        return late.groupby("variant")["share"].mean()

    @pytest.mark.parametrize("variant,expected", [
        ("flex1", 0.22),
        ("flex3", 0.43),
        ("flex5", 0.60),
        ("flex7", 0.70),
    ])
    def test_converged_flex_share(self, late_flex_share, variant, expected):
        assert late_flex_share[variant] == pytest.approx(expected, abs=0.06)

    def test_more_vehicles_attract_more_riders(self, late_flex_share):
        shares = [late_flex_share[v] for v in ("flex1", "flex3", "flex5", "flex7")]
        assert shares == sorted(shares)


class TestInvariantsAcrossScenarios:
    """Supply invariants on every bundled scenario, in worker processes and in-process."""

    @pytest.mark.parametrize("name", BUNDLED)
    def test_workers_assert_invariants(self, name):
        config = _rescaled(parse_scenario(SCENARIO_DIR / f"{name}.yaml"), 0.1, f"{name}-small")
        results = run_scenario(config, days=2, replications=3, parallel=2, check_invariants=True)
        assert len(results.runs) == 3 * len(results.variants)
        assert all(run.invariant_checks > 0 for run in results.runs)

    def test_serial_run_asserts_invariants(self, toy_config):
        results = run_scenario(toy_config, days=2, replications=2, variants=["flex3"], check_invariants=True)
        assert all(run.invariant_checks > 0 for run in results.runs)

    def test_checks_can_be_switched_off(self, toy_config):
        results = run_scenario(toy_config, days=1, replications=2, variants=["flex1"], parallel=2,
                               check_invariants=False)
        assert [run.invariant_checks for run in results.runs] == [0, 0]


@pytest.mark.slow
class TestBranched:
    """Short runs of the stylized branched scenario."""

    def test_invariants_hold_over_days(self, small_branched_world):
        checker = InvariantChecker(enabled=True)
        result = run_replication(small_branched_world, 0, 2, SEED, checker=checker)
        assert result.stranded == 0
        assert checker.checks > 0

    def test_corridor_trips_ride_fix_only(self, small_branched_world):
        result = run_day(small_branched_world, ExperienceLedger(small_branched_world.priors), 1, 0, SEED,
                         InvariantChecker(enabled=True))
        corridor = [t for t in result.travelers if t.category == "C2C"]
        assert corridor
        assert {t.path_type for t in corridor} <= {"FIX", STRANDED}
        used = {t.path_type for t in result.travelers}
        assert "FLEX" in used or "FIX-FLEX" in used or "FLEX-FIX" in used

    def test_feeder_paths_transfer_at_hub(self, small_branched_world):
        result = run_day(small_branched_world, ExperienceLedger(small_branched_world.priors), 1, 1, SEED)
        for exp in result.experiences:
            if exp.path_type in ("FIX-FLEX", "FLEX-FIX") and not exp.censored:
                assert any("MAL" in component for component in exp.components)

    def test_line_kpis_add_up_to_fix_service(self, small_branched_world):
        result = run_day(small_branched_world, ExperienceLedger(small_branched_world.priors), 1, 2, SEED)
        lines = compute_line_kpis(result)
        fix = {k.service: k for k in compute_kpis(result)}["FIX"]
        assert [k.line for k in lines] == ["176", "177", "C"]
        assert sum(k.boardings for k in lines) == fix.boardings
        assert sum(k.vkt_km for k in lines) == pytest.approx(fix.vkt_km)
        assert sum(k.pkt_km for k in lines) == pytest.approx(fix.pkt_km)


@pytest.mark.slow
class TestBranchedConvergence:
    """The bundled branched scenario at full length: 100 days, 20 replications."""

    @pytest.fixture(scope="class")
    def results(self, branched_config):
        return run_scenario(branched_config, days=100, replications=20, parallel=WORKERS)

    @pytest.fixture(scope="class")
    def late_split(self, results):
        split = pd.DataFrame(results.rows("mode_split"))
        return split[split["day"] > 90].groupby(["category", "path_type"])["count"].sum()

    def test_supply_carries_demand(self, results, late_split):
        travelers = late_split.sum()
        stranded = late_split.xs(STRANDED, level="path_type").sum()
        assert stranded <= 0.001 * travelers

    def test_branch_to_branch_prefers_flex(self, late_split):
        b2b = late_split.loc["B2B"]
        assert b2b["FLEX"] / b2b.drop(STRANDED).sum() > 0.5

    def test_corridor_trips_never_leave_fix(self, late_split):
        c2c = late_split.loc["C2C"]
        assert c2c["FIX"] > 0
        assert c2c.drop(["FIX", STRANDED]).sum() == 0

    @pytest.mark.parametrize("category,flex_path", [
        ("B2B", "FLEX"),
        ("B2C", "FLEX-FIX"),
        ("C2B", "FIX-FLEX"),
    ])
    def test_fix_only_rides_longer_when_crowding_weighted(self, results, category, flex_path):
        ivt = _late_ivt(pd.DataFrame(results.rows("learning")), 91)
        assert ivt[(category, "FIX")] >= ivt[(category, flex_path)]
