"""Day-to-day loop over replications and variants of a scenario."""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from src.core.config import settings
from src.core.invariants import InvariantChecker
from src.core.logger import get_component_logger, run_context
from src.engine.simulation import run_day
from src.engine.world import SimulationWorld
from src.learning.ledger import ExperienceLedger, collect_day, learning_curve_rows
from src.scenario.kpis import compute_kpis, compute_line_kpis, mode_split_rows
from src.scenario.loader import build_world, config_hash, variant_names
from src.scenario.schema import ScenarioConfig


logger = get_component_logger("runner")


@dataclass
class ReplicationResult:
    """Row tables of one replication of one variant."""

    variant: str
    replication: int
    mode_split: List[Dict] = field(default_factory=list)
    kpis: List[Dict] = field(default_factory=list)
    line_kpis: List[Dict] = field(default_factory=list)
    learning: List[Dict] = field(default_factory=list)
    ledger: List[Dict] = field(default_factory=list)
    stranded: int = 0
    invariant_checks: int = 0


@dataclass
class ScenarioResults:
    name: str
    config_hash: str
    seed: int
    days: int
    replications: int
    variants: List[str]
    runs: List[ReplicationResult] = field(default_factory=list)

    def rows(self, table: str) -> List[Dict]:
        return [row for run in self.runs for row in getattr(run, table)]


def _tag(rows: List[Dict], variant: str, replication: int, day: int) -> List[Dict]:
    return [{"variant": variant, "replication": replication, "day": day, **row} for row in rows]


def run_replication(world: SimulationWorld, replication: int, days: int, seed: int,
                    ledger_snapshots: bool = False,
                    checker: Optional[InvariantChecker] = None) -> ReplicationResult:
    """Run one replication: fresh ledger with priors, then days 1..D with learning between days.

    Args:
        world: Static scenario inputs of one variant
        replication: Replication index
        days: Number of days D
        seed: Base seed
        ledger_snapshots: Also keep the full ledger after every day
        checker: Invariant checker shared by all days

    Returns:
        Mode split, KPI, learning-curve and optional ledger rows
    """
    start = time.time()
    checks_before = checker.checks if checker else 0
    ledger = ExperienceLedger(world.priors)
    result = ReplicationResult(world.variant, replication)

    with run_context(variant=world.variant, replication=replication):
        _run_days(world, ledger, result, days, seed, ledger_snapshots, checker)
    if checker:
        result.invariant_checks = checker.checks - checks_before

    logger.log_performance("run_replication", start, {
        "variant": world.variant,
        "replication": replication,
        "days": days,
        "invariant_checks": result.invariant_checks,
    })
    return result


def _run_days(world: SimulationWorld, ledger: ExperienceLedger, result: ReplicationResult, days: int, seed: int,
              ledger_snapshots: bool, checker: Optional[InvariantChecker]):
    replication = result.replication
    for day in range(1, days + 1):
        day_result = run_day(world, ledger, day, replication, seed, checker)
        split = mode_split_rows(day_result, world.path_types)
        result.mode_split.extend(_tag(split, world.variant, replication, day))
        result.kpis.extend(_tag([k.as_row() for k in compute_kpis(day_result)], world.variant, replication, day))
        result.line_kpis.extend(_tag([k.as_row() for k in compute_line_kpis(day_result)],
                                     world.variant, replication, day))
        result.learning.extend(_tag(learning_curve_rows(day_result.experiences, world.curve),
                                    world.variant, replication, day))
        result.stranded += day_result.stranded

        collect_day(day_result.experiences, ledger, day, world.sharing, world.curve)
        if ledger_snapshots:
            result.ledger.extend({"variant": world.variant, "replication": replication, **row}
                                 for row in ledger.snapshot(day))

        completed = [t for t in day_result.travelers if t.completed]
        flex_riders = sum(1 for t in completed if "FLEX" in t.path_type)
        logger.info("run_day", "Day completed", {
            "day": day,
            "travelers": day_result.injected,
            "flex_share": round(flex_riders / len(completed), 4) if completed else None,
            "stranded": day_result.stranded,
        })


_worker_worlds: Dict[str, SimulationWorld] = {}


def _replication_worker(config: ScenarioConfig, variant: str, replication: int, days: int, seed: int,
                        ledger_snapshots: bool, check_invariants: bool) -> ReplicationResult:
    """Process-pool entry point; builds (and caches) the world and its checker inside the worker."""
    key = f"{config_hash(config)}:{variant}"
    if key not in _worker_worlds:
        _worker_worlds[key] = build_world(config, variant)
    with run_context(scenario=config.name):
        return run_replication(_worker_worlds[key], replication, days, seed, ledger_snapshots,
                               InvariantChecker(enabled=check_invariants))


def run_scenario(config: ScenarioConfig, days: Optional[int] = None, replications: Optional[int] = None,
                 seed: Optional[int] = None, variants: Optional[Sequence[str]] = None,
                 parallel: int = 1, ledger_snapshots: bool = False,
                 check_invariants: Optional[bool] = None) -> ScenarioResults:
    """Run every selected variant for R replications of D days.

    Replications are independent; with ``parallel > 1`` they run in a
    process pool and results are collected in (variant, replication) order.
    Invariant assertions follow ``check_invariants`` (default: settings) in
    both modes.
    """
    days = days if days is not None else config.run.days
    replications = replications if replications is not None else config.run.replications
    seed = seed if seed is not None else config.run.seed
    selected = list(variants) if variants else variant_names(config)
    check = settings.check_invariants if check_invariants is None else check_invariants

    results = ScenarioResults(
        name=config.name,
        config_hash=config_hash(config),
        seed=seed,
        days=days,
        replications=replications,
        variants=selected,
    )
    start = time.time()
    logger.info("run_scenario", "Scenario started", {
        "scenario": config.name,
        "variants": selected,
        "days": days,
        "replications": replications,
        "seed": seed,
        "parallel": parallel,
        "check_invariants": check,
    })

    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [
                pool.submit(_replication_worker, config, variant, r, days, seed, ledger_snapshots, check)
                for variant in selected
                for r in range(replications)
            ]
            results.runs = [future.result() for future in futures]
    else:
        with run_context(scenario=config.name):
            for variant in selected:
                world = build_world(config, variant)
                checker = InvariantChecker(enabled=check)
                for r in range(replications):
                    results.runs.append(run_replication(world, r, days, seed, ledger_snapshots, checker))

    logger.log_performance("run_scenario", start, {
        "scenario": config.name,
        "runs": len(results.runs),
        "stranded": sum(run.stranded for run in results.runs),
    })
    return results
