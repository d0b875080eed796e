"""Scenario parsing, variant merging, hashing and world construction."""

import copy
import hashlib
import json
import math
import time
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import yaml
from pydantic import ValidationError

from src.choice.utility import ModeWeights, ValueOfTime
from src.core.config import SCENARIO_DIR
from src.core.exceptions import ScenarioError, Violation
from src.core.logger import get_component_logger
from src.engine.world import FlexSetup, SimulationWorld
from src.fixed.lines import FixLine
from src.fixed.vehicles import VehicleType
from src.learning.crowding import CrowdingCurve
from src.learning.ledger import build_priors
from src.network.network import Network, RoadLink, RunningTimeDistribution, Stop, WalkLink, flex_route_table
from src.paths.alternatives import ChoiceSetFilters
from src.paths.generation import generate_choice_sets
from src.scenario.demand import Cohort, CohortDemand, CompositeDemand, PoissonDemand, category_demand
from src.scenario.schema import ScenarioConfig, cross_reference_violations


BASE_VARIANT = "base"

logger = get_component_logger("scenario")


def _location(loc: Tuple[Any, ...]) -> str:
    parts: List[str] = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts) or "<root>"


def _schema_violations(error: ValidationError, prefix: str = "") -> List[Violation]:
    return [Violation(f"{prefix}{_location(e['loc'])}", e["msg"]) for e in error.errors()]


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; lists and scalars in ``override`` replace the base value."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def resolve_scenario_path(scenario: Union[str, Path]) -> Path:
    """A file path, or the name of a bundled scenario under config/scenarios."""
    path = Path(scenario)
    if path.exists():
        return path
    bundled = SCENARIO_DIR / f"{scenario}.yaml"
    if bundled.exists():
        return bundled
    return path


def validate_document(data: Any, source: str = "<scenario>") -> ScenarioConfig:
    """Validate a parsed document, its cross references and every variant.

    Raises:
        ScenarioError: with every violation found, not just the first
    """
    if not isinstance(data, dict):
        raise ScenarioError([Violation("<root>", "scenario document must be a mapping")], source)
    try:
        cfg = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(_schema_violations(e), source) from None

    violations = cross_reference_violations(cfg)
    for name in sorted(cfg.variants):
        prefix = f"variants.{name}."
        try:
            merged = variant_config(cfg, name)
        except ValidationError as e:
            violations.extend(_schema_violations(e, prefix))
            continue
        violations.extend(cross_reference_violations(merged, prefix))
    if violations:
        raise ScenarioError(violations, source)
    return cfg


def parse_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario file.

    Args:
        path: YAML file, or the name of a bundled scenario

    Returns:
        Validated scenario configuration

    Raises:
        ScenarioError: unreadable file, malformed YAML, schema or cross-reference violations
    """
    resolved = resolve_scenario_path(path)
    source = str(resolved)
    try:
        text = resolved.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError([Violation("<file>", f"cannot read scenario: {e.strerror or e}")], source) from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "<yaml>"
        raise ScenarioError([Violation(where, f"malformed YAML: {getattr(e, 'problem', e)}")], source) from None

    cfg = validate_document(data, source)
    logger.info("parse_scenario", "Scenario validated", {
        "source": source,
        "scenario": cfg.name,
        "variants": sorted(cfg.variants),
    })
    return cfg


def variant_names(cfg: ScenarioConfig) -> List[str]:
    return sorted(cfg.variants) or [BASE_VARIANT]


def variant_config(cfg: ScenarioConfig, variant: str) -> ScenarioConfig:
    """The base document with one variant's overrides merged in."""
    if variant == BASE_VARIANT:
        return cfg
    if variant not in cfg.variants:
        raise ScenarioError([Violation("variants", f"unknown variant '{variant}'")], cfg.name)
    base = cfg.model_dump(by_alias=True, exclude={"variants"}, exclude_none=True)
    return ScenarioConfig.model_validate(deep_merge(base, cfg.variants[variant]))


def config_hash(cfg: ScenarioConfig) -> str:
    """SHA-256 of the canonical JSON form of the validated scenario."""
    canonical = json.dumps(cfg.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# ============================================================================
# World construction
# ============================================================================

def build_network(cfg: ScenarioConfig) -> Network:
    stops = {s.id: Stop(s.id, s.name or s.id, s.x, s.y, s.tag) for s in cfg.network.stops}
    road_links = {}
    for link in cfg.network.road_links:
        rt = link.running_time
        distribution = RunningTimeDistribution(
            kind=rt.distribution,
            value=rt.value or 0.0,
            mu=rt.log_mean if rt.distribution == "lognormal" else 0.0,
            sigma=rt.sigma,
        )
        road_links[link.id] = RoadLink(link.id, link.from_stop, link.to_stop, link.length, distribution,
                                       link.free_flow)
    walk_links = {}
    for walk in cfg.network.walk_links:
        walk_links[(walk.from_stop, walk.to_stop)] = WalkLink(walk.from_stop, walk.to_stop, walk.distance)
        if walk.bidirectional:
            walk_links[(walk.to_stop, walk.from_stop)] = WalkLink(walk.to_stop, walk.from_stop, walk.distance)
    return Network(stops, road_links, walk_links)


def build_lines(cfg: ScenarioConfig, net: Network, vehicle_types: Dict[str, VehicleType]) -> Dict[str, FixLine]:
    lines: Dict[str, FixLine] = {}
    for line in cfg.lines:
        links = line.links or [net.link_between(a, b).id for a, b in zip(line.stops[:-1], line.stops[1:])]
        fix_line = FixLine(
            id=line.id,
            stops=tuple(line.stops),
            links=tuple(links),
            vehicle_type=vehicle_types[line.vehicle_type],
            headway=line.headway,
            departures=tuple(line.departures),
            offset=line.offset,
            base=line.base_line,
        )
        fix_line.validate_route(net)
        lines[line.id] = fix_line
    return lines


def build_demand(cfg: ScenarioConfig, net: Network, lines: Dict[str, FixLine]):
    demand = cfg.demand
    parts = []
    if demand.cohorts:
        parts.append(CohortDemand([
            Cohort(c.origin, c.destination, c.size, c.time, c.id_prefix, c.shuffle) for c in demand.cohorts
        ]))
    rates: Dict[Tuple[str, str], float] = {}
    for entry in demand.poisson:
        od = (entry.origin, entry.destination)
        rates[od] = rates.get(od, 0.0) + entry.rate
    for entry in demand.category_lines:
        for od, rate in category_demand(net, lines[entry.line], entry.rate, entry.shares).items():
            rates[od] = rates.get(od, 0.0) + rate
    if rates:
        parts.append(PoissonDemand(rates, cfg.run.window_start, cfg.run.window_end, demand.scale))
    if len(parts) == 1:
        return parts[0]
    return CompositeDemand(parts)


def build_value_of_time(cfg: ScenarioConfig) -> ValueOfTime:
    beta = cfg.behavior.beta
    calibrated = ValueOfTime.calibrated(beta.ivt, beta.wait_ratio, beta.walk_ratio, beta.transfer_minutes,
                                        cfg.network.walk_speed)
    overrides = {}
    for mode in ("fix", "flex"):
        explicit = getattr(beta, mode)
        if explicit is not None:
            overrides[mode] = ModeWeights(explicit.wait, explicit.ivt, explicit.walk, explicit.transfer)
    return ValueOfTime(
        fix=overrides.get("fix", calibrated.fix),
        flex=overrides.get("flex", calibrated.flex),
        walk_speed=cfg.network.walk_speed,
    )


def build_world(cfg: ScenarioConfig, variant: str = BASE_VARIANT) -> SimulationWorld:
    """Construct the static inputs of one variant, including its choice sets and priors.

    Raises:
        ChoiceSetError: if an OD with demand is left without path alternatives
    """
    start = time.time()
    merged = variant_config(cfg, variant)
    net = build_network(merged)
    vehicle_types = {v.id: VehicleType(v.id, v.capacity, v.seats) for v in merged.vehicle_types}
    lines = build_lines(merged, net, vehicle_types)

    flex = None
    flex_routes = {}
    if merged.flex is not None:
        f = merged.flex
        flex = FlexSetup(
            vehicle_type=vehicle_types[f.vehicle_type],
            fleet={stop: n for stop, n in sorted(f.fleet.items()) if n > 0},
            service_area=tuple(f.service_area),
            balance_stops=tuple(f.balance_stops or f.service_area),
            assignment_interval=f.assignment_interval,
            rebalancing_interval=f.rebalancing_interval,
            allow_assigned_insertion=f.allow_assigned_insertion,
        )
        flex_routes = flex_route_table(net, f.service_area)

    demand = build_demand(merged, net, lines)
    choice = merged.choice_set
    filters = ChoiceSetFilters(
        max_transfers=choice.max_transfers,
        max_walk_distance=choice.max_walk_distance if choice.max_walk_distance is not None else math.inf,
        allowed_types=choice.allowed_types,
        dominance_pruning=choice.dominance_pruning,
        merge_epsilon=choice.merge_epsilon,
        transfer_stops=frozenset(choice.transfer_stops) if choice.transfer_stops is not None else None,
    )
    path_set = generate_choice_sets(net, list(lines.values()), flex_routes, filters, demand.ods())

    crowd = merged.behavior.crowding
    world = SimulationWorld(
        name=merged.name,
        variant=variant,
        net=net,
        lines=lines,
        flex=flex,
        flex_routes=flex_routes,
        path_set=path_set,
        priors=build_priors(path_set.all_legs()),
        vot=build_value_of_time(merged),
        curve=CrowdingCurve(
            tuple(crowd.seated_load_factors), tuple(crowd.seated_multipliers),
            tuple(crowd.standing_load_factors), tuple(crowd.standing_multipliers),
            crowd.denied,
        ),
        demand=demand,
        sharing=merged.behavior.sharing,
        window_start=merged.run.window_start,
        window_end=merged.run.window_end,
        drain=merged.run.drain,
        warmup=merged.run.warmup,
        walk_variability=merged.network.walk_variability,
        trace_decisions=merged.behavior.trace_decisions,
    )
    logger.log_performance("build_world", start, {
        "scenario": merged.name,
        "variant": variant,
        "lines": len(lines),
        "flex_fleet": flex.size if flex else 0,
        "ods": len(path_set.ods()),
    })
    return world
