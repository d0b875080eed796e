"""Scenario document schema: pydantic models plus cross-reference checks."""

import math
from typing import Any, Dict, List, Literal, Optional, Set

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NegativeFloat,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from src.choice.utility import DEFAULT_BETA_IVT
from src.core.exceptions import Violation
from src.learning.experience import Sharing
from src.network.network import DEFAULT_WALK_SPEED


OD_CATEGORIES = ("C2C", "C2B", "B2C", "B2B")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# ============================================================================
# Network
# ============================================================================

class StopConfig(StrictModel):
    id: str
    name: Optional[str] = None
    x: float = 0.0
    y: float = 0.0
    tag: Optional[Literal["corridor", "branch"]] = None


class RunningTimeConfig(StrictModel):
    """Constant running time, or log-normal given either mu or the median."""

    distribution: Literal["constant", "lognormal"] = "constant"
    value: Optional[PositiveFloat] = None
    mu: Optional[float] = None
    median: Optional[PositiveFloat] = None
    sigma: NonNegativeFloat = 0.0

    @model_validator(mode="after")
    def check_parameters(self) -> "RunningTimeConfig":
        if self.distribution == "constant" and self.value is None:
            raise ValueError("constant running time needs 'value'")
        if self.distribution == "lognormal" and (self.mu is None) == (self.median is None):
            raise ValueError("log-normal running time needs exactly one of 'mu' or 'median'")
        return self

    @property
    def log_mean(self) -> float:
        return self.mu if self.mu is not None else math.log(self.median)


class RoadLinkConfig(StrictModel):
    id: str
    from_stop: str = Field(alias="from")
    to_stop: str = Field(alias="to")
    length: PositiveFloat
    running_time: RunningTimeConfig
    free_flow: Optional[PositiveFloat] = None


class WalkLinkConfig(StrictModel):
    from_stop: str = Field(alias="from")
    to_stop: str = Field(alias="to")
    distance: NonNegativeFloat
    bidirectional: bool = False


class NetworkConfig(StrictModel):
    walk_speed: PositiveFloat = DEFAULT_WALK_SPEED
    walk_variability: NonNegativeFloat = 0.0
    stops: List[StopConfig] = Field(min_length=1)
    road_links: List[RoadLinkConfig] = Field(default_factory=list)
    walk_links: List[WalkLinkConfig] = Field(default_factory=list)


# ============================================================================
# Supply
# ============================================================================

class VehicleTypeConfig(StrictModel):
    id: str
    capacity: PositiveInt
    seats: PositiveInt

    @model_validator(mode="after")
    def check_seats(self) -> "VehicleTypeConfig":
        if self.seats > self.capacity:
            raise ValueError("seats cannot exceed capacity")
        return self


class LineConfig(StrictModel):
    """A FIX line. ``links`` may be omitted when consecutive stops are joined by a road link."""

    id: str
    stops: List[str] = Field(min_length=2)
    links: Optional[List[str]] = None
    vehicle_type: str
    headway: Optional[PositiveFloat] = None
    departures: List[float] = Field(default_factory=list)
    offset: float = 0.0
    base_line: Optional[str] = None

    @model_validator(mode="after")
    def check_schedule(self) -> "LineConfig":
        if self.headway is None and not self.departures:
            raise ValueError("either 'headway' or 'departures' is required")
        if self.links is not None and len(self.links) != len(self.stops) - 1:
            raise ValueError("'links' needs one entry per consecutive stop pair")
        return self


class FlexConfig(StrictModel):
    vehicle_type: str
    fleet: Dict[str, NonNegativeInt]
    service_area: List[str] = Field(min_length=2)
    balance_stops: List[str] = Field(default_factory=list)
    assignment_interval: PositiveFloat = 5.0
    rebalancing_interval: Optional[PositiveFloat] = None
    allow_assigned_insertion: bool = True


# ============================================================================
# Demand
# ============================================================================

class CohortConfig(StrictModel):
    """Travelers arriving together at their origin on every day, with persistent identities."""

    origin: str
    destination: str
    size: PositiveInt
    time: float
    id_prefix: str = "k"
    shuffle: bool = True


class PoissonConfig(StrictModel):
    origin: str
    destination: str
    rate: PositiveFloat  # passengers per hour


class CategoryLineConfig(StrictModel):
    """Line/direction total rate split over OD categories, spread uniformly over stop pairs."""

    line: str
    rate: PositiveFloat  # passengers per hour
    shares: Dict[str, float]

    @model_validator(mode="after")
    def check_shares(self) -> "CategoryLineConfig":
        if any(v < 0 for v in self.shares.values()):
            raise ValueError("category shares must be >= 0")
        if sum(self.shares.values()) > 1.0 + 1e-9:
            raise ValueError("category shares must sum to at most 1")
        return self


class DemandConfig(StrictModel):
    scale: PositiveFloat = 1.0
    cohorts: List[CohortConfig] = Field(default_factory=list)
    poisson: List[PoissonConfig] = Field(default_factory=list)
    category_lines: List[CategoryLineConfig] = Field(default_factory=list)


# ============================================================================
# Behavior and run
# ============================================================================

class ChoiceSetConfig(StrictModel):
    max_transfers: NonNegativeInt = 1
    max_walk_distance: Optional[NonNegativeFloat] = None
    allowed_types: Optional[Dict[str, List[str]]] = None
    dominance_pruning: bool = False
    merge_epsilon: NonNegativeFloat = 0.0
    transfer_stops: Optional[List[str]] = None


class ModeWeightsConfig(StrictModel):
    wait: float = Field(le=0)
    ivt: NegativeFloat
    walk: float = Field(le=0)
    transfer: float = Field(default=0.0, le=0)


class BetaConfig(StrictModel):
    """Value-of-time parameters as ratios to beta_ivt, with optional explicit per-mode weights."""

    ivt: NegativeFloat = DEFAULT_BETA_IVT
    wait_ratio: PositiveFloat = 2.0
    walk_ratio: PositiveFloat = 1.0
    transfer_minutes: NonNegativeFloat = 5.0
    fix: Optional[ModeWeightsConfig] = None
    flex: Optional[ModeWeightsConfig] = None


class CrowdingConfig(StrictModel):
    seated_load_factors: List[float] = Field(default_factory=lambda: [0.5, 2.0])
    seated_multipliers: List[PositiveFloat] = Field(default_factory=lambda: [0.95, 1.71])
    standing_load_factors: List[float] = Field(default_factory=lambda: [1.0, 2.0])
    standing_multipliers: List[PositiveFloat] = Field(default_factory=lambda: [1.78, 2.69])
    denied: float = Field(default=3.5, ge=1.0)


class BehaviorConfig(StrictModel):
    sharing: Sharing = Sharing.INDIVIDUAL
    beta: BetaConfig = Field(default_factory=BetaConfig)
    crowding: CrowdingConfig = Field(default_factory=CrowdingConfig)
    trace_decisions: bool = False


class RunConfig(StrictModel):
    window_start: float = 0.0
    window_end: PositiveFloat = 10800.0
    drain: NonNegativeFloat = 7200.0
    warmup: bool = True
    days: PositiveInt = 75
    replications: PositiveInt = 20
    seed: NonNegativeInt = 20240101

    @model_validator(mode="after")
    def check_window(self) -> "RunConfig":
        if self.window_end <= self.window_start:
            raise ValueError("window_end must be after window_start")
        return self


class ScenarioConfig(StrictModel):
    name: str
    description: str = ""
    stylized: bool = False
    network: NetworkConfig
    vehicle_types: List[VehicleTypeConfig] = Field(min_length=1)
    lines: List[LineConfig] = Field(default_factory=list)
    flex: Optional[FlexConfig] = None
    demand: DemandConfig = Field(default_factory=DemandConfig)
    choice_set: ChoiceSetConfig = Field(default_factory=ChoiceSetConfig)
    behavior: BehaviorConfig = Field(default_factory=BehaviorConfig)
    run: RunConfig = Field(default_factory=RunConfig)
    variants: Dict[str, Dict[str, Any]] = Field(default_factory=dict)


# ============================================================================
# Cross references
# ============================================================================

def _duplicates(ids: List[str]) -> Set[str]:
    seen: Set[str] = set()
    dup: Set[str] = set()
    for item in ids:
        if item in seen:
            dup.add(item)
        seen.add(item)
    return dup


def cross_reference_violations(cfg: ScenarioConfig, prefix: str = "") -> List[Violation]:
    """All dangling or inconsistent ids of a schema-valid scenario.

    Args:
        cfg: Schema-validated scenario
        prefix: Location prefix (used for variants)

    Returns:
        Violations with dotted locations, empty when consistent
    """
    out: List[Violation] = []

    def bad(location: str, message: str):
        out.append(Violation(f"{prefix}{location}", message))

    stops = {s.id for s in cfg.network.stops}
    links = {link.id: link for link in cfg.network.road_links}
    vtypes = {v.id for v in cfg.vehicle_types}
    lines = {line.id for line in cfg.lines}

    for label, ids in (("network.stops", [s.id for s in cfg.network.stops]),
                       ("network.road_links", [link.id for link in cfg.network.road_links]),
                       ("vehicle_types", [v.id for v in cfg.vehicle_types]),
                       ("lines", [line.id for line in cfg.lines])):
        for dup in sorted(_duplicates(ids)):
            bad(label, f"duplicate id '{dup}'")

    for i, link in enumerate(cfg.network.road_links):
        for key, stop in (("from", link.from_stop), ("to", link.to_stop)):
            if stop not in stops:
                bad(f"network.road_links[{i}].{key}", f"link '{link.id}' references unknown stop '{stop}'")
    for i, walk in enumerate(cfg.network.walk_links):
        for key, stop in (("from", walk.from_stop), ("to", walk.to_stop)):
            if stop not in stops:
                bad(f"network.walk_links[{i}].{key}", f"unknown stop '{stop}'")

    pairs = {(link.from_stop, link.to_stop) for link in cfg.network.road_links}
    for i, line in enumerate(cfg.lines):
        where = f"lines[{i}]"
        if line.vehicle_type not in vtypes:
            bad(f"{where}.vehicle_type", f"line '{line.id}' references unknown vehicle type '{line.vehicle_type}'")
        for j, stop in enumerate(line.stops):
            if stop not in stops:
                bad(f"{where}.stops[{j}]", f"line '{line.id}' references unknown stop '{stop}'")
        if len(set(line.stops)) != len(line.stops):
            bad(f"{where}.stops", f"line '{line.id}' visits a stop twice")
        consecutive = list(zip(line.stops[:-1], line.stops[1:]))
        if line.links is None:
            for j, (a, b) in enumerate(consecutive):
                if (a, b) not in pairs:
                    bad(f"{where}.stops[{j + 1}]", f"line '{line.id}': no road link {a}->{b}")
        else:
            for j, ((a, b), link_id) in enumerate(zip(consecutive, line.links)):
                link = links.get(link_id)
                if link is None:
                    bad(f"{where}.links[{j}]", f"line '{line.id}' references unknown link '{link_id}'")
                elif (link.from_stop, link.to_stop) != (a, b):
                    bad(f"{where}.links[{j}]", f"link '{link_id}' does not connect {a}->{b}")

    if cfg.flex is not None:
        flex = cfg.flex
        area = set(flex.service_area)
        if flex.vehicle_type not in vtypes:
            bad("flex.vehicle_type", f"unknown vehicle type '{flex.vehicle_type}'")
        for j, stop in enumerate(flex.service_area):
            if stop not in stops:
                bad(f"flex.service_area[{j}]", f"unknown stop '{stop}'")
        for stop in sorted(flex.fleet):
            if stop not in area:
                bad(f"flex.fleet.{stop}", f"initial vehicles at '{stop}' outside the service area")
        for j, stop in enumerate(flex.balance_stops):
            if stop not in area:
                bad(f"flex.balance_stops[{j}]", f"balance stop '{stop}' outside the service area")
        if flex.rebalancing_interval and not flex.balance_stops:
            bad("flex.balance_stops", "rebalancing needs balance stops")

    demand = cfg.demand
    for label, entries in (("demand.cohorts", demand.cohorts), ("demand.poisson", demand.poisson)):
        for i, entry in enumerate(entries):
            for key in ("origin", "destination"):
                if getattr(entry, key) not in stops:
                    bad(f"{label}[{i}].{key}", f"unknown stop '{getattr(entry, key)}'")
    for i, entry in enumerate(demand.category_lines):
        if entry.line not in lines:
            bad(f"demand.category_lines[{i}].line", f"unknown line '{entry.line}'")
        for category in sorted(entry.shares):
            if category not in OD_CATEGORIES:
                bad(f"demand.category_lines[{i}].shares.{category}", "unknown OD category")

    choice = cfg.choice_set
    for j, stop in enumerate(choice.transfer_stops or []):
        if stop not in stops:
            bad(f"choice_set.transfer_stops[{j}]", f"unknown stop '{stop}'")
    for category, types in sorted((choice.allowed_types or {}).items()):
        if category not in OD_CATEGORIES + ("ALL",):
            bad(f"choice_set.allowed_types.{category}", "unknown OD category")
        for j, path_type in enumerate(types):
            if not set(path_type.split("-")) <= {"FIX", "FLEX"}:
                bad(f"choice_set.allowed_types.{category}[{j}]", f"unknown path type '{path_type}'")

    crowd = cfg.behavior.crowding
    for kind in ("seated", "standing"):
        xs = getattr(crowd, f"{kind}_load_factors")
        ys = getattr(crowd, f"{kind}_multipliers")
        if len(xs) != len(ys) or not xs:
            bad(f"behavior.crowding.{kind}_multipliers", "one multiplier per load-factor breakpoint")
        elif any(b <= a for a, b in zip(xs[:-1], xs[1:])):
            bad(f"behavior.crowding.{kind}_load_factors", "breakpoints must increase")
        elif any(b < a for a, b in zip(ys[:-1], ys[1:])):
            bad(f"behavior.crowding.{kind}_multipliers", "multipliers must be non-decreasing")
    return out
