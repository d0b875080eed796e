"""Scenario documents, demand generators, KPIs and result files."""

from src.scenario.demand import Cohort, CohortDemand, CompositeDemand, PoissonDemand, category_demand
from src.scenario.kpis import KpiRecord, compute_kpis, mode_split_rows
from src.scenario.loader import (
    BASE_VARIANT,
    build_world,
    config_hash,
    deep_merge,
    parse_scenario,
    validate_document,
    variant_config,
    variant_names,
)
from src.scenario.schema import ScenarioConfig, cross_reference_violations

__all__ = [
    "BASE_VARIANT",
    "Cohort",
    "CohortDemand",
    "CompositeDemand",
    "KpiRecord",
    "PoissonDemand",
    "ScenarioConfig",
    "build_world",
    "category_demand",
    "compute_kpis",
    "config_hash",
    "cross_reference_violations",
    "deep_merge",
    "mode_split_rows",
    "parse_scenario",
    "validate_document",
    "variant_config",
    "variant_names",
]
