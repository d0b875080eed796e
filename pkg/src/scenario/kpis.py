"""Per-day KPIs: passenger and vehicle kilometers, load factors, denied boardings, mode split."""

from collections import Counter
from dataclasses import asdict, dataclass
from typing import Dict, List, Mapping, Optional, Sequence

from src.engine.simulation import STRANDED, DayResult


@dataclass
class KpiRecord:
    """KPIs of one service type on one day; ratios are None when the service drove no kilometers."""

    service: str
    pkt_km: float
    vkt_km: float
    pkt_per_vkt: Optional[float]
    load_factor: Optional[float]
    revenue_km: float
    deadhead_km: float
    rebalancing_km: float
    boardings: int
    denied_boardings: int
    stranded: int
    vkt_zero: bool

    def as_row(self) -> Dict:
        return asdict(self)


def compute_kpis(result: DayResult) -> List[KpiRecord]:
    """PKT, VKT and load factor (PKT/VKT over seats) per service type.

    The load factor divides passenger-meters by seat-meters, which equals
    (PKT/VKT)/seats when a service runs a single vehicle type.
    """
    records: List[KpiRecord] = []
    for service in sorted(result.services):
        stats = result.services[service]
        pkt = stats.passenger_m / 1000.0
        vkt = stats.vehicle_m / 1000.0
        zero = stats.vehicle_m <= 0
        records.append(KpiRecord(
            service=service,
            pkt_km=pkt,
            vkt_km=vkt,
            pkt_per_vkt=None if zero else stats.passenger_m / stats.vehicle_m,
            load_factor=None if stats.seat_m <= 0 else stats.passenger_m / stats.seat_m,
            revenue_km=(stats.vehicle_m - stats.deadhead_m - stats.rebalancing_m) / 1000.0,
            deadhead_km=stats.deadhead_m / 1000.0,
            rebalancing_km=stats.rebalancing_m / 1000.0,
            boardings=stats.boardings,
            denied_boardings=stats.denied_boardings,
            stranded=result.stranded,
            vkt_zero=zero,
        ))
    return records


@dataclass
class LineKpiRecord:
    """FIX KPIs of one base line, both directions together."""

    line: str
    pkt_km: float
    vkt_km: float
    pkt_per_vkt: Optional[float]
    load_factor: Optional[float]
    boardings: int
    denied_boardings: int

    def as_row(self) -> Dict:
        return asdict(self)


def compute_line_kpis(result: DayResult) -> List[LineKpiRecord]:
    """Per base line KPIs; directional line ids sharing a base line are summed."""
    records: List[LineKpiRecord] = []
    for line in sorted(result.lines):
        stats = result.lines[line]
        records.append(LineKpiRecord(
            line=line,
            pkt_km=stats.passenger_m / 1000.0,
            vkt_km=stats.vehicle_m / 1000.0,
            pkt_per_vkt=None if stats.vehicle_m <= 0 else stats.passenger_m / stats.vehicle_m,
            load_factor=None if stats.seat_m <= 0 else stats.passenger_m / stats.seat_m,
            boardings=stats.boardings,
            denied_boardings=stats.denied_boardings,
        ))
    return records


def mode_split_rows(result: DayResult, path_types: Mapping[str, Sequence[str]]) -> List[Dict]:
    """Realized path-type counts and shares per OD category.

    Every path type available in a category gets a row, with zero count when
    unused, plus a row for stranded travelers. Shares sum to one per
    category whenever the category had travelers.
    """
    counts: Dict[str, Counter] = {category: Counter() for category in path_types}
    for outcome in result.travelers:
        counts.setdefault(outcome.category, Counter())[outcome.path_type] += 1

    rows: List[Dict] = []
    for category in sorted(counts):
        types = sorted(set(path_types.get(category, ())) | set(counts[category]) | {STRANDED})
        total = sum(counts[category].values())
        for path_type in types:
            n = counts[category][path_type]
            rows.append({
                "category": category,
                "path_type": path_type,
                "count": n,
                "share": n / total if total else 0.0,
            })
    return rows
