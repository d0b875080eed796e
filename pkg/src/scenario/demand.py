"""Demand generators: scripted cohorts, per-OD Poisson arrivals and category-share spreading."""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from src.engine.world import DemandModel, TravelerSpec
from src.fixed.lines import FixLine
from src.network.network import Network
from src.paths.generation import od_category


@dataclass(frozen=True)
class Cohort:
    origin: str
    destination: str
    size: int
    time: float
    id_prefix: str = "k"
    shuffle: bool = True

    def traveler_ids(self) -> List[str]:
        width = max(3, len(str(self.size - 1)))
        return [f"{self.id_prefix}{i:0{width}d}" for i in range(self.size)]


class CohortDemand:
    """The same travelers every day; their processing order is reshuffled daily."""

    def __init__(self, cohorts: Sequence[Cohort]):
        self.cohorts = list(cohorts)

    def ods(self) -> List[Tuple[str, str]]:
        return sorted({(c.origin, c.destination) for c in self.cohorts})

    def generate(self, day: int, rng: np.random.Generator) -> List[TravelerSpec]:
        specs: List[TravelerSpec] = []
        for cohort in self.cohorts:
            ids = cohort.traveler_ids()
            order = rng.permutation(len(ids)) if cohort.shuffle else np.arange(len(ids))
            specs.extend(TravelerSpec(ids[i], cohort.origin, cohort.destination, cohort.time) for i in order)
        return specs


class PoissonDemand:
    """Independent Poisson arrivals per OD pair over the demand window.

    Rates are passengers per hour. Travelers are anonymous from day to day.
    """

    def __init__(self, rates: Mapping[Tuple[str, str], float], window_start: float, window_end: float,
                 scale: float = 1.0):
        self.rates = {od: rate * scale for od, rate in rates.items() if rate > 0}
        self.window_start = window_start
        self.window_end = window_end

    def ods(self) -> List[Tuple[str, str]]:
        return sorted(self.rates)

    @property
    def expected_travelers(self) -> float:
        hours = (self.window_end - self.window_start) / 3600.0
        return float(sum(self.rates.values()) * hours)

    def generate(self, day: int, rng: np.random.Generator) -> List[TravelerSpec]:
        hours = (self.window_end - self.window_start) / 3600.0
        specs: List[TravelerSpec] = []
        for origin, destination in self.ods():
            n = int(rng.poisson(self.rates[(origin, destination)] * hours))
            times = np.sort(rng.uniform(self.window_start, self.window_end, n))
            specs.extend(
                TravelerSpec(f"{origin}-{destination}-{k:05d}", origin, destination, float(t))
                for k, t in enumerate(times)
            )
        specs.sort(key=lambda s: (s.time, s.id))
        return specs


class CompositeDemand:
    """Concatenation of demand models, merged by arrival time (stable)."""

    def __init__(self, parts: Sequence[DemandModel]):
        self.parts = list(parts)

    def ods(self) -> List[Tuple[str, str]]:
        return sorted({od for part in self.parts for od in part.ods()})

    def generate(self, day: int, rng: np.random.Generator) -> List[TravelerSpec]:
        specs = [spec for part in self.parts for spec in part.generate(day, rng)]
        specs.sort(key=lambda s: s.time)
        return specs


def category_demand(net: Network, line: FixLine, rate: float,
                    shares: Mapping[str, float]) -> Dict[Tuple[str, str], float]:
    """Spread a line/direction total over OD pairs along the line.

    Each category receives ``rate * share`` passengers per hour, divided
    uniformly over the stop pairs (i < j along the line) of that category.

    Args:
        net: Network with corridor/branch stop tags
        line: The line (one direction)
        rate: Total passengers per hour boarding this line direction
        shares: OD category shares (C2C, C2B, B2C, B2B)

    Returns:
        Passengers per hour per OD pair
    """
    pairs: Dict[str, List[Tuple[str, str]]] = defaultdict(list)
    for i, origin in enumerate(line.stops[:-1]):
        for destination in line.stops[i + 1:]:
            pairs[od_category(net, origin, destination)].append((origin, destination))

    rates: Dict[Tuple[str, str], float] = defaultdict(float)
    for category in sorted(shares):
        share = shares[category]
        if share <= 0:
            continue
        members = pairs.get(category, [])
        if not members:
            raise ValueError(f"line {line.id}: no {category} stop pairs for a positive share")
        for od in members:
            rates[od] += rate * share / len(members)
    return dict(rates)
