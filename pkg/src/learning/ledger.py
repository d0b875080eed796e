"""Experience ledger: priors, anticipations and the day-to-day MSA update."""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from src.core.exceptions import LedgerError
from src.core.logger import get_component_logger
from src.learning.crowding import CrowdingCurve, weighted_ivt, weighted_wait
from src.learning.experience import Quantity, RealizedLegExperience, Sharing, experience_group
from src.paths.alternatives import Mode, TransitLeg


PriorKey = Tuple[str, Quantity]
EntryKey = Tuple[str, str, Quantity]


@dataclass
class LedgerEntry:
    prior: float
    experience: Optional[float] = None
    n_exp: int = 0

    @property
    def anticipation(self) -> float:
        return self.prior if self.n_exp == 0 else self.experience


def build_priors(legs: Iterable[TransitLeg]) -> Dict[PriorKey, float]:
    """Prior knowledge per path component.

    FIX: half the (combined) headway as wait and the scheduled free-flow
    leg time as in-vehicle time. FLEX: immediate service (zero wait) and the
    shortest free-flow route time.
    """
    priors: Dict[PriorKey, float] = {}
    for leg in legs:
        if leg.mode is Mode.FIX:
            wait = leg.headway / 2.0 if math.isfinite(leg.headway) else 0.0
        else:
            wait = 0.0
        priors[(leg.key, Quantity.WAIT)] = wait
        priors[(leg.key, Quantity.IVT)] = leg.free_flow_time
    return priors


class ExperienceLedger:
    """Per (group, component, quantity) priors, accumulated experience and experience counts."""

    def __init__(self, priors: Dict[PriorKey, float]):
        self.priors = dict(priors)
        self.entries: Dict[EntryKey, LedgerEntry] = {}
        self.collected_days: Set[int] = set()

    def prior(self, component: str, quantity: Quantity) -> float:
        try:
            return self.priors[(component, quantity)]
        except KeyError:
            raise LedgerError(f"no prior for {component} ({Quantity(quantity).value})") from None

    def entry(self, group: str, component: str, quantity: Quantity) -> LedgerEntry:
        key = (group, component, quantity)
        if key not in self.entries:
            self.entries[key] = LedgerEntry(prior=self.prior(component, quantity))
        return self.entries[key]

    def anticipate(self, group: str, component: str, quantity: Quantity) -> float:
        entry = self.entries.get((group, component, quantity))
        if entry is None:
            return self.prior(component, quantity)
        return entry.anticipation

    def update(self, group: str, component: str, quantity: Quantity, day_mean: float) -> LedgerEntry:
        entry = self.entry(group, component, quantity)
        entry.n_exp += 1
        if entry.n_exp == 1:
            entry.experience = float(day_mean)
        else:
            entry.experience += (day_mean - entry.experience) / entry.n_exp
        return entry

    def snapshot(self, day: int) -> List[Dict]:
        """Ledger rows: group, component, quantity, prior, experience, n_exp."""
        return [
            {
                "day": day,
                "group": group,
                "component": component,
                "quantity": quantity.value,
                "prior": entry.prior,
                "experience": entry.experience,
                "n_exp": entry.n_exp,
            }
            for (group, component, quantity), entry in sorted(self.entries.items(),
                                                               key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value))
        ]


def anticipate(group: str, component: str, quantity: Quantity, ledger: ExperienceLedger) -> float:
    """Prior if the group has no experience of the component, else the accumulated experience."""
    return ledger.anticipate(group, component, quantity)


def msa_update(ledger: ExperienceLedger, group: str, component: str, quantity: Quantity,
               day_mean: float) -> LedgerEntry:
    """Method of successive averages step with divisor n_exp; the first step replaces the prior."""
    return ledger.update(group, component, quantity, day_mean)


def collect_day(experiences: Iterable[RealizedLegExperience], ledger: ExperienceLedger, day: int,
                sharing: Sharing, curve: CrowdingCurve) -> Dict[EntryKey, float]:
    """Fold one day's experiences into the ledger.

    Each experience is weighted per traveler (denied-boarding penalty,
    crowding multipliers), averaged within its group per component, and
    applied as one MSA step. Censored experiences are skipped.

    Args:
        experiences: All realized leg experiences of the day
        ledger: Ledger to update
        day: Day index
        sharing: Individual or OD-group experience sharing
        curve: Crowding curve and denied-boarding penalty

    Returns:
        Day means fed to the MSA update per (group, component, quantity)

    Raises:
        LedgerError: if the day was already collected
    """
    if day in ledger.collected_days:
        raise LedgerError(f"day {day} already collected into the ledger")

    samples: Dict[EntryKey, List[float]] = defaultdict(list)
    for exp in experiences:
        if exp.censored:
            continue
        group = experience_group(exp.traveler_id, exp.od, sharing)
        wait = weighted_wait(exp, curve)
        ivt = weighted_ivt(exp, curve)
        for component in exp.components:
            samples[(group, component, Quantity.WAIT)].append(wait)
            samples[(group, component, Quantity.IVT)].append(ivt)

    means: Dict[EntryKey, float] = {}
    for key in sorted(samples, key=lambda k: (k[0], k[1], k[2].value)):
        means[key] = float(np.mean(samples[key]))
        msa_update(ledger, key[0], key[1], key[2], means[key])

    ledger.collected_days.add(day)
    get_component_logger("learning").debug("collect_day", "Experiences collected", {
        "day": day,
        "components": len({key[1] for key in samples}),
        "updates": len(means),
    })
    return means


def learning_curve_rows(experiences: Iterable[RealizedLegExperience], curve: CrowdingCurve) -> List[Dict]:
    """Mean anticipated vs. experienced wait and weighted ivt per category, path type and leg mode."""
    buckets: Dict[Tuple[str, str, str], List[RealizedLegExperience]] = defaultdict(list)
    for exp in experiences:
        if not exp.censored:
            buckets[(exp.category, exp.path_type, exp.mode.value.upper())].append(exp)

    rows: List[Dict] = []
    for (category, path_type, mode) in sorted(buckets):
        group = buckets[(category, path_type, mode)]
        for quantity, anticipated, experienced in (
            (Quantity.WAIT, [e.anticipated_wait for e in group], [weighted_wait(e, curve) for e in group]),
            (Quantity.IVT, [e.anticipated_ivt for e in group], [weighted_ivt(e, curve) for e in group]),
        ):
            rows.append({
                "category": category,
                "path_type": path_type,
                "mode": mode,
                "quantity": quantity.value,
                "anticipated": float(np.mean(anticipated)),
                "experienced": float(np.mean(experienced)),
                "n": len(group),
            })
    return rows
