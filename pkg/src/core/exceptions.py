"""Exception hierarchy for the simulator."""

from dataclasses import dataclass
from typing import Iterable, List


class SimulationError(Exception):
    """Base class for all simulator errors."""


@dataclass(frozen=True)
class Violation:
    """One configuration problem with its dotted location."""

    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class ScenarioError(SimulationError):
    """Scenario file failed schema or cross-reference validation."""

    def __init__(self, violations: Iterable[Violation], source: str = "<scenario>"):
        self.violations: List[Violation] = list(violations)
        self.source = source
        lines = "\n".join(f"  {source}: {v}" for v in self.violations)
        super().__init__(f"{len(self.violations)} scenario violation(s):\n{lines}")


class ChoiceSetError(SimulationError):
    """Choice-set generation left an OD without path alternatives."""


class LedgerError(SimulationError):
    """Experience ledger misuse (missing prior, repeated day update)."""


class InvariantViolation(SimulationError):
    """A runtime supply or traveler invariant failed."""


class OutputError(SimulationError):
    """Output directory cannot be written."""
