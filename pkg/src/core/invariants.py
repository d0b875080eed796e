"""Runtime invariant assertions, active under the test profile."""

from typing import Any, Dict, Optional

from src.core.config import settings
from src.core.exceptions import InvariantViolation


class InvariantChecker:
    """Raise on violated invariants when enabled, otherwise a no-op."""

    def __init__(self, enabled: Optional[bool] = None):
        self.enabled = settings.check_invariants if enabled is None else enabled
        self.checks = 0

    def check(self, condition: bool, name: str, context: Optional[Dict[str, Any]] = None):
        if not self.enabled:
            return
        self.checks += 1
        if not condition:
            raise InvariantViolation(f"{name} violated: {context or {}}")
