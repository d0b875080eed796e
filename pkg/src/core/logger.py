"""Structured logging for the FlexTransit simulator: per-component levels and run-scoped context."""

import logging
import sys
import threading
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import structlog
from structlog.typing import FilteringBoundLogger, Processor

from src.core.config import run_defaults, settings


def _level_number(level: str) -> int:
    number = logging.getLevelName(level.upper())
    if not isinstance(number, int):
        raise ValueError(f"unknown log level: {level}")
    return number


class ComponentLogger:
    """Events of one simulator component, filtered by the level configured for it.

    Each event carries an operation name and a context dict. Run coordinates bound
    with ``run_context`` (scenario, variant, replication) are merged into every event.
    """

    _registry: Dict[str, "ComponentLogger"] = {}
    _registry_lock = threading.Lock()

    def __init__(self, component: str, level: str = "INFO"):
        self.component = component
        self.level = level.upper()
        self._threshold = _level_number(self.level)
        self._logger = structlog.get_logger(f"flextransit.{component}").bind(component=component)

    @classmethod
    def for_component(cls, component: str, level: Optional[str] = None) -> "ComponentLogger":
        with cls._registry_lock:
            found = cls._registry.get(component)
            if found is None:
                found = cls(component, level or run_defaults.component_level(component, settings.log_level))
                cls._registry[component] = found
            return found

    def enabled(self, level: str) -> bool:
        return _level_number(level) >= self._threshold

    def log(self, level: str, operation: str, message: str, context: Optional[Dict] = None,
            duration_ms: Optional[float] = None, error: Optional[Exception] = None):
        if not self.enabled(level):
            return
        event: Dict[str, Any] = {"operation": operation, "context": context or {}}
        if duration_ms is not None:
            event["duration_ms"] = round(duration_ms, 2)
        if error is not None:
            event["error"] = {"type": type(error).__name__, "message": str(error)}
        getattr(self._logger, level.lower())(message, **event)

    def debug(self, operation: str, message: str, context: Optional[Dict] = None):
        self.log("DEBUG", operation, message, context)

    def info(self, operation: str, message: str, context: Optional[Dict] = None,
             duration_ms: Optional[float] = None):
        self.log("INFO", operation, message, context, duration_ms)

    def warning(self, operation: str, message: str, context: Optional[Dict] = None):
        self.log("WARNING", operation, message, context)

    def error(self, operation: str, message: str, context: Optional[Dict] = None,
              error: Optional[Exception] = None):
        self.log("ERROR", operation, message, context, error=error)

    def log_performance(self, operation: str, start_time: float, context: Optional[Dict] = None):
        """INFO event with the wall-clock time elapsed since ``start_time``."""
        elapsed_ms = (time.time() - start_time) * 1000
        self.info(operation, f"{operation} finished in {elapsed_ms:.0f}ms", context, elapsed_ms)


@contextmanager
def run_context(**coordinates: Any) -> Iterator[None]:
    """Bind run coordinates to every event logged inside the block; None values are skipped."""
    bound = {key: value for key, value in coordinates.items() if value is not None}
    with structlog.contextvars.bound_contextvars(**bound):
        yield


def _processors(json_format: bool) -> List[Processor]:
    renderer: Processor = structlog.processors.JSONRenderer() if json_format else structlog.dev.ConsoleRenderer()
    return [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        renderer,
    ]


def setup_logging(log_level: Optional[str] = None, log_file: Optional[str] = None,
                  json_format: Optional[bool] = None) -> FilteringBoundLogger:
    """Route structlog through stdlib logging on stderr, stdout stays free for command output.

    Args:
        log_level: Global level; components may be stricter via config.yaml
        log_file: Extra log file; empty keeps stderr only
        json_format: JSON lines instead of the console renderer (default from config.yaml)

    Returns:
        Root structlog logger
    """
    level = _level_number(log_level or settings.log_level)
    target = settings.log_file if log_file is None else log_file
    if json_format is None:
        json_format = run_defaults.logging.get("format", "console") == "json"

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(target, encoding="utf-8"))
    logging.basicConfig(format="%(message)s", level=level, handlers=handlers, force=True)

    structlog.configure(
        processors=_processors(json_format),
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )
    return structlog.get_logger("flextransit")


logger = setup_logging()


def get_component_logger(component: str, level: Optional[str] = None) -> ComponentLogger:
    return ComponentLogger.for_component(component, level)
