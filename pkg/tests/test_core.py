"""Tests for settings, run defaults, logging, invariant checks and errors."""

import sys
from pathlib import Path

import pytest
import structlog

sys.path.append(str(Path(__file__).parent.parent))

from src.core.config import RunDefaults, Settings, run_defaults
from src.core.exceptions import InvariantViolation, ScenarioError, SimulationError, Violation
from src.core.invariants import InvariantChecker
from src.core.logger import ComponentLogger, get_component_logger, run_context


class TestSettings:
    """Test environment-driven settings."""

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("OUTPUT_DIR", "runs/today")
        monkeypatch.setenv("LOG_LEVEL", "DEBUG")
        current = Settings()
        assert current.output_dir == "runs/today"
        assert current.log_level == "DEBUG"

    def test_test_profile_checks_invariants(self):
        assert Settings().check_invariants is True


class TestRunDefaults:
    """Test YAML run defaults."""

    def test_bundled_defaults(self):
        assert run_defaults.parallel >= 1
        assert run_defaults.component_level("decisions") == "WARNING"
        assert run_defaults.component_level("not_configured", "ERROR") == "ERROR"

    def test_custom_file(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("run:\n  parallel: 4\nlogging:\n  components:\n    engine: DEBUG\n", encoding="utf-8")
        defaults = RunDefaults(str(path))
        assert defaults.parallel == 4
        assert defaults.component_level("engine") == "DEBUG"

    def test_empty_file_falls_back(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("", encoding="utf-8")
        assert RunDefaults(str(path)).parallel == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            RunDefaults(str(tmp_path / "absent.yaml"))


class TestComponentLogger:
    """Test component levels and run context."""

    def test_level_filter(self):
        quiet = ComponentLogger("quiet_component", "WARNING")
        assert not quiet.enabled("INFO")
        assert quiet.enabled("error")

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            ComponentLogger("bad_component", "LOUD")

    def test_cached_per_component(self):
        assert get_component_logger("engine") is get_component_logger("engine")

    def test_run_context_binds_and_clears(self):
        structlog.contextvars.clear_contextvars()
        with run_context(scenario="toy", variant="flex1", replication=0, day=None):
            assert structlog.contextvars.get_contextvars() == {
                "scenario": "toy", "variant": "flex1", "replication": 0,
            }
        assert structlog.contextvars.get_contextvars() == {}


class TestInvariantChecker:
    """Test runtime invariant assertions."""

    def test_disabled_is_noop(self):
        checker = InvariantChecker(enabled=False)
        checker.check(False, "capacity")
        assert checker.checks == 0

    def test_enabled_raises(self):
        checker = InvariantChecker(enabled=True)
        checker.check(True, "capacity")
        with pytest.raises(InvariantViolation, match="fifo violated"):
            checker.check(False, "fifo", {"stop": "A"})
        assert checker.checks == 2

    def test_default_follows_settings(self):
        assert InvariantChecker().enabled is True


class TestErrors:
    """Test the error hierarchy."""

    def test_scenario_error_lists_violations(self):
        error = ScenarioError([Violation("lines[0].headway", "must be > 0"), Violation("name", "missing")],
                              "toy.yaml")
        assert isinstance(error, SimulationError)
        assert "2 scenario violation(s)" in str(error)
        assert "toy.yaml: lines[0].headway: must be > 0" in str(error)
        assert [v.location for v in error.violations] == ["lines[0].headway", "name"]
