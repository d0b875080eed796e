"""Configuration management for the FlexTransit simulator."""

from pathlib import Path
from typing import Any, Dict

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
SCENARIO_DIR = PROJECT_ROOT / "config" / "scenarios"


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    # Output
    output_dir: str = Field(default="results", alias="OUTPUT_DIR")

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_file: str = Field(default="", alias="LOG_FILE")

    # Runtime invariant assertions (capacity, FIFO, no-backtracking, wait identity)
    check_invariants: bool = Field(default=False, alias="CHECK_INVARIANTS")


class RunDefaults:
    """Run defaults loaded from YAML."""

    def __init__(self, config_path: str = str(PROJECT_ROOT / "config" / "config.yaml")):
        self.config_path = Path(config_path)
        self.config = self._load_config()

    def _load_config(self) -> dict:
        """Load configuration from YAML file."""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        with open(self.config_path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}

    @property
    def run(self) -> Dict[str, Any]:
        return self.config.get("run", {})

    @property
    def logging(self) -> Dict[str, Any]:
        return self.config.get("logging", {})

    @property
    def parallel(self) -> int:
        return int(self.run.get("parallel", 1))

    def component_level(self, component: str, default: str = "INFO") -> str:
        """Get the configured log level of a component."""
        return self.logging.get("components", {}).get(component, default)


# Global settings instance
settings = Settings()
run_defaults = RunDefaults()
