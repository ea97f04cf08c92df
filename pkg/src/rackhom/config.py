"""
Configuration management for rackhom
Handles budgets, output defaults and the RACKHOM_BUDGET override
"""

import json
import os
from dataclasses import dataclass, asdict, fields
from pathlib import Path
from typing import Any, Dict, Optional

from .errors import ParseError
from .utils import CONFIG_FILE, get_logger

logger = get_logger(__name__)

BUDGET_ENV = "RACKHOM_BUDGET"


@dataclass
class BudgetConfig:
    """Desk-scale limits enforced before any computation starts"""
    max_degree: int = 6
    max_order: int = 8
    oracle_candidates: int = 10 ** 8


@dataclass
class OutputConfig:
    """Output defaults"""
    format: str = "text"


@dataclass
class AppConfig:
    """Main application configuration"""
    budgets: BudgetConfig = None
    output: OutputConfig = None
    workers: int = 1
    log_level: str = "INFO"

    def __post_init__(self):
        if self.budgets is None:
            self.budgets = BudgetConfig()
        if self.output is None:
            self.output = OutputConfig()


def _known(cls, data: Dict[str, Any]) -> Dict[str, Any]:
    # Filter out unknown fields for forward compatibility
    names = {f.name for f in fields(cls)}
    return {k: v for k, v in data.items() if k in names}


def parse_budget_override(text: str, budgets: BudgetConfig) -> BudgetConfig:
    """Apply a `key=value,key=value` override string to a budget config"""
    values = asdict(budgets)
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, raw = part.partition("=")
        key = key.strip()
        if not sep or key not in values:
            raise ParseError(f"Invalid {BUDGET_ENV} entry: {part!r}")
        try:
            value = int(raw.strip())
        except ValueError:
            raise ParseError(f"Invalid {BUDGET_ENV} value for {key}: {raw!r}")
        if value < 0:
            raise ParseError(f"{BUDGET_ENV} value for {key} must be non-negative")
        values[key] = value
    return BudgetConfig(**values)


class ConfigManager:
    """Manages application configuration"""

    def __init__(self, config_file: Optional[Path] = None, environ: Optional[Dict[str, str]] = None):
        self.config_file = Path(config_file) if config_file else CONFIG_FILE
        self.environ = os.environ if environ is None else environ
        self.config: AppConfig = self.load()

    def load(self) -> AppConfig:
        """Load configuration from file, then apply the environment override"""
        config = AppConfig()
        if self.config_file.exists():
            try:
                with open(self.config_file, 'r') as f:
                    data = json.load(f)

                # Reconstruct nested dataclasses
                if isinstance(data.get('budgets'), dict):
                    data['budgets'] = BudgetConfig(**_known(BudgetConfig, data['budgets']))
                if isinstance(data.get('output'), dict):
                    data['output'] = OutputConfig(**_known(OutputConfig, data['output']))

                config = AppConfig(**_known(AppConfig, data))
                logger.info(f"Configuration loaded from {self.config_file}")
            except (OSError, ValueError, TypeError) as e:
                logger.error(f"Error loading config {self.config_file}: {e}")
                config = AppConfig()

        override = self.environ.get(BUDGET_ENV)
        if override:
            config.budgets = parse_budget_override(override, config.budgets)
            logger.info(f"Budgets overridden by {BUDGET_ENV}: {asdict(config.budgets)}")
        return config

    def save(self) -> bool:
        """Save configuration to file"""
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w') as f:
                json.dump(asdict(self.config), f, indent=2)
            return True
        except OSError as e:
            logger.error(f"Error saving config: {e}")
            return False

    @property
    def budgets(self) -> BudgetConfig:
        return self.config.budgets
