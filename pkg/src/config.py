import json
import os
from dataclasses import dataclass
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError
from .records import UnmappedPolicy
from .taxonomy import ClassificationConfig
from .trade_metrics import DependenceRule, SurplusMode

OUT_DIR_ENV = "SCITRADE_OUT_DIR"
LOG_DIR_ENV = "SCITRADE_LOG_DIR"

DEFAULT_OUT_DIR = "out"
DEFAULT_LOG_DIR = "logs"


@dataclass(frozen=True)
class Settings:
    out_dir: str
    log_dir: str


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    """Read directory settings from the environment (and .env, if present)."""
    load_dotenv(dotenv_path=dotenv_path, override=False)
    return Settings(
        out_dir=os.getenv(OUT_DIR_ENV, DEFAULT_OUT_DIR),
        log_dir=os.getenv(LOG_DIR_ENV, DEFAULT_LOG_DIR),
    )


class AnalysisConfig(BaseModel):
    """Everything ``--config <json>`` can set."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    classification: ClassificationConfig = Field(default_factory=ClassificationConfig)
    dependence_rule: DependenceRule = DependenceRule.ARGMAX
    surplus_mode: SurplusMode = SurplusMode.POSITIVE_ONLY
    # not a discipline; left out of acceleration partitions
    exclude_fields: List[str] = Field(default_factory=lambda: ["MULTIDISCIPLINARY SCIENCES"])
    unmapped_policy: UnmappedPolicy = UnmappedPolicy.STRICT


def load_config(path: Optional[str] = None) -> AnalysisConfig:
    if path is None:
        return AnalysisConfig()
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    except UnicodeDecodeError:
        raise ConfigError(f"{path}: not valid UTF-8") from None
    try:
        return AnalysisConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"{path}: invalid config: {exc}") from None
