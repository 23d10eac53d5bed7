# schemas/cli.py
# ─────────────────────────────────────────────────────────────────────────────
"""Validated command-line configuration, built from the argparse namespace."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Final, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.plugins import PLUGIN_NAMES, PluginSet

DEFAULT_CREATION_TIME: Final[int] = 1_000
DEFAULT_CREATOR: Final[str] = "creator"


class Command(str, Enum):
    VALIDATE = "validate"
    EMIT = "emit"
    SIMULATE = "simulate"
    SEARCH = "search"
    GAS_REPORT = "gas-report"


class CliConfig(BaseModel):
    command: Command
    input_path: Path
    output_path: Optional[Path] = None
    plugins: list[str] = Field(default_factory=list)
    format: Literal["text", "json"] = "text"
    schedule_path: Optional[Path] = None
    depth: int = Field(default=2, ge=1, le=3)
    strict: bool = False
    creation_time: int = Field(default=DEFAULT_CREATION_TIME, ge=0)
    creator: str = DEFAULT_CREATOR
    tolerance: int = Field(default=25, ge=0)
    pragma: str = Field(default="^0.4.17", min_length=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("plugins", mode="before")
    @classmethod
    def _split(cls, value):
        if isinstance(value, str):
            value = value.split(",")
        names = [v.strip() for v in (value or []) if v and v.strip()]
        unknown = sorted(set(names) - set(PLUGIN_NAMES))
        if unknown:
            raise ValueError(f"unknown plugin(s) {', '.join(unknown)}; choose from {', '.join(PLUGIN_NAMES)}")
        return names

    @property
    def plugin_set(self) -> PluginSet:
        return PluginSet.from_names(self.plugins)
