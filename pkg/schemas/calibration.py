# schemas/calibration.py
# ─────────────────────────────────────────────────────────────────────────────
"""
On-disk format of ``calibration.json``.

Plugin combinations are keyed by ``PluginSet.slug`` (``none``, ``locking``,
``counter``, ``locking-counter``). Keys starting with ``_`` (``_provenance``)
are documentation and ignored.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, model_validator


class PercentCheck(BaseModel):
    transition: str
    plugins: str
    expected_percent: int = Field(alias="expectedPercent")

    model_config = ConfigDict(frozen=True, populate_by_name=True)


class GasCalibration(BaseModel):
    per_transition_overhead: dict[str, NonNegativeInt] = Field(alias="perTransitionOverhead")
    deployment_base: NonNegativeInt = Field(alias="deploymentBase")
    deployment_by_plugins: dict[str, NonNegativeInt] = Field(alias="deploymentByPlugins")
    measured: dict[str, dict[str, NonNegativeInt]] = Field(default_factory=dict)
    spread_limits: dict[str, NonNegativeInt] = Field(default_factory=dict, alias="spreadLimits")
    percent_checks: list[PercentCheck] = Field(default_factory=list, alias="percentChecks")
    provenance: Optional[str] = Field(default=None, alias="_provenance")

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="ignore")

    @model_validator(mode="after")
    def _baseline_present(self) -> "GasCalibration":
        if self.measured and "none" not in self.measured:
            raise ValueError("measured tables need a 'none' (baseline) column")
        return self

    @property
    def baseline(self) -> dict[str, int]:
        return dict(self.measured.get("none", {}))

    def overhead_for(self, slug: str) -> int | None:
        if slug == "none":
            return 0
        return self.per_transition_overhead.get(slug)

    def deployment_for(self, slug: str) -> int | None:
        if slug == "none":
            return self.deployment_base
        return self.deployment_by_plugins.get(slug)
