# compiler/gas/model.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Calibrated gas model for the locking / counter plugins.

Design notes
------------
* Prediction is additive: baseline + the calibrated constant for the enabled
  combination. Only combinations with a calibrated constant are supported;
  anything involving timed transitions or access control is E_UNCALIBRATED.
* ``check_calibration`` re-derives the constant-overhead and additivity
  observations from the measured tables. Spreads are asserted only for
  plugins with a published bound (``spreadLimits``); the deployment residual
  is reported without a verdict.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Final, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from models.errors import GasModelError
from models.plugins import PluginSet
from schemas.calibration import GasCalibration

log = logging.getLogger(__name__)

CALIBRATION_ENV: Final[str] = "FSMSOLC_CALIBRATION"
DEFAULT_CALIBRATION_PATH: Final[Path] = Path(__file__).resolve().parents[2] / "calibration.json"
DEFAULT_TOLERANCE: Final[int] = 25

LOCKING: Final[str] = PluginSet(locking=True).slug
COUNTER: Final[str] = PluginSet(transition_counter=True).slug
BOTH: Final[str] = PluginSet(locking=True, transition_counter=True).slug


class GasEstimate(BaseModel):
    plugins: str
    per_transition: dict[str, int]
    deployment: int
    overhead_percent: dict[str, float]

    model_config = ConfigDict(frozen=True)


class CalibrationCheck(BaseModel):
    kind: str                  # spread | additivity | percent
    subject: str               # plugin slug or transition
    value: float
    limit: float
    asserted: bool = True
    passed: bool

    model_config = ConfigDict(frozen=True)


class CalibrationReport(BaseModel):
    tolerance: int
    checks: list[CalibrationCheck] = Field(default_factory=list)
    deployment_residual: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    @property
    def failures(self) -> list[CalibrationCheck]:
        return [c for c in self.checks if c.asserted and not c.passed]


# ── loading ──────────────────────────────────────────────────────────────────
def load_calibration(path: str | os.PathLike | None = None) -> GasCalibration:
    """Read calibration tables from ``path``, $FSMSOLC_CALIBRATION or the shipped file."""
    resolved = Path(path or os.getenv(CALIBRATION_ENV) or DEFAULT_CALIBRATION_PATH)
    try:
        raw = resolved.read_text(encoding="utf-8")
        calibration = GasCalibration.model_validate(json.loads(raw))
    except (OSError, json.JSONDecodeError, ValidationError) as exc:
        raise GasModelError(f"cannot load calibration {resolved}: {exc}", code="E_CALIBRATION_FILE") from exc
    log.debug("calibration loaded from %s", resolved)
    return calibration


# ── estimate ─────────────────────────────────────────────────────────────────
def estimate(
    baseline: Mapping[str, int],
    plugins: PluginSet,
    calibration: GasCalibration | None = None,
) -> GasEstimate:
    """Baseline plus the calibrated per-transition constant; deployment from the tables."""
    calibration = calibration or load_calibration()
    slug = plugins.slug
    overhead = calibration.overhead_for(slug) if not (plugins.timed_transitions or plugins.access_control) else None
    deployment = calibration.deployment_for(slug)
    if overhead is None or deployment is None:
        raise GasModelError(f"no calibrated gas constants for plugin set [{slug}]")

    per_transition = {name: gas + overhead for name, gas in baseline.items()}
    percent = {
        name: round(100.0 * overhead / gas, 2) if gas else 0.0
        for name, gas in baseline.items()
    }
    return GasEstimate(plugins=slug, per_transition=per_transition, deployment=deployment, overhead_percent=percent)


def contract_baseline(transitions: list[str], calibration: GasCalibration) -> dict[str, int]:
    """Baseline entries for ``transitions``; unmeasured ones are left out with a warning."""
    measured = calibration.baseline
    missing = [t for t in transitions if t not in measured]
    for name in missing:
        log.warning("no baseline gas for transition %s; left out of the estimate", name)
    return {t: measured[t] for t in transitions if t in measured}


# ── calibration check ────────────────────────────────────────────────────────
def _overheads(calibration: GasCalibration, slug: str) -> dict[str, int]:
    base = calibration.baseline
    column = calibration.measured.get(slug, {})
    return {t: column[t] - base[t] for t in base if t in column}


def check_calibration(calibration: GasCalibration, tolerance: int = DEFAULT_TOLERANCE) -> CalibrationReport:
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    report = CalibrationReport(tolerance=tolerance)

    for slug in calibration.measured:
        if slug == "none":
            continue
        overheads = _overheads(calibration, slug)
        if not overheads:
            continue
        spread = max(overheads.values()) - min(overheads.values())
        limit = calibration.spread_limits.get(slug)
        report.checks.append(CalibrationCheck(
            kind="spread",
            subject=slug,
            value=spread,
            limit=limit if limit is not None else spread,
            asserted=limit is not None,
            passed=limit is None or spread <= limit,
        ))

    lock, count, both = (_overheads(calibration, s) for s in (LOCKING, COUNTER, BOTH))
    for transition in sorted(set(lock) & set(count) & set(both)):
        residual = both[transition] - lock[transition] - count[transition]
        report.checks.append(CalibrationCheck(
            kind="additivity", subject=transition, value=residual, limit=tolerance,
            passed=abs(residual) <= tolerance,
        ))

    base = calibration.baseline
    for check in calibration.percent_checks:
        overhead = _overheads(calibration, check.plugins).get(check.transition)
        if overhead is None or not base.get(check.transition):
            report.checks.append(CalibrationCheck(
                kind="percent", subject=check.transition, value=float("nan"),
                limit=check.expected_percent, passed=False,
            ))
            continue
        percent = 100.0 * overhead / base[check.transition]
        report.checks.append(CalibrationCheck(
            kind="percent", subject=check.transition, value=round(percent, 2),
            limit=check.expected_percent, passed=round(percent) == check.expected_percent,
        ))

    deployments = [calibration.deployment_for(s) for s in (LOCKING, COUNTER, BOTH)]
    if all(d is not None for d in deployments):
        d_lock, d_count, d_both = (d - calibration.deployment_base for d in deployments)
        report.deployment_residual = d_both - d_lock - d_count

    log.debug("calibration check: %d checks, %d failures", len(report.checks), len(report.failures))
    return report
