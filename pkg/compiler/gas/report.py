# compiler/gas/report.py
# ─────────────────────────────────────────────────────────────────────────────
"""Text / JSON rendering of gas estimates and calibration checks."""

from __future__ import annotations

import json
from typing import Literal, Optional

import pandas as pd

from schemas.reports import SCHEMA_VERSION

from .model import CalibrationReport, GasEstimate

OutputFormat = Literal["text", "json"]

_CHECK_COLUMNS = ("kind", "subject", "value", "limit", "asserted", "passed")


def estimate_frame(est: GasEstimate, baseline: dict[str, int]) -> pd.DataFrame:
    rows = [
        {
            "transition": name,
            "baseline": baseline.get(name),
            "predicted": gas,
            "overhead %": est.overhead_percent.get(name),
        }
        for name, gas in est.per_transition.items()
    ]
    return pd.DataFrame(rows, columns=["transition", "baseline", "predicted", "overhead %"])


def calibration_frame(report: CalibrationReport) -> pd.DataFrame:
    df = pd.DataFrame([c.model_dump() for c in report.checks], columns=list(_CHECK_COLUMNS))
    df["verdict"] = [
        ("pass" if c.passed else "FAIL") if c.asserted else "info"
        for c in report.checks
    ]
    return df.drop(columns=["asserted", "passed"])


def render_gas_report(
    est: GasEstimate,
    baseline: dict[str, int],
    fmt: OutputFormat = "text",
    check: Optional[CalibrationReport] = None,
) -> str:
    if fmt == "json":
        payload = {
            "schemaVersion": SCHEMA_VERSION,
            "plugins": est.plugins,
            "deployment": est.deployment,
            "perTransition": est.per_transition,
            "overheadPercent": est.overhead_percent,
        }
        if check is not None:
            payload["calibration"] = {
                "tolerance": check.tolerance,
                "passed": check.passed,
                "checks": [c.model_dump() for c in check.checks],
                "deploymentResidual": check.deployment_residual,
            }
        return json.dumps(payload, indent=2)

    lines = [
        f"plugins: {est.plugins}",
        f"deployment: {est.deployment}",
        "",
        estimate_frame(est, baseline).to_string(index=False),
    ]
    if check is not None:
        lines += [
            "",
            f"calibration check (tolerance {check.tolerance}): {'pass' if check.passed else 'FAIL'}",
            calibration_frame(check).to_string(index=False),
        ]
        if check.deployment_residual is not None:
            lines.append(f"deployment additivity residual (informational): {check.deployment_residual}")
    return "\n".join(lines) + "\n"
