# workflows/gas_report.py
"""`fsmsolc gas-report <file> --plugins locking`: calibrated estimate plus the calibration check."""

from __future__ import annotations

import logging

from schemas.cli import CliConfig

from compiler.gas import check_calibration, contract_baseline, estimate, load_calibration, render_gas_report

from .common import EXIT_FINDING, EXIT_OK, load_woven, write_output

log = logging.getLogger(__name__)


def run(cfg: CliConfig) -> int:
    aug = load_woven(cfg)
    calibration = load_calibration()
    baseline = contract_baseline([t.name for t in aug.base.transitions], calibration)
    est = estimate(baseline, aug.plugins, calibration)
    check = check_calibration(calibration, cfg.tolerance)
    write_output(render_gas_report(est, baseline, cfg.format, check), cfg.output_path)
    if not check.passed:
        log.warning("calibration check failed: %s", ", ".join(f"{c.kind}:{c.subject}" for c in check.failures))
        return EXIT_FINDING
    return EXIT_OK
