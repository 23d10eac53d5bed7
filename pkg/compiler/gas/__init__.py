# compiler/gas/__init__.py
from .model import (
    CalibrationReport, GasEstimate, check_calibration, contract_baseline, estimate, load_calibration,
)
from .report import render_gas_report
