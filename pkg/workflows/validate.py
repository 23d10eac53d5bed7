# workflows/validate.py
"""`fsmsolc validate <file>`: diagnostics to stderr (or JSON to stdout), exit 0 iff no Errors."""

from __future__ import annotations

import logging
import sys

from models.diagnostic import has_errors
from schemas.cli import CliConfig
from schemas.reports import diagnostics_json

from compiler.fsm.validate import validate

from .common import EXIT_ERROR, EXIT_OK, read_contract

log = logging.getLogger(__name__)


def run(cfg: CliConfig) -> int:
    contract = read_contract(cfg.input_path)
    diagnostics = validate(contract)
    if cfg.format == "json":
        print(diagnostics_json(diagnostics))
    else:
        for d in diagnostics:
            print(d, file=sys.stderr)
    errors = sum(d.is_error for d in diagnostics)
    log.info("%s: %d error(s), %d warning(s)", contract.name, errors, len(diagnostics) - errors)
    return EXIT_ERROR if has_errors(diagnostics) else EXIT_OK
