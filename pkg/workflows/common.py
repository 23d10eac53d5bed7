# workflows/common.py
"""
Shared plumbing for the command workflows: logging, exit codes, loading and
weaving the input contract, writing results.
"""

from __future__ import annotations

import logging
import os
import sys
from pathlib import Path
from typing import Final

from models.contract import Contract
from models.errors import ContractParseError
from models.plugins import AugmentedContract, PluginSet
from schemas.cli import CliConfig
from schemas.reports import diagnostics_json

from compiler.dsl import parse_contract
from compiler.weaver import apply_plugins, relax_for_plugins

# ──────────────────────────────────────────────────────────────────────────────
# Configuration
# ──────────────────────────────────────────────────────────────────────────────
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

EXIT_OK: Final[int] = 0
EXIT_ERROR: Final[int] = 1      # I/O, parse, validation, tooling errors
EXIT_FINDING: Final[int] = 2    # rejection, counterexample, failed calibration
EXIT_USAGE: Final[int] = 64

log = logging.getLogger(__name__)


# ──────────────────────────────────────────────────────────────────────────────
# Logging
# ──────────────────────────────────────────────────────────────────────────────
def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s:%(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    for lib in ("lark",):
        logging.getLogger(lib).setLevel(logging.WARNING)
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif quiet:
        logging.getLogger().setLevel(logging.WARNING)


# ──────────────────────────────────────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────────────────────────────────────
def read_contract(path: Path) -> Contract:
    """Parse ``path``; the file itself is never written."""
    return parse_contract(Path(path).read_text(encoding="utf-8"))


def report_parse_error(exc: ContractParseError, fmt: str) -> None:
    if fmt == "json":
        print(diagnostics_json(exc.diagnostics))
    for d in exc.diagnostics:
        print(d, file=sys.stderr)


def weave(contract: Contract, plugins: PluginSet, strict: bool) -> AugmentedContract:
    """Apply ``plugins``; unless strict, first relax what the plugin set cannot honour."""
    if not strict:
        contract, stripped = relax_for_plugins(contract, plugins)
        if stripped:
            log.info("relaxed %d item(s) for [%s]; use --strict to refuse instead", len(stripped), plugins.slug)
    return apply_plugins(contract, plugins)


def load_woven(cfg: CliConfig) -> AugmentedContract:
    return weave(read_contract(cfg.input_path), cfg.plugin_set, cfg.strict)


def write_output(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    log.info("wrote %s (%d bytes)", path, len(text.encode("utf-8")))
