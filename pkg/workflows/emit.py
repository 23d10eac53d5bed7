# workflows/emit.py
"""`fsmsolc emit <file> --plugins ... -o out.sol`: Solidity that passed the structural self-check."""

from __future__ import annotations

import logging
import sys

from schemas.cli import CliConfig

from compiler.solidity import EmitOptions, emit_solidity, structural_check

from .common import EXIT_ERROR, EXIT_OK, load_woven, write_output

log = logging.getLogger(__name__)


def run(cfg: CliConfig) -> int:
    aug = load_woven(cfg)
    solidity = emit_solidity(aug, EmitOptions(pragma_version=cfg.pragma))
    findings = structural_check(solidity, aug)
    if findings:
        for d in findings:
            print(d, file=sys.stderr)
        log.error("emitted Solidity for %s failed its structural check", aug.base.name)
        return EXIT_ERROR
    write_output(solidity, cfg.output_path)
    return EXIT_OK
