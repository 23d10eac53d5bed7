# workflows/simulate.py
"""`fsmsolc simulate <file> --schedule s.json`: prints the trace, exit 2 on any top-level rejection."""

from __future__ import annotations

import logging

from schemas.cli import CliConfig
from schemas.reports import trace_json, trace_text
from schemas.schedule import load_schedule

from compiler.interpreter import run_schedule

from .common import EXIT_FINDING, EXIT_OK, load_woven, write_output

log = logging.getLogger(__name__)


def run(cfg: CliConfig) -> int:
    aug = load_woven(cfg)
    calls = load_schedule(cfg.schedule_path)
    trace = run_schedule(aug, cfg.creation_time, cfg.creator, calls)
    write_output(trace_json(trace) + "\n" if cfg.format == "json" else trace_text(trace), cfg.output_path)
    rejected = [e for e in trace.top_level if not e.accepted]
    if rejected:
        log.info("%d of %d invocation(s) rejected", len(rejected), len(trace.top_level))
        return EXIT_FINDING
    return EXIT_OK
