# workflows/search.py
"""
`fsmsolc search <file> --depth 2`: bounded reentrancy search.
With `--schedule s.json` it instead checks the listed calls for ordering dependence.
Exit 0 = no finding, 2 = counterexample.
"""

from __future__ import annotations

import json
import logging

from schemas.cli import CliConfig
from schemas.reports import SCHEMA_VERSION, trace_payload, trace_text
from schemas.schedule import invocation_record, load_schedule

from compiler.interpreter import SearchBounds, search_order_dependence, search_reentrancy
from compiler.interpreter.search import DEFAULT_ATTACKER, OrderWitness, ReentrancyWitness

from .common import EXIT_FINDING, EXIT_OK, load_woven, write_output

log = logging.getLogger(__name__)

NO_FINDING = "no finding"


def _reentrancy_text(w: ReentrancyWitness) -> str:
    return "reentrancy counterexample\n" + trace_text(w.trace) + (
        f"serial: state={w.serial_state.current_state} balance={w.serial_state.balance} "
        f"store={w.serial_state.store}\n"
    )


def _order_text(w: OrderWitness) -> str:
    reason = "" if w.reason == "divergent" else f"reason: {w.reason}\n"
    return (
        f"order dependence: {w.first} vs {w.second}\n"
        f"{reason}"
        f"-- order {w.first}\n{trace_text(w.first_trace)}"
        f"-- order {w.second}\n{trace_text(w.second_trace)}"
    )


def _json(kind: str, witness) -> str:
    payload: dict = {"schemaVersion": SCHEMA_VERSION, "search": kind, "finding": witness is not None}
    if isinstance(witness, ReentrancyWitness):
        payload["counterexample"] = {
            "prefix": [invocation_record(c) for c in witness.prefix],
            "trace": trace_payload(witness.trace),
        }
    elif isinstance(witness, OrderWitness):
        payload["counterexample"] = {
            "first": witness.first,
            "second": witness.second,
            "reason": witness.reason,
            "firstTrace": trace_payload(witness.first_trace),
            "secondTrace": trace_payload(witness.second_trace),
        }
    return json.dumps(payload, indent=2, default=str) + "\n"


def run(cfg: CliConfig) -> int:
    aug = load_woven(cfg)
    if cfg.schedule_path is not None:
        kind = "order"
        calls = load_schedule(cfg.schedule_path)
        witness = search_order_dependence(aug, calls, cfg.creation_time, cfg.creator)
    else:
        kind = "reentrancy"
        bounds = SearchBounds(
            senders=[cfg.creator, DEFAULT_ATTACKER],
            creation_time=cfg.creation_time,
            creator=cfg.creator,
        )
        witness = search_reentrancy(aug, cfg.depth, bounds)

    if cfg.format == "json":
        text = _json(kind, witness)
    elif witness is None:
        text = NO_FINDING + "\n"
    else:
        text = _reentrancy_text(witness) if kind == "reentrancy" else _order_text(witness)
    write_output(text, cfg.output_path)
    log.info("%s search on %s [%s]: %s", kind, aug.base.name, aug.plugins.slug,
             "counterexample" if witness else NO_FINDING)
    return EXIT_OK if witness is None else EXIT_FINDING
