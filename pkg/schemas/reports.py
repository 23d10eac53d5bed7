# schemas/reports.py
# ─────────────────────────────────────────────────────────────────────────────
"""
JSON / text output of the CLI commands.

Every JSON document carries ``schemaVersion``; bump it on any incompatible
change of the shapes below.
"""

from __future__ import annotations

import json
from typing import Any, Final, Iterable

from models.diagnostic import Diagnostic
from models.runtime import Accepted, InstanceState, Trace, TraceEntry

from .schedule import invocation_record

SCHEMA_VERSION: Final[int] = 1


def _dump(payload: dict[str, Any]) -> str:
    return json.dumps({"schemaVersion": SCHEMA_VERSION, **payload}, indent=2, default=str)


# ── diagnostics ──────────────────────────────────────────────────────────────
def diagnostics_json(diagnostics: Iterable[Diagnostic]) -> str:
    return _dump({"diagnostics": [d.model_dump(mode="json") for d in diagnostics]})


# ── traces ───────────────────────────────────────────────────────────────────
def state_payload(state: InstanceState | None) -> dict[str, Any] | None:
    if state is None:
        return None
    return {
        "currentState": state.current_state,
        "store": state.store,
        "locked": state.locked,
        "counter": state.counter,
        "creationTime": state.creation_time,
        "adminSet": state.admin_set,
        "balance": state.balance,
    }


def entry_payload(entry: TraceEntry) -> dict[str, Any]:
    outcome = entry.outcome
    if isinstance(outcome, Accepted):
        result = {"status": "accepted", "newState": outcome.new_state, "outputs": outcome.outputs}
    else:
        result = {"status": "rejected", "code": outcome.code.value}
    return {"depth": entry.depth, "invocation": invocation_record(entry.invocation), **result}


def trace_payload(trace: Trace) -> dict[str, Any]:
    return {
        "entries": [entry_payload(e) for e in trace.entries],
        "finalState": state_payload(trace.final_state),
    }


def trace_json(trace: Trace) -> str:
    return _dump({"trace": trace_payload(trace)})


def entry_line(entry: TraceEntry) -> str:
    call = entry.invocation
    indent = "  " * entry.depth
    args = ", ".join(f"{k}={v}" for k, v in call.args.items())
    head = f"{indent}{call.transition}({args}) sender={call.env.sender} now={call.env.now}"
    if call.env.value:
        head += f" value={call.env.value}"
    if call.counter_arg is not None:
        head += f" #{call.counter_arg}"
    outcome = entry.outcome
    if isinstance(outcome, Accepted):
        tail = f"accepted -> {outcome.new_state}"
        if outcome.outputs:
            tail += f" {outcome.outputs}"
    else:
        tail = f"rejected {outcome.code.value}"
    return f"{head}: {tail}"


def trace_text(trace: Trace) -> str:
    lines = [entry_line(e) for e in trace.entries]
    state = trace.final_state
    if state is not None:
        lines.append(f"final: state={state.current_state} balance={state.balance} store={state.store}")
    return "\n".join(lines) + "\n"
