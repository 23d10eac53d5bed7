# compiler/dsl/serializer.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Canonical DSL text.

Layout: states, structs, variables, transitions, timed transitions; one
declaration per line, four-space indentation, a blank line between sections
and between transition blocks. Clauses inside a transition follow the grammar
order (from, to, tags, input, output, guard*, do).
"""

from __future__ import annotations

from typing import Final

from models.contract import Contract, TimedTransition, Transition, Variable
from models.diagnostic import has_errors
from models.errors import InvalidContractError
from models.expressions import DURATION_SECONDS
from models.types import render_type

from compiler.fsm.validate import validate

from .printer import render_expression, render_statement

INDENT: Final[str] = "    "

# Largest unit first.
_UNITS: Final = sorted(DURATION_SECONDS.items(), key=lambda kv: kv[1], reverse=True)


def render_duration(seconds: int) -> str:
    for unit, size in _UNITS:
        if seconds > 0 and seconds % size == 0:
            return f"{seconds // size} {unit}"
    return f"{seconds} seconds"


def _params(params: list[Variable]) -> str:
    return ", ".join(f"{render_type(p.semantic_type)} {p.name}" for p in params)


def _body(lines: list[str], statements, depth: int) -> None:
    if not statements:
        return
    pad = INDENT * depth
    lines.append(f"{pad}do {{")
    lines.extend(f"{pad}{INDENT}{render_statement(s)}" for s in statements)
    lines.append(f"{pad}}}")


def _transition(t: Transition) -> list[str]:
    pad = INDENT * 2
    lines = [f"{INDENT}transition {t.name} {{", f"{pad}from {t.source};", f"{pad}to {t.target};"]
    if t.tags:
        lines.append(f"{pad}tags {', '.join(tag.value for tag in t.sorted_tags)};")
    if t.input:
        lines.append(f"{pad}input {_params(t.input)};")
    if t.output:
        lines.append(f"{pad}output {_params(t.output)};")
    lines.extend(f"{pad}guard {render_expression(g)};" for g in t.guards)
    _body(lines, t.statements, 2)
    lines.append(f"{INDENT}}}")
    return lines


def _timed(t: TimedTransition) -> list[str]:
    pad = INDENT * 2
    lines = [
        f"{INDENT}timed transition {t.name} {{",
        f"{pad}from {t.source};",
        f"{pad}to {t.target};",
        f"{pad}time {render_duration(t.time)};",
    ]
    lines.extend(f"{pad}guard {render_expression(g)};" for g in t.guards)
    _body(lines, t.statements, 2)
    lines.append(f"{INDENT}}}")
    return lines


def _variable(v: Variable) -> str:
    visibility = v.visibility.value if v.visibility is not None else "private"
    init = f" = {render_expression(v.initializer)}" if v.initializer is not None else ""
    return f"{INDENT}var {visibility} {render_type(v.semantic_type)} {v.name}{init};"


def serialize_contract(contract: Contract) -> str:
    """Canonical text; refuses contracts with Error diagnostics."""
    diagnostics = validate(contract)
    if has_errors(diagnostics):
        raise InvalidContractError(
            f"contract {contract.name} has errors; refusing to serialize",
            diagnostics=[d for d in diagnostics if d.is_error],
        )

    sections: list[list[str]] = []
    sections.append([
        f"{INDENT}state {'initial ' if s.is_initial else ''}{s.name};" for s in contract.states
    ])
    for struct in contract.custom_types:
        sections.append(
            [f"{INDENT}struct {struct.name} {{"]
            + [f"{INDENT * 2}{render_type(f.semantic_type)} {f.name};" for f in struct.fields]
            + [f"{INDENT}}}"]
        )
    if contract.variables:
        sections.append([_variable(v) for v in contract.variables])
    sections.extend(_transition(t) for t in contract.transitions)
    sections.extend(_timed(t) for t in contract.timed_transitions)

    body = "\n\n".join("\n".join(section) for section in sections)
    return f"contract {contract.name} {{\n{body}\n}}\n"
