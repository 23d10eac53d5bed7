# compiler/solidity/check.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Mechanical self-test of emitter output.

Works on the text alone (regular expressions over the emitted layout), so a
hand-edited or corrupted file is checked exactly like a fresh one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from models.contract import CREATION_TIME
from models.diagnostic import Diagnostic, error, sort_diagnostics
from models.plugins import AugmentedContract, WrapperKind

from compiler.dsl.printer import render_expression

from .emitter import STATE_ENUM, STATE_VARIABLE, modifier_call, ordered_states

_FUNCTION = re.compile(r"^(?P<indent>[ \t]*)function (?P<name>\w+)\((?P<params>[^)]*)\)(?P<tail>[^{]*)\{\s*$")
_ENUM = re.compile(rf"enum {STATE_ENUM}\s*\{{(?P<members>[^}}]*)\}}", re.S)
_MODIFIER_TOKEN = re.compile(r"\w+(?:\([^)]*\))?")


@dataclass
class _Function:
    header_tail: str
    body: list[str]


def _functions(lines: list[str]) -> dict[str, _Function]:
    found: dict[str, _Function] = {}
    i = 0
    while i < len(lines):
        m = _FUNCTION.match(lines[i])
        if not m:
            i += 1
            continue
        closing = f"{m.group('indent')}}}"
        body: list[str] = []
        i += 1
        while i < len(lines) and lines[i].rstrip() != closing:
            body.append(lines[i].strip())
            i += 1
        found.setdefault(m.group("name"), _Function(header_tail=m.group("tail").strip(), body=body))
        i += 1
    return found


def _header_modifiers(tail: str) -> list[str]:
    """Modifier invocations in a header tail, stopping at payable/returns."""
    tail = tail.split("returns", 1)[0]
    return [tok for tok in _MODIFIER_TOKEN.findall(tail) if tok not in ("payable", "public", "private", "internal", "external")]


def structural_check(solidity: str, aug: AugmentedContract) -> list[Diagnostic]:
    """Empty list when ``solidity`` has the shape ``emit_solidity`` promises for ``aug``."""
    base = aug.base
    lines = solidity.splitlines()
    findings: list[Diagnostic] = []

    if not lines or not lines[0].startswith("pragma solidity "):
        findings.append(error("E_STRUCT_PRAGMA", "missing pragma line", "name"))
    if f"contract {base.name} {{" not in lines:
        findings.append(error("E_STRUCT_CONTRACT", f"missing 'contract {base.name} {{'", "name"))

    expected_states = ordered_states(base)
    enum = _ENUM.search(solidity)
    members = [m.strip() for m in enum.group("members").split(",")] if enum else []
    if members != expected_states:
        findings.append(error(
            "E_STRUCT_ENUM", f"enum {STATE_ENUM} is {members}, expected {expected_states}", "states"
        ))
    stripped = [line.strip() for line in lines]
    state_decl = f"{STATE_ENUM} private {STATE_VARIABLE} = {STATE_ENUM}.{base.initial_state};"
    if state_decl not in stripped:
        findings.append(error("E_STRUCT_STATE_VARIABLE", f"missing '{state_decl}'", "states"))
    if aug.inject_creation_time and f"uint private {CREATION_TIME} = now;" not in stripped:
        findings.append(error("E_STRUCT_CREATION_TIME", f"missing {CREATION_TIME} declaration", "name"))

    used_kinds = {k for weave in aug.weaves for k in weave.wrappers}
    for kind in WrapperKind:
        if kind in used_kinds and not any(s.startswith(f"modifier {kind.value}") for s in stripped):
            findings.append(error("E_STRUCT_MODIFIER", f"modifier {kind.value} is not declared", "name"))

    functions = _functions(lines)
    for t in base.transitions:
        path = f"transitions/{t.name}"
        fn = functions.get(t.name)
        if fn is None:
            findings.append(error("E_STRUCT_FUNCTION", f"no function for transition {t.name}", path))
            continue
        weave = aug.weave_for(t.name)
        findings += _check_header(fn, [modifier_call(k) for k in weave.wrappers] if weave else [], path,
                                  payable=t.is_payable, returns=bool(t.output))
        body = [line for line in fn.body if line]
        state_require = f"require({STATE_VARIABLE} == {STATE_ENUM}.{t.source});"
        if not body or body[0] != state_require:
            findings.append(error("E_STRUCT_STATE_REQUIRE", f"first statement must be '{state_require}'", path))
        else:
            guards = [f"require({render_expression(g)});" for g in t.guards]
            if body[1:1 + len(guards)] != guards:
                findings.append(error("E_STRUCT_GUARD", "guard requires missing or out of order", path))
        state_write = f"{STATE_VARIABLE} = {STATE_ENUM}.{t.target};"
        if (state_write in body) != (t.source != t.target):
            findings.append(error(
                "E_STRUCT_STATE_WRITE",
                "state write present on a self-loop" if t.source == t.target else f"missing '{state_write}'",
                path,
            ))

    for g in aug.generated_transitions:
        path = f"transitions/{g.name}"
        fn = functions.get(g.name)
        if fn is None:
            findings.append(error("E_STRUCT_FUNCTION", f"no function for generated transition {g.name}", path))
            continue
        weave = aug.weave_for(g.name)
        findings += _check_header(fn, [modifier_call(k) for k in weave.wrappers] if weave else [], path,
                                  payable=False, returns=False)
        if any(line.startswith(f"require({STATE_VARIABLE} ==") for line in fn.body):
            findings.append(error("E_STRUCT_STATE_REQUIRE", "admin management must not check the state", path))

    return sort_diagnostics(findings)


def _check_header(fn: _Function, expected_modifiers: list[str], path: str, *,
                  payable: bool, returns: bool) -> list[Diagnostic]:
    findings: list[Diagnostic] = []
    modifiers = _header_modifiers(fn.header_tail)
    if modifiers != expected_modifiers:
        findings.append(error(
            "E_STRUCT_MODIFIER_ORDER", f"modifiers {modifiers}, expected {expected_modifiers}", path
        ))
    if ("payable" in fn.header_tail.split()) != payable:
        findings.append(error("E_STRUCT_PAYABLE", "payable keyword does not match the payable tag", path))
    if ("returns" in fn.header_tail) != returns:
        findings.append(error("E_STRUCT_RETURNS", "returns clause does not match output data", path))
    return findings
