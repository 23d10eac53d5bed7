# compiler/fsm/validate.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Structural and semantic validation of a Contract.

Checks
------
E_INITIAL_COUNT   exactly one initial state                    states
E_INVALID_NAME    identifier grammar                           <collection>/<index>
E_DUPLICATE_NAME  per namespace (transitions share with timed) <collection>/<index>
E_UNKNOWN_STATE   from / to of every edge                      transitions/<t>/to
E_UNKNOWN_TYPE    undeclared struct references                 variables/<v> …
E_GUARD_TYPE      core guard that is not bool                  transitions/<t>/guards/<i>
E_UNKNOWN_SYMBOL  core-shaped snippet with unresolved name     …/guards/<i>, …/statements/<i>
E_TYPE_MISMATCH   core-shaped snippet that fails typing        …
E_TIMED_IO        timed transition touching input/output data  timedTransitions/<t>/…
E_NEGATIVE_TIME   timed transition time below zero             timedTransitions/<t>/time
E_PARSE           opaque text outside the Solidity subset      …
W_UNREACHABLE     state unreachable from the initial state     states/<s>

Opaque snippets are re-parsed so that a snippet which only *looks* like core
(and failed classification because of a bad symbol or type) is reported.
"""

from __future__ import annotations

import re
from typing import Final, Iterable, Iterator, Sequence

from pydantic import BaseModel

from models.contract import Contract
from models.diagnostic import Diagnostic, error, sort_diagnostics, warning
from models.expressions import CoreExpression, Expression, Ident, Statement
from models.types import BOOL, ArrayType, ElementaryType, MappingType, StructRef, TypeRef, render_type, ELEMENTARY_TYPES

from .graph import reachable_states
from .typecheck import (
    TypeEnv, assignable, body_env, contract_env, core_shaped, guard_env, infer, io_names,
)

IDENTIFIER: Final = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


# ──────────────────────────────────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────────────────────────────────
def _identifiers(node) -> Iterator[str]:
    if isinstance(node, Ident):
        yield node.name
    elif isinstance(node, BaseModel):
        for field in type(node).model_fields:
            yield from _identifiers(getattr(node, field))
    elif isinstance(node, (list, tuple)):
        for item in node:
            yield from _identifiers(item)


def _ast(expr: Expression):
    """AST for a core expression, or the re-parsed AST of opaque text (None if unparsable)."""
    if isinstance(expr, CoreExpression):
        return expr.ast
    from compiler.dsl.parser import parse_expression_ast
    from lark.exceptions import LarkError

    try:
        return parse_expression_ast(expr.text)
    except LarkError:
        return None


def _timed_leak(node, env: TypeEnv, io: set[str] | None, path: str) -> list[Diagnostic]:
    if io is None:
        return []
    leaked = sorted({n for n in _identifiers(node) if n in io and n not in env})
    if leaked:
        return [error("E_TIMED_IO", f"timed transition uses input/output data: {', '.join(leaked)}", path)]
    return []


def _check_expression(
    expr: Expression, env: TypeEnv, path: str, *, guard: bool = False, io: set[str] | None = None,
    expected: TypeRef | None = None,
) -> list[Diagnostic]:
    from compiler.dsl.classify import analyze_expression

    ast = _ast(expr)
    if ast is None:
        return [error("E_PARSE", "expression is outside the supported Solidity subset", path)]
    leak = _timed_leak(ast, env, io, path)
    if leak:
        return leak
    _, finding = analyze_expression(ast, env)
    if finding is not None:
        return [error(finding[0], finding[1], path)]
    if not core_shaped(ast):
        return []
    inferred = infer(ast, env)
    if guard and inferred != BOOL:
        return [error("E_GUARD_TYPE", f"guard has type {render_type(inferred)}, expected bool", path)]
    if expected is not None and not assignable(expected, inferred):
        return [error(
            "E_TYPE_MISMATCH",
            f"initializer of type {render_type(inferred)} does not fit {render_type(expected)}",
            path,
        )]
    return []


def _check_statements(
    statements: Sequence[Statement], env: TypeEnv, path: str, *, io: set[str] | None = None
) -> list[Diagnostic]:
    from compiler.dsl.classify import analyze_statement
    from compiler.dsl.parser import parse_statement_syntax
    from compiler.dsl.printer import render_statement
    from lark.exceptions import LarkError

    diagnostics: list[Diagnostic] = []
    for i, stmt in enumerate(statements):
        where = f"{path}/{i}"
        try:
            syntax = parse_statement_syntax(render_statement(stmt))
        except LarkError:
            diagnostics.append(error("E_PARSE", "statement is outside the supported Solidity subset", where))
            continue
        leak = _timed_leak(syntax, env, io, where)
        if leak:
            diagnostics.extend(leak)
            continue
        _, finding, declared = analyze_statement(syntax, env)
        if finding is not None:
            diagnostics.append(error(finding[0], finding[1], where))
        if declared:
            env = env.extend(declared)
    return diagnostics


def _type_refs(t: TypeRef) -> Iterator[TypeRef]:
    yield t
    if isinstance(t, MappingType):
        yield from _type_refs(t.key)
        yield from _type_refs(t.value)
    elif isinstance(t, ArrayType):
        yield from _type_refs(t.element)


def _check_type(t: TypeRef, structs: set[str], path: str) -> list[Diagnostic]:
    for ref in _type_refs(t):
        if isinstance(ref, StructRef) and ref.name not in structs:
            return [error("E_UNKNOWN_TYPE", f"unknown type '{ref.name}'", path)]
        if isinstance(ref, ElementaryType) and ref.name not in ELEMENTARY_TYPES:
            return [error("E_UNKNOWN_TYPE", f"unsupported elementary type '{ref.name}'", path)]
    return []


def _named(collection: str, names: Iterable[str], kind: str) -> list[Diagnostic]:
    """E_INVALID_NAME and E_DUPLICATE_NAME over one namespace."""
    diagnostics: list[Diagnostic] = []
    seen: set[str] = set()
    for i, name in enumerate(names):
        where = f"{collection}/{i}"
        if not IDENTIFIER.match(name):
            diagnostics.append(error("E_INVALID_NAME", f"'{name}' is not a valid {kind} name", where))
        if name in seen:
            diagnostics.append(error("E_DUPLICATE_NAME", f"duplicate {kind} '{name}'", where))
        seen.add(name)
    return diagnostics


# ──────────────────────────────────────────────────────────────────────────
# Check groups
# ──────────────────────────────────────────────────────────────────────────
def _check_names(contract: Contract) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    if not IDENTIFIER.match(contract.name):
        diagnostics.append(error("E_INVALID_NAME", f"'{contract.name}' is not a valid contract name", "name"))
    diagnostics += _named("states", (s.name for s in contract.states), "state")
    diagnostics += _named("variables", (v.name for v in contract.variables), "variable")
    diagnostics += _named("customTypes", (s.name for s in contract.custom_types), "struct")

    # Transitions and timed transitions share one namespace; paths keep each
    # entry's own collection and index.
    seen: set[str] = set()
    edges = [("transitions", i, t.name) for i, t in enumerate(contract.transitions)]
    edges += [("timedTransitions", i, t.name) for i, t in enumerate(contract.timed_transitions)]
    for collection, i, name in edges:
        where = f"{collection}/{i}"
        if not IDENTIFIER.match(name):
            diagnostics.append(error("E_INVALID_NAME", f"'{name}' is not a valid transition name", where))
        if name in seen:
            diagnostics.append(error("E_DUPLICATE_NAME", f"duplicate transition '{name}'", where))
        seen.add(name)

    for struct in contract.custom_types:
        diagnostics += _named(
            f"customTypes/{struct.name}/fields",
            (f.name for f in struct.fields),
            "field",
        )
    # Inputs and outputs of one transition share a scope.
    for t in contract.transitions:
        seen_params: set[str] = set()
        for group, params in (("input", t.input), ("output", t.output)):
            for i, p in enumerate(params):
                where = f"transitions/{t.name}/{group}/{i}"
                if not IDENTIFIER.match(p.name):
                    diagnostics.append(error("E_INVALID_NAME", f"'{p.name}' is not a valid parameter name", where))
                if p.name in seen_params:
                    diagnostics.append(error("E_DUPLICATE_NAME", f"duplicate parameter '{p.name}'", where))
                seen_params.add(p.name)
    return diagnostics


def _check_states(contract: Contract) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    initial = contract.initial_states
    if len(initial) != 1:
        diagnostics.append(error(
            "E_INITIAL_COUNT", f"exactly one initial state required, found {len(initial)}", "states"
        ))
    declared = set(contract.state_names)
    for t in contract.transitions:
        for attr, name in (("from", t.source), ("to", t.target)):
            if name not in declared:
                diagnostics.append(error("E_UNKNOWN_STATE", f"unknown state '{name}'", f"transitions/{t.name}/{attr}"))
    for tt in contract.timed_transitions:
        for attr, name in (("from", tt.source), ("to", tt.target)):
            if name not in declared:
                diagnostics.append(error("E_UNKNOWN_STATE", f"unknown state '{name}'", f"timedTransitions/{tt.name}/{attr}"))
    if len(initial) == 1:
        reachable = reachable_states(contract)
        for s in contract.states:
            if s.name not in reachable:
                diagnostics.append(warning("W_UNREACHABLE", f"state '{s.name}' is unreachable", f"states/{s.name}"))
    return diagnostics


def _check_types(contract: Contract) -> list[Diagnostic]:
    structs = {s.name for s in contract.custom_types}
    diagnostics: list[Diagnostic] = []
    for v in contract.variables:
        diagnostics += _check_type(v.semantic_type, structs, f"variables/{v.name}")
    for s in contract.custom_types:
        for f in s.fields:
            diagnostics += _check_type(f.semantic_type, structs, f"customTypes/{s.name}/fields/{f.name}")
    for t in contract.transitions:
        for group, params in (("input", t.input), ("output", t.output)):
            for p in params:
                diagnostics += _check_type(p.semantic_type, structs, f"transitions/{t.name}/{group}/{p.name}")
    return diagnostics


def _check_initializers(contract: Contract, env: TypeEnv) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    for v in contract.variables:
        if v.initializer is not None:
            diagnostics += _check_expression(
                v.initializer, env, f"variables/{v.name}/initializer", expected=v.semantic_type
            )
    return diagnostics


def _check_transitions(contract: Contract) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    for t in contract.transitions:
        genv = guard_env(contract, t)
        for i, g in enumerate(t.guards):
            diagnostics += _check_expression(g, genv, f"transitions/{t.name}/guards/{i}", guard=True)
        diagnostics += _check_statements(t.statements, body_env(contract, t), f"transitions/{t.name}/statements")

    io = io_names(contract)
    env = contract_env(contract)
    for tt in contract.timed_transitions:
        if tt.time < 0:
            diagnostics.append(error("E_NEGATIVE_TIME", "time must be non-negative", f"timedTransitions/{tt.name}/time"))
        for i, g in enumerate(tt.guards):
            diagnostics += _check_expression(g, env, f"timedTransitions/{tt.name}/guards/{i}", guard=True, io=io)
        diagnostics += _check_statements(tt.statements, env, f"timedTransitions/{tt.name}/statements", io=io)
    return diagnostics


# ──────────────────────────────────────────────────────────────────────────
# Public API
# ──────────────────────────────────────────────────────────────────────────
def validate(contract: Contract) -> list[Diagnostic]:
    """All findings, sorted by (node_path, code, message). Empty iff every check passes."""
    diagnostics: list[Diagnostic] = []
    diagnostics += _check_names(contract)
    diagnostics += _check_states(contract)
    diagnostics += _check_types(contract)
    diagnostics += _check_initializers(contract, contract_env(contract))
    diagnostics += _check_transitions(contract)
    return sort_diagnostics(diagnostics)
