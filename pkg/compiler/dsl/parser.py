# compiler/dsl/parser.py
# ─────────────────────────────────────────────────────────────────────────────
"""
DSL text → Contract, plus the Solidity-subset syntax checker.

``parse_contract`` raises ``ContractParseError`` carrying the diagnostics
(line/column encoded in ``node_path`` as ``source/<line>:<column>``) instead
of returning a union; everything else about a failed parse is in
``exc.diagnostics``.
"""

from __future__ import annotations

import logging
from enum import Enum

from lark.exceptions import LarkError, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from models.contract import (
    Contract, TimedTransition, Transition, Variable, VariableKind, Visibility,
)
from models.diagnostic import Diagnostic, error, sort_diagnostics
from models.errors import ContractParseError
from models.expressions import Expr

from compiler.fsm.typecheck import TypeEnv, contract_env

from .classify import analyze_expression, classify_statements
from .grammar import get_parser
from .syntax import AstBuilder, ParsedContract, ParsedTransition, Position, SyntaxStatement

log = logging.getLogger(__name__)

_MAX_EXPECTED = 8


class SyntaxContext(str, Enum):
    EXPR = "ExprContext"
    STMT = "StmtContext"


# ──────────────────────────────────────────────────────────────────────────
# Low-level parsing
# ──────────────────────────────────────────────────────────────────────────
def _parse(text: str, start: str):
    tree = get_parser().parse(text, start=start)
    return AstBuilder().transform(tree)


def parse_expression_ast(text: str) -> Expr:
    return _parse(text, "expr_only")


def parse_statement_syntax(text: str) -> SyntaxStatement:
    """Parse one statement; a missing trailing ``;`` is supplied."""
    text = text.strip()
    if not text.endswith(";"):
        text += ";"
    return _parse(text, "stmt_only")


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            found = "end of input"
        else:
            found = f"{exc.token.type} {str(exc.token)!r}"
        expected = sorted(exc.expected)
        suffix = ", ".join(expected[:_MAX_EXPECTED]) + (" …" if len(expected) > _MAX_EXPECTED else "")
        return f"unexpected {found}; expected one of: {suffix}" if expected else f"unexpected {found}"
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of input"
    char = getattr(exc, "char", None)
    return f"unexpected character {char!r}" if char else "syntax error"


def _position(exc: UnexpectedInput, text: str) -> Position:
    line, column = getattr(exc, "line", -1), getattr(exc, "column", -1)
    if line is None or line < 1:
        lines = text.splitlines() or [""]
        return Position(line=len(lines), column=len(lines[-1]) + 1)
    return Position(line=line, column=max(column or 1, 1))


def _syntax_diagnostics(exc: LarkError, text: str) -> list[Diagnostic]:
    if isinstance(exc, UnexpectedInput):
        return [error("E_PARSE", _describe(exc), _position(exc, text).path)]
    if isinstance(exc, VisitError):
        return [error("E_PARSE", str(exc.orig_exc), Position(line=1, column=1).path)]
    return [error("E_PARSE", str(exc), Position(line=1, column=1).path)]


def check_solidity_syntax(snippet: str, context: SyntaxContext | str) -> list[Diagnostic]:
    """Empty list iff the snippet is in the supported expression/statement subset. Never raises."""
    context = SyntaxContext(context)
    try:
        if context is SyntaxContext.EXPR:
            parse_expression_ast(snippet)
        else:
            parse_statement_syntax(snippet)
    except LarkError as exc:
        return _syntax_diagnostics(exc, snippet)
    return []


# ──────────────────────────────────────────────────────────────────────────
# Contract assembly
# ──────────────────────────────────────────────────────────────────────────
def _duplicates(parsed: ParsedContract) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    namespaces = {
        "state": [(s.decl.name, s.pos) for s in parsed.states],
        "variable": [(v.name, v.pos) for v in parsed.variables],
        "struct": [(s.decl.name, s.pos) for s in parsed.structs],
        "transition": [(t.name, t.pos) for t in parsed.transitions],
    }
    for kind, entries in namespaces.items():
        seen: set[str] = set()
        for name, pos in entries:
            if name in seen:
                diagnostics.append(error("E_DUPLICATE_NAME", f"duplicate {kind} '{name}'", pos.path))
            seen.add(name)
    return diagnostics


def _params(params, kind: VariableKind) -> list[Variable]:
    return [Variable(name=p.name, kind=kind, semantic_type=p.semantic_type) for p in params]


def _build_transition(pt: ParsedTransition, cenv: TypeEnv) -> Transition:
    inputs = _params(pt.inputs, VariableKind.INPUT_DATA)
    outputs = _params(pt.outputs, VariableKind.OUTPUT_DATA)
    genv = cenv.extend({v.name: v.semantic_type for v in inputs})
    benv = genv.extend({v.name: v.semantic_type for v in outputs})
    statements, _ = classify_statements(pt.statements, benv)
    return Transition(
        name=pt.name,
        source=pt.source,
        target=pt.target,
        guards=[analyze_expression(g, genv)[0] for g in pt.guards],
        input=inputs,
        output=outputs,
        statements=statements,
        tags=frozenset(pt.tags),
    )


def _build_timed(pt: ParsedTransition, cenv: TypeEnv) -> TimedTransition:
    statements, _ = classify_statements(pt.statements, cenv)
    return TimedTransition(
        name=pt.name,
        source=pt.source,
        target=pt.target,
        guards=[analyze_expression(g, cenv)[0] for g in pt.guards],
        statements=statements,
        time=pt.time or 0,
    )


def build_contract(parsed: ParsedContract) -> Contract:
    """Classify every embedded snippet against the finished symbol table."""
    skeleton = Contract(
        name=parsed.name,
        states=[s.decl for s in parsed.states],
        variables=[
            Variable(
                name=v.name,
                kind=VariableKind.CONTRACT_DATA,
                semantic_type=v.semantic_type,
                visibility=Visibility(v.visibility),
            )
            for v in parsed.variables
        ],
        custom_types=[s.decl for s in parsed.structs],
    )
    cenv = contract_env(skeleton)
    variables = [
        var.model_copy(update={"initializer": analyze_expression(pv.initializer, cenv)[0]})
        if pv.initializer is not None else var
        for var, pv in zip(skeleton.variables, parsed.variables)
    ]
    return skeleton.model_copy(
        update={
            "variables": variables,
            "transitions": [_build_transition(t, cenv) for t in parsed.transitions if not t.is_timed],
            "timed_transitions": [_build_timed(t, cenv) for t in parsed.transitions if t.is_timed],
        }
    )


def parse_contract(source: str) -> Contract:
    """Parse DSL text. Raises ``ContractParseError`` with E_PARSE / E_DUPLICATE_NAME diagnostics."""
    try:
        parsed: ParsedContract = _parse(source, "contract")
    except LarkError as exc:
        diagnostics = _syntax_diagnostics(exc, source)
        raise ContractParseError(diagnostics[0].message, diagnostics=diagnostics) from exc

    duplicates = sort_diagnostics(_duplicates(parsed))
    if duplicates:
        raise ContractParseError(
            f"{len(duplicates)} duplicate declaration(s)", code="E_DUPLICATE_NAME", diagnostics=duplicates
        )

    contract = build_contract(parsed)
    log.debug(
        "parsed contract %s: %d states, %d transitions, %d timed",
        contract.name, len(contract.states), len(contract.transitions), len(contract.timed_transitions),
    )
    return contract
