# compiler/dsl/classify.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Core / opaque classification.

An expression or statement is Core when every construct is interpretable and
it type-checks in its scope. Anything else is kept as Opaque canonical text.
When a snippet is *shaped* like core (only core constructs) but still fails,
the analysis also returns a finding ``(code, message)`` that validation turns
into a diagnostic.
"""

from __future__ import annotations

from typing import Mapping, Optional

from models.expressions import (
    Call, CoreExpression, Expression, Ident, LocalDecl, MappingPush, Member,
    OpaqueExpression, OpaqueStatement, Send, Statement, Assign,
)
from models.types import ADDRESS, ArrayType, ElementaryType, StructRef, TypeRef, is_numeric

from compiler.fsm.typecheck import (
    TypeCheckError, TypeEnv, assignable, core_shaped, infer, lvalue_root,
)

from .printer import render_ast, render_statement
from .syntax import SyntaxAssign, SyntaxExprStmt, SyntaxLocal, SyntaxStatement

Finding = tuple[str, str]

_CORE_ASSIGN_OPS = ("=", "+=", "-=")


def _finding(exc: TypeCheckError) -> Optional[Finding]:
    if exc.reason == "unknown_symbol":
        return "E_UNKNOWN_SYMBOL", str(exc)
    if exc.reason == "mismatch":
        return "E_TYPE_MISMATCH", str(exc)
    return None


def as_env(env: TypeEnv | Mapping[str, TypeRef]) -> TypeEnv:
    return env if isinstance(env, TypeEnv) else TypeEnv(env, {})


# ──────────────────────────────────────────────────────────────────────────
# Expressions
# ──────────────────────────────────────────────────────────────────────────
def analyze_expression(ast, env: TypeEnv) -> tuple[Expression, Optional[Finding]]:
    if not core_shaped(ast):
        return OpaqueExpression(text=render_ast(ast)), None
    try:
        infer(ast, env)
    except TypeCheckError as exc:
        return OpaqueExpression(text=render_ast(ast)), _finding(exc)
    return CoreExpression(ast=ast), None


def classify_expression(snippet: str, env: TypeEnv | Mapping[str, TypeRef]) -> Expression:
    """Classify Solidity expression text; unparsable text stays opaque verbatim."""
    from .parser import parse_expression_ast

    try:
        ast = parse_expression_ast(snippet)
    except Exception:
        return OpaqueExpression(text=snippet.strip())
    return analyze_expression(ast, as_env(env))[0]


# ──────────────────────────────────────────────────────────────────────────
# Statements
# ──────────────────────────────────────────────────────────────────────────
def analyze_statement(
    stmt: SyntaxStatement, env: TypeEnv
) -> tuple[Statement, Optional[Finding], dict[str, TypeRef]]:
    """Return (statement, finding, locals declared by the statement)."""
    opaque = OpaqueStatement(text=render_statement(stmt))
    try:
        if isinstance(stmt, SyntaxLocal):
            return _local(stmt, env)
        if isinstance(stmt, SyntaxAssign):
            return _assign(stmt, env) or opaque, None, {}
        if isinstance(stmt, SyntaxExprStmt):
            return _expr_stmt(stmt, env) or opaque, None, {}
    except TypeCheckError as exc:
        return opaque, _finding(exc), {}
    return opaque, None, {}


def _local(stmt: SyntaxLocal, env: TypeEnv):
    declared = {stmt.name: ElementaryType(name=stmt.type_name)}
    opaque = OpaqueStatement(text=render_statement(stmt))
    if stmt.value is None:
        return LocalDecl(type_name=stmt.type_name, name=stmt.name), None, declared
    if not core_shaped(stmt.value):
        return opaque, None, declared
    try:
        value_type = infer(stmt.value, env)
    except TypeCheckError as exc:
        return opaque, _finding(exc), declared
    if not assignable(declared[stmt.name], value_type):
        return opaque, ("E_TYPE_MISMATCH", f"cannot initialise {stmt.type_name} {stmt.name}"), declared
    return LocalDecl(type_name=stmt.type_name, name=stmt.name, value=stmt.value), None, declared


def _assign(stmt: SyntaxAssign, env: TypeEnv) -> Statement | None:
    if stmt.op not in _CORE_ASSIGN_OPS:
        return None
    if not (core_shaped(stmt.target) and core_shaped(stmt.value)):
        return None
    if lvalue_root(stmt.target) is None:
        return None
    target_type = infer(stmt.target, env)
    value_type = infer(stmt.value, env)
    if stmt.op == "=":
        if not assignable(target_type, value_type):
            raise TypeCheckError("mismatch", "assigned value does not match target type")
    elif not (is_numeric(target_type) and is_numeric(value_type)):
        raise TypeCheckError("mismatch", f"'{stmt.op}' expects numeric operands")
    return Assign(target=stmt.target, op=stmt.op, value=stmt.value)


def _expr_stmt(stmt: SyntaxExprStmt, env: TypeEnv) -> Statement | None:
    expr = stmt.expr
    if not (isinstance(expr, Call) and isinstance(expr.func, Member) and expr.named_args is None):
        return None
    method, base = expr.func.member, expr.func.base
    if method == "transfer" and len(expr.args) == 1:
        amount = expr.args[0]
        if not (core_shaped(base) and core_shaped(amount)):
            return None
        if infer(base, env) != ADDRESS:
            raise TypeCheckError("mismatch", "transfer recipient must be an address")
        if not is_numeric(infer(amount, env)):
            raise TypeCheckError("mismatch", "transfer amount must be numeric")
        return Send(recipient=base, amount=amount)
    if method == "push" and len(expr.args) == 1:
        literal = expr.args[0]
        if not (
            isinstance(literal, Call)
            and isinstance(literal.func, Ident)
            and literal.named_args is not None
            and core_shaped(base)
            and all(core_shaped(a.value) for a in literal.named_args)
        ):
            return None
        decl = env.struct(literal.func.name)
        if decl is None:
            raise TypeCheckError("unknown_symbol", f"unknown struct '{literal.func.name}'", literal.func.name)
        target_type = infer(base, env)
        if target_type != ArrayType(element=StructRef(name=decl.name)):
            raise TypeCheckError("mismatch", f"push target is not a {decl.name}[] array")
        for arg in literal.named_args:
            field_type = decl.field_type(arg.name)
            if field_type is None:
                raise TypeCheckError("mismatch", f"struct {decl.name} has no field '{arg.name}'")
            if not assignable(field_type, infer(arg.value, env)):
                raise TypeCheckError("mismatch", f"field '{arg.name}' type mismatch")
        return MappingPush(target=base, value=literal)
    return None


def classify_statements(
    statements: list[SyntaxStatement], env: TypeEnv
) -> tuple[list[Statement], list[tuple[int, Finding]]]:
    """Classify a statement block, threading local declarations through the scope."""
    result: list[Statement] = []
    findings: list[tuple[int, Finding]] = []
    for i, stmt in enumerate(statements):
        classified, finding, declared = analyze_statement(stmt, env)
        result.append(classified)
        if finding is not None:
            findings.append((i, finding))
        if declared:
            env = env.extend(declared)
    return result, findings
