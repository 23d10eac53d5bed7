# compiler/dsl/printer.py
# ─────────────────────────────────────────────────────────────────────────────
"""Canonical text for expressions and statements (minimal parentheses)."""

from __future__ import annotations

from typing import Final

from models.expressions import (
    AddressLit, Assign, Binary, BoolLit, Call, CoreExpression, DurationLit,
    Ident, Index, IntLit, LocalDecl, MappingPush, Member, OpaqueExpression,
    OpaqueStatement, Send, StringLit, TypeName, Unary,
)

from .syntax import SyntaxAssign, SyntaxExprStmt, SyntaxLocal

BINARY_PRECEDENCE: Final[dict[str, int]] = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "|": 5,
    "^": 6,
    "&": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
    "**": 11,
}
UNARY_PRECEDENCE: Final = 12
POSTFIX_PRECEDENCE: Final = 13
ATOM_PRECEDENCE: Final = 14


def _precedence(node) -> int:
    if isinstance(node, Binary):
        return BINARY_PRECEDENCE[node.op]
    if isinstance(node, Unary):
        return UNARY_PRECEDENCE
    if isinstance(node, (Member, Index, Call)):
        return POSTFIX_PRECEDENCE
    return ATOM_PRECEDENCE


def _wrap(node, needs_parens: bool) -> str:
    text = render_ast(node)
    return f"({text})" if needs_parens else text


def render_ast(node) -> str:
    if isinstance(node, IntLit):
        return f"0x{node.value:x}" if node.hex else str(node.value)
    if isinstance(node, BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, (AddressLit,)):
        return node.value
    if isinstance(node, StringLit):
        return f'"{node.value}"'
    if isinstance(node, DurationLit):
        return f"{node.amount} {node.unit}"
    if isinstance(node, (Ident, TypeName)):
        return node.name
    if isinstance(node, Member):
        return f"{_wrap(node.base, _precedence(node.base) < POSTFIX_PRECEDENCE)}.{node.member}"
    if isinstance(node, Index):
        base = _wrap(node.base, _precedence(node.base) < POSTFIX_PRECEDENCE)
        return f"{base}[{render_ast(node.index)}]"
    if isinstance(node, Call):
        func = _wrap(node.func, _precedence(node.func) < POSTFIX_PRECEDENCE)
        if node.named_args is not None:
            inner = ", ".join(f"{a.name}: {render_ast(a.value)}" for a in node.named_args)
            return f"{func}({{{inner}}})"
        return f"{func}({', '.join(render_ast(a) for a in node.args)})"
    if isinstance(node, Unary):
        return f"{node.op}{_wrap(node.operand, _precedence(node.operand) < UNARY_PRECEDENCE)}"
    if isinstance(node, Binary):
        p = BINARY_PRECEDENCE[node.op]
        if node.op == "**":  # right associative
            left = _wrap(node.left, _precedence(node.left) <= p)
            right = _wrap(node.right, _precedence(node.right) < p)
        else:
            left = _wrap(node.left, _precedence(node.left) < p)
            right = _wrap(node.right, _precedence(node.right) <= p)
        return f"{left} {node.op} {right}"
    raise TypeError(f"cannot render {type(node).__name__}")


def render_expression(expr: CoreExpression | OpaqueExpression) -> str:
    if isinstance(expr, OpaqueExpression):
        return expr.text
    return render_ast(expr.ast)


def render_statement(stmt) -> str:
    """Statement text including the trailing semicolon."""
    if isinstance(stmt, OpaqueStatement):
        return stmt.text
    if isinstance(stmt, (Assign, SyntaxAssign)):
        return f"{render_ast(stmt.target)} {stmt.op} {render_ast(stmt.value)};"
    if isinstance(stmt, MappingPush):
        target = _wrap(stmt.target, _precedence(stmt.target) < POSTFIX_PRECEDENCE)
        return f"{target}.push({render_ast(stmt.value)});"
    if isinstance(stmt, Send):
        recipient = _wrap(stmt.recipient, _precedence(stmt.recipient) < POSTFIX_PRECEDENCE)
        return f"{recipient}.transfer({render_ast(stmt.amount)});"
    if isinstance(stmt, (LocalDecl, SyntaxLocal)):
        if stmt.value is None:
            return f"{stmt.type_name} {stmt.name};"
        return f"{stmt.type_name} {stmt.name} = {render_ast(stmt.value)};"
    if isinstance(stmt, SyntaxExprStmt):
        return f"{render_ast(stmt.expr)};"
    raise TypeError(f"cannot render {type(stmt).__name__}")
