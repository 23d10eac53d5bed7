# compiler/dsl/syntax.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Lark parse tree → syntax objects.

Expressions become ``models.expressions`` AST nodes directly. Statements and
declarations become the intermediate shapes below; classification into the
core / opaque tiers happens later, once the whole symbol table is known.
"""

from __future__ import annotations

from typing import Any, Optional, Union

from lark import Token, Transformer
from pydantic import BaseModel, ConfigDict

from models.contract import StateDecl, StructDecl, StructField, Tag
from models.expressions import (
    AddressLit, Binary, BoolLit, Call, DurationLit, Expr, Ident, Index, IntLit,
    Member, NamedArg, StringLit, TypeName, Unary, DURATION_SECONDS,
)
from models.types import ArrayType, ElementaryType, MappingType, StructRef, TypeRef


class _Syntax(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# ──────────────────────────────────────────────────────────────────────────
# Statements (pre-classification)
# ──────────────────────────────────────────────────────────────────────────
class SyntaxAssign(_Syntax):
    target: Expr
    op: str
    value: Expr


class SyntaxLocal(_Syntax):
    type_name: str
    name: str
    value: Optional[Expr] = None


class SyntaxExprStmt(_Syntax):
    expr: Expr


SyntaxStatement = Union[SyntaxAssign, SyntaxLocal, SyntaxExprStmt]


# ──────────────────────────────────────────────────────────────────────────
# Declarations (pre-classification)
# ──────────────────────────────────────────────────────────────────────────
class Position(_Syntax):
    line: int
    column: int

    @property
    def path(self) -> str:
        return f"source/{self.line}:{self.column}"


class ParsedParam(_Syntax):
    name: str
    semantic_type: TypeRef


class ParsedVar(_Syntax):
    name: str
    visibility: str
    semantic_type: TypeRef
    initializer: Optional[Expr] = None
    pos: Position


class ParsedState(_Syntax):
    decl: StateDecl
    pos: Position


class ParsedStruct(_Syntax):
    decl: StructDecl
    pos: Position


class ParsedTransition(_Syntax):
    name: str
    source: str
    target: str
    tags: list[Tag] = []
    inputs: list[ParsedParam] = []
    outputs: list[ParsedParam] = []
    guards: list[Expr] = []
    statements: list[SyntaxStatement] = []
    time: Optional[int] = None   # set for timed transitions
    pos: Position

    @property
    def is_timed(self) -> bool:
        return self.time is not None


class ParsedContract(_Syntax):
    name: str
    states: list[ParsedState]
    variables: list[ParsedVar]
    structs: list[ParsedStruct]
    transitions: list[ParsedTransition]


def _pos(tok: Token) -> Position:
    return Position(line=tok.line or 0, column=tok.column or 0)


def _fold(children: list[Any]) -> Expr:
    """Left-fold ``a OP b OP c`` into nested Binary nodes."""
    node = children[0]
    for i in range(1, len(children), 2):
        node = Binary(op=str(children[i]), left=node, right=children[i + 1])
    return node


class AstBuilder(Transformer):
    """Bottom-up conversion of the lark tree."""

    # ── literals & atoms ──────────────────────────────────────────────────
    def int_lit(self, c):
        return IntLit(value=int(c[0]))

    def hex_lit(self, c):
        text = str(c[0]).lower()
        if len(text) == 42:
            return AddressLit(value=text)
        return IntLit(value=int(text, 16), hex=True)

    def duration(self, c):
        return DurationLit(amount=int(c[0]), unit=str(c[1]))

    def duration_unit(self, c):
        return c[0]

    def true_lit(self, _):
        return BoolLit(value=True)

    def false_lit(self, _):
        return BoolLit(value=False)

    def string_lit(self, c):
        return StringLit(value=str(c[0])[1:-1])

    def ident(self, c):
        return Ident(name=str(c[0]))

    def type_name(self, c):
        return TypeName(name=c[0])

    def elementary(self, c):
        return str(c[0])

    # ── postfix ───────────────────────────────────────────────────────────
    def member(self, c):
        return Member(base=c[0], member=str(c[1]))

    def index(self, c):
        return Index(base=c[0], index=c[1])

    def call(self, c):
        func, args = c[0], c[1]
        if args is None:
            return Call(func=func)
        kind, values = args
        if kind == "named":
            return Call(func=func, named_args=values)
        return Call(func=func, args=values)

    def positional_args(self, c):
        return ("positional", list(c))

    def named_args(self, c):
        return ("named", list(c))

    def named_arg(self, c):
        return NamedArg(name=str(c[0]), value=c[1])

    # ── operators ─────────────────────────────────────────────────────────
    def unary_op(self, c):
        return Unary(op=str(c[0]), operand=c[1])

    def pow_expr(self, c):
        return Binary(op="**", left=c[0], right=c[2])

    or_expr = and_expr = eq_expr = rel_expr = bor_expr = bxor_expr = band_expr = \
        shift_expr = add_expr = mul_expr = lambda self, c: _fold(c)

    def expr_only(self, c):
        return c[0]

    # ── statements ────────────────────────────────────────────────────────
    def assign_op(self, c):
        return str(c[0])

    def local_decl(self, c):
        value = c[2] if len(c) > 2 else None
        return SyntaxLocal(type_name=c[0], name=str(c[1]), value=value)

    def assign_stmt(self, c):
        return SyntaxAssign(target=c[0], op=c[1], value=c[2])

    def expr_stmt(self, c):
        return SyntaxExprStmt(expr=c[0])

    def stmt_only(self, c):
        return c[0]

    # ── types ─────────────────────────────────────────────────────────────
    def elementary_type(self, c):
        return ElementaryType(name=c[0])

    def struct_type(self, c):
        return StructRef(name=str(c[0]))

    def mapping_type(self, c):
        return MappingType(key=c[0], value=c[1])

    def array_type(self, c):
        return ArrayType(element=c[0])

    # ── declarations ──────────────────────────────────────────────────────
    def initial_kw(self, c):
        return "initial"

    def visibility(self, c):
        return str(c[0])

    def tag(self, c):
        return Tag(str(c[0]))

    def state_decl(self, c):
        name_tok = c[-1]
        return ParsedState(decl=StateDecl(name=str(name_tok), is_initial=len(c) == 2), pos=_pos(name_tok))

    def var_decl(self, c):
        visibility, semantic_type, name_tok = c[0], c[1], c[2]
        init = c[3] if len(c) > 3 else None
        return ParsedVar(
            name=str(name_tok), visibility=visibility, semantic_type=semantic_type,
            initializer=init, pos=_pos(name_tok),
        )

    def struct_field(self, c):
        return StructField(name=str(c[1]), semantic_type=c[0])

    def struct_decl(self, c):
        name_tok = c[0]
        return ParsedStruct(decl=StructDecl(name=str(name_tok), fields=list(c[1:])), pos=_pos(name_tok))

    def param(self, c):
        return ParsedParam(name=str(c[1]), semantic_type=c[0])

    def from_clause(self, c):
        return ("from", str(c[0]))

    def to_clause(self, c):
        return ("to", str(c[0]))

    def tags_clause(self, c):
        return ("tags", list(c))

    def input_clause(self, c):
        return ("input", list(c))

    def output_clause(self, c):
        return ("output", list(c))

    def guard_clause(self, c):
        return ("guard", c[0])

    def time_clause(self, c):
        amount = int(c[0])
        unit = str(c[1]) if len(c) > 1 else "seconds"
        return ("time", amount * DURATION_SECONDS[unit])

    def do_block(self, c):
        return ("do", list(c))

    def _transition(self, c, timed: bool) -> ParsedTransition:
        name_tok = c[0]
        fields: dict[str, Any] = {"tags": [], "inputs": [], "outputs": [], "guards": [], "statements": []}
        for key, value in c[1:]:
            if key == "from":
                fields["source"] = value
            elif key == "to":
                fields["target"] = value
            elif key == "tags":
                fields["tags"] = value
            elif key == "input":
                fields["inputs"] = value
            elif key == "output":
                fields["outputs"] = value
            elif key == "guard":
                fields["guards"].append(value)
            elif key == "do":
                fields["statements"] = value
            elif key == "time":
                fields["time"] = value
        if timed and "time" not in fields:
            fields["time"] = 0
        return ParsedTransition(name=str(name_tok), pos=_pos(name_tok), **fields)

    def transition(self, c):
        return self._transition(c, timed=False)

    def timed_transition(self, c):
        return self._transition(c, timed=True)

    def contract(self, c):
        name_tok = c[0]
        items = c[1:]
        return ParsedContract(
            name=str(name_tok),
            states=[i for i in items if isinstance(i, ParsedState)],
            variables=[i for i in items if isinstance(i, ParsedVar)],
            structs=[i for i in items if isinstance(i, ParsedStruct)],
            transitions=[i for i in items if isinstance(i, ParsedTransition)],
        )
