# models/expressions.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Expression and statement model.

Two tiers:

* ``CoreExpression`` wraps an AST built only from interpretable constructs
  (literals, durations, identifiers, index, member access, ``msg.sender``,
  ``msg.value``, ``now``, arithmetic / comparison / boolean operators).
* ``OpaqueExpression`` keeps the canonical source text of anything else that
  still passed the Solidity-subset syntax check (calls, hashing, bit ops …).

Statements follow the same split: ``Assign``, ``MappingPush``, ``Send`` and
``LocalDecl`` are interpretable, ``OpaqueStatement`` is text only.
"""

from __future__ import annotations

from typing import Annotated, Final, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

DURATION_SECONDS: Final[dict[str, int]] = {
    "seconds": 1,
    "minutes": 60,
    "hours": 3_600,
    "days": 86_400,
    "weeks": 604_800,
}


class _Node(BaseModel):
    model_config = ConfigDict(frozen=True)


# ──────────────────────────────────────────────────────────────────────────
# AST nodes
# ──────────────────────────────────────────────────────────────────────────
class IntLit(_Node):
    kind: Literal["int"] = "int"
    value: int
    hex: bool = False


class BoolLit(_Node):
    kind: Literal["bool"] = "bool"
    value: bool


class AddressLit(_Node):
    kind: Literal["address"] = "address"
    value: str  # lower-case 0x + 40 hex digits


class StringLit(_Node):
    kind: Literal["string"] = "string"
    value: str


class DurationLit(_Node):
    kind: Literal["duration"] = "duration"
    amount: int
    unit: Literal["seconds", "minutes", "hours", "days", "weeks"]

    @property
    def seconds(self) -> int:
        return self.amount * DURATION_SECONDS[self.unit]


class Ident(_Node):
    kind: Literal["ident"] = "ident"
    name: str


class TypeName(_Node):
    """Elementary type used as a callee, e.g. ``address(0)``."""

    kind: Literal["typename"] = "typename"
    name: str


class Member(_Node):
    kind: Literal["member"] = "member"
    base: "Expr"
    member: str


class Index(_Node):
    kind: Literal["index"] = "index"
    base: "Expr"
    index: "Expr"


class NamedArg(_Node):
    name: str
    value: "Expr"


class Call(_Node):
    kind: Literal["call"] = "call"
    func: "Expr"
    args: list["Expr"] = Field(default_factory=list)
    named_args: Optional[list[NamedArg]] = None


class Unary(_Node):
    kind: Literal["unary"] = "unary"
    op: str
    operand: "Expr"


class Binary(_Node):
    kind: Literal["binary"] = "binary"
    op: str
    left: "Expr"
    right: "Expr"


Expr = Annotated[
    Union[
        IntLit, BoolLit, AddressLit, StringLit, DurationLit, Ident, TypeName,
        Member, Index, Call, Unary, Binary,
    ],
    Field(discriminator="kind"),
]

for _model in (Member, Index, NamedArg, Call, Unary, Binary):
    _model.model_rebuild()

# Operators the interpreter executes; everything else is syntax-only.
CORE_BINARY_OPS: Final[frozenset[str]] = frozenset(
    {"+", "-", "*", "==", "!=", "<", "<=", ">", ">=", "&&", "||"}
)
CORE_UNARY_OPS: Final[frozenset[str]] = frozenset({"!", "-"})
ENVIRONMENT_MEMBERS: Final[dict[str, str]] = {"sender": "address", "value": "uint"}


# ──────────────────────────────────────────────────────────────────────────
# Two-tier expressions
# ──────────────────────────────────────────────────────────────────────────
class CoreExpression(_Node):
    tier: Literal["core"] = "core"
    ast: Expr


class OpaqueExpression(_Node):
    tier: Literal["opaque"] = "opaque"
    text: str


Expression = Annotated[Union[CoreExpression, OpaqueExpression], Field(discriminator="tier")]


# ──────────────────────────────────────────────────────────────────────────
# Statements
# ──────────────────────────────────────────────────────────────────────────
class Assign(_Node):
    kind: Literal["assign"] = "assign"
    target: Expr
    op: Literal["=", "+=", "-="] = "="
    value: Expr


class MappingPush(_Node):
    """``target.push(Struct({...}))`` on a storage array."""

    kind: Literal["push"] = "push"
    target: Expr
    value: Call


class Send(_Node):
    """``recipient.transfer(amount)``, the only external control transfer."""

    kind: Literal["send"] = "send"
    recipient: Expr
    amount: Expr


class LocalDecl(_Node):
    kind: Literal["local"] = "local"
    type_name: str
    name: str
    value: Optional[Expr] = None


class OpaqueStatement(_Node):
    kind: Literal["opaque"] = "opaque"
    text: str


Statement = Annotated[
    Union[Assign, MappingPush, Send, LocalDecl, OpaqueStatement],
    Field(discriminator="kind"),
]


def is_core(item: CoreExpression | OpaqueExpression | BaseModel) -> bool:
    return not isinstance(item, (OpaqueExpression, OpaqueStatement))
