# compiler/fsm/typecheck.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Scopes and static typing for the interpretable expression core.

``infer`` either returns the static type of an AST or raises
``TypeCheckError`` whose ``reason`` tells the caller why the expression is not
core: ``not_core`` (construct outside the core), ``unknown_symbol`` or
``mismatch``.
"""

from __future__ import annotations

from typing import Final, Literal, Mapping

from models.contract import CREATION_TIME, Contract, StructDecl, Transition
from models.expressions import (
    AddressLit, Binary, BoolLit, Call, CORE_BINARY_OPS, CORE_UNARY_OPS,
    DurationLit, ENVIRONMENT_MEMBERS, Ident, Index, IntLit, Member, StringLit,
    TypeName, Unary,
)
from models.types import (
    ADDRESS, BOOL, INT, UINT, ArrayType, ElementaryType, MappingType,
    StructRef, TypeRef, is_numeric,
)

NOW: Final[str] = "now"
MSG: Final[str] = "msg"

Reason = Literal["not_core", "unknown_symbol", "mismatch"]


class TypeCheckError(Exception):
    def __init__(self, reason: Reason, message: str, symbol: str | None = None) -> None:
        super().__init__(message)
        self.reason: Reason = reason
        self.symbol = symbol


class TypeEnv:
    """Immutable name → type table plus the struct declarations in scope."""

    def __init__(self, symbols: Mapping[str, TypeRef], structs: Mapping[str, StructDecl]) -> None:
        self._symbols = dict(symbols)
        self._structs = dict(structs)

    def lookup(self, name: str) -> TypeRef | None:
        return self._symbols.get(name)

    def struct(self, name: str) -> StructDecl | None:
        return self._structs.get(name)

    def extend(self, extra: Mapping[str, TypeRef]) -> "TypeEnv":
        return TypeEnv({**self._symbols, **extra}, self._structs)

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    @property
    def names(self) -> set[str]:
        return set(self._symbols)

    @property
    def struct_names(self) -> list[str]:
        return list(self._structs)


# ──────────────────────────────────────────────────────────────────────────
# Scopes
# ──────────────────────────────────────────────────────────────────────────
def contract_env(contract: Contract) -> TypeEnv:
    """Contract data plus the implicit ``creationTime``."""
    symbols: dict[str, TypeRef] = {CREATION_TIME: UINT}
    for v in contract.variables:
        symbols[v.name] = v.semantic_type
    return TypeEnv(symbols, {s.name: s for s in contract.custom_types})


def guard_env(contract: Contract, transition: Transition) -> TypeEnv:
    """Guards see contract data and input data only."""
    return contract_env(contract).extend({p.name: p.semantic_type for p in transition.input})


def body_env(contract: Contract, transition: Transition) -> TypeEnv:
    """Statements additionally see output data."""
    return guard_env(contract, transition).extend({p.name: p.semantic_type for p in transition.output})


def io_names(contract: Contract) -> set[str]:
    """Every input/output data name declared by any transition."""
    return {p.name for t in contract.transitions for p in (*t.input, *t.output)}


# ──────────────────────────────────────────────────────────────────────────
# Structural check
# ──────────────────────────────────────────────────────────────────────────
def core_shaped(node) -> bool:
    """True when every construct of the AST belongs to the interpretable core."""
    if isinstance(node, (IntLit, BoolLit, AddressLit, DurationLit)):
        return True
    if isinstance(node, Ident):
        return node.name != MSG
    if isinstance(node, Member):
        if isinstance(node.base, Ident) and node.base.name == MSG:
            return node.member in ENVIRONMENT_MEMBERS
        return core_shaped(node.base)
    if isinstance(node, Index):
        return core_shaped(node.base) and core_shaped(node.index)
    if isinstance(node, Unary):
        return node.op in CORE_UNARY_OPS and core_shaped(node.operand)
    if isinstance(node, Binary):
        return node.op in CORE_BINARY_OPS and core_shaped(node.left) and core_shaped(node.right)
    # StringLit, TypeName, Call
    return False


def compatible(a: TypeRef, b: TypeRef) -> bool:
    return a == b or (is_numeric(a) and is_numeric(b))


def assignable(target: TypeRef, value: TypeRef) -> bool:
    return compatible(target, value)


# ──────────────────────────────────────────────────────────────────────────
# Inference
# ──────────────────────────────────────────────────────────────────────────
def infer(node, env: TypeEnv) -> TypeRef:
    if isinstance(node, IntLit):
        return UINT
    if isinstance(node, BoolLit):
        return BOOL
    if isinstance(node, AddressLit):
        return ADDRESS
    if isinstance(node, DurationLit):
        return UINT
    if isinstance(node, (StringLit, TypeName, Call)):
        raise TypeCheckError("not_core", f"{type(node).__name__} is outside the interpretable core")
    if isinstance(node, Ident):
        t = env.lookup(node.name)
        if t is not None:
            return t
        if node.name == NOW:
            return UINT
        if node.name == MSG:
            raise TypeCheckError("not_core", "bare 'msg' is not a value")
        raise TypeCheckError("unknown_symbol", f"unknown symbol '{node.name}'", symbol=node.name)
    if isinstance(node, Member):
        return _infer_member(node, env)
    if isinstance(node, Index):
        base = infer(node.base, env)
        index = infer(node.index, env)
        if isinstance(base, MappingType):
            if not compatible(base.key, index):
                raise TypeCheckError("mismatch", "mapping key type mismatch")
            return base.value
        if isinstance(base, ArrayType):
            if not is_numeric(index):
                raise TypeCheckError("mismatch", "array index must be numeric")
            return base.element
        raise TypeCheckError("mismatch", "indexing a value that is neither mapping nor array")
    if isinstance(node, Unary):
        if node.op not in CORE_UNARY_OPS:
            raise TypeCheckError("not_core", f"unary '{node.op}' is outside the core")
        operand = infer(node.operand, env)
        if node.op == "!":
            if operand != BOOL:
                raise TypeCheckError("mismatch", "'!' expects bool")
            return BOOL
        if not is_numeric(operand):
            raise TypeCheckError("mismatch", "unary '-' expects a number")
        return INT
    if isinstance(node, Binary):
        return _infer_binary(node, env)
    raise TypeCheckError("not_core", f"unsupported node {type(node).__name__}")


def _infer_member(node: Member, env: TypeEnv) -> TypeRef:
    if isinstance(node.base, Ident) and node.base.name == MSG and MSG not in env:
        kind = ENVIRONMENT_MEMBERS.get(node.member)
        if kind is None:
            raise TypeCheckError("not_core", f"msg.{node.member} is outside the core")
        return ADDRESS if kind == "address" else UINT
    base = infer(node.base, env)
    if isinstance(base, StructRef):
        decl = env.struct(base.name)
        if decl is None:
            raise TypeCheckError("unknown_symbol", f"unknown struct '{base.name}'", symbol=base.name)
        field = decl.field_type(node.member)
        if field is None:
            raise TypeCheckError("mismatch", f"struct {base.name} has no field '{node.member}'")
        return field
    if isinstance(base, ArrayType) and node.member == "length":
        return UINT
    raise TypeCheckError("not_core", f"member '{node.member}' is outside the core")


def _infer_binary(node: Binary, env: TypeEnv) -> TypeRef:
    if node.op not in CORE_BINARY_OPS:
        raise TypeCheckError("not_core", f"operator '{node.op}' is outside the core")
    left = infer(node.left, env)
    right = infer(node.right, env)
    if node.op in ("&&", "||"):
        if left != BOOL or right != BOOL:
            raise TypeCheckError("mismatch", f"'{node.op}' expects bool operands")
        return BOOL
    if node.op in ("==", "!="):
        if not compatible(left, right) or not isinstance(left, ElementaryType):
            raise TypeCheckError("mismatch", f"'{node.op}' operands are not comparable")
        return BOOL
    if not (is_numeric(left) and is_numeric(right)):
        raise TypeCheckError("mismatch", f"'{node.op}' expects numeric operands")
    if node.op in ("<", "<=", ">", ">="):
        return BOOL
    return INT if INT in (left, right) else UINT


def lvalue_root(node) -> str | None:
    """Name of the variable an assignment target writes to, if it is an lvalue."""
    while isinstance(node, (Index, Member)):
        if isinstance(node, Member) and isinstance(node.base, Ident) and node.base.name == MSG:
            return None
        node = node.base
    if isinstance(node, Ident) and node.name not in (NOW, MSG):
        return node.name
    return None
