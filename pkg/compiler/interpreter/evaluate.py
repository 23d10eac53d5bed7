# compiler/interpreter/evaluate.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Core expression / statement semantics.

Values
    uint, int   Python int, range-checked after every arithmetic step
    bool        bool
    address     str
    bytes32     str (opaque)
    string      str
    mapping     dict holding only non-zero entries; absent keys read as zero
    array       list
    struct      dict field → value

A modeled failure raises ``Rejection``; the caller turns it into a
``Rejected`` outcome and rolls the instance back.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Annotated, Any, Callable, Final

from pydantic import Field, StrictBool, StrictInt, StrictStr, TypeAdapter

from models.contract import CREATION_TIME, StructDecl
from models.expressions import (
    AddressLit, Assign, Binary, BoolLit, Call, DurationLit, Ident, Index, IntLit,
    LocalDecl, MappingPush, Member, OpaqueStatement, Send, Unary,
)
from models.runtime import Env, InstanceState, RejectionCode
from models.types import INT, UINT, ArrayType, ElementaryType, MappingType, StructRef, TypeRef

from compiler.fsm.typecheck import NOW, MSG, TypeEnv, infer

UINT_MAX: Final[int] = 2**256 - 1
INT_MIN: Final[int] = -(2**255)
INT_MAX: Final[int] = 2**255 - 1
ZERO_ADDRESS: Final[str] = "0x" + "0" * 40
ZERO_BYTES32: Final[str] = "0x" + "0" * 64


class Rejection(Exception):
    def __init__(self, code: RejectionCode) -> None:
        super().__init__(code.value)
        self.code = code


# ──────────────────────────────────────────────────────────────────────────
# Zero values
# ──────────────────────────────────────────────────────────────────────────
_ELEMENTARY_ZERO: Final[dict[str, Any]] = {
    "uint": 0,
    "int": 0,
    "bool": False,
    "address": ZERO_ADDRESS,
    "bytes32": ZERO_BYTES32,
    "string": "",
}


def zero_value(t: TypeRef, structs: dict[str, StructDecl]) -> Any:
    if isinstance(t, ElementaryType):
        return _ELEMENTARY_ZERO[t.name]
    if isinstance(t, MappingType):
        return {}
    if isinstance(t, ArrayType):
        return []
    decl = structs[t.name]
    return {f.name: zero_value(f.semantic_type, structs) for f in decl.fields}


def is_zero(value: Any) -> bool:
    return value in (0, False, ZERO_ADDRESS, ZERO_BYTES32, "") and not isinstance(value, (dict, list))


def check_range(value: int, t: TypeRef) -> int:
    if t == INT:
        if not INT_MIN <= value <= INT_MAX:
            raise Rejection(RejectionCode.OVERFLOW)
    elif not 0 <= value <= UINT_MAX:
        raise Rejection(RejectionCode.OVERFLOW)
    return value


def checked(value: Any, t: TypeRef) -> Any:
    """Range-check ``value`` when ``t`` is an integer type; other values pass through."""
    if isinstance(t, ElementaryType) and t.name in ("uint", "int"):
        return check_range(value, t)
    return value


# Invocation arguments
_ARGUMENT_TYPES: Final[dict[str, Any]] = {
    "uint": Annotated[StrictInt, Field(ge=0, le=UINT_MAX)],
    "int": Annotated[StrictInt, Field(ge=INT_MIN, le=INT_MAX)],
    "bool": StrictBool,
    "address": Annotated[StrictStr, Field(min_length=1)],
    "bytes32": Annotated[StrictStr, Field(pattern=r"^0x[0-9a-fA-F]{64}$")],
    "string": StrictStr,
}


@lru_cache(maxsize=None)
def argument_adapter(type_name: str) -> TypeAdapter:
    return TypeAdapter(_ARGUMENT_TYPES[type_name])


def is_default(value: Any, t: TypeRef, structs: dict[str, StructDecl]) -> bool:
    """True when ``value`` is the zero value of ``t``, so a mapping need not hold it."""
    if isinstance(t, StructRef):
        decl = structs[t.name]
        return all(is_default(value[f.name], f.semantic_type, structs) for f in decl.fields)
    return value == zero_value(t, structs)


# ──────────────────────────────────────────────────────────────────────────
# Frame
# ──────────────────────────────────────────────────────────────────────────
SendHook = Callable[[str, int], None]


class Frame:
    """Evaluation context for one transition body (or initializer / timed block)."""

    def __init__(
        self,
        state: InstanceState,
        env: Env,
        types: TypeEnv,
        locals_: dict[str, Any] | None = None,
        on_send: SendHook | None = None,
    ) -> None:
        self.state = state
        self.env = env
        self.types = types
        self.locals: dict[str, Any] = dict(locals_ or {})
        self.on_send = on_send
        self._structs: dict[str, StructDecl] = {}

    def struct_decls(self) -> dict[str, StructDecl]:
        if not self._structs:
            self._structs = {n: self.types.struct(n) for n in self.types.struct_names}
        return self._structs

    def zero(self, t: TypeRef) -> Any:
        return zero_value(t, self.struct_decls())

    def type_of(self, node) -> TypeRef:
        return infer(node, self.types)

    # ── reads ─────────────────────────────────────────────────────────────
    def eval(self, node) -> Any:
        match node:
            case IntLit(value=v):
                return v
            case BoolLit(value=v):
                return v
            case AddressLit(value=v):
                return v
            case DurationLit():
                return node.seconds
            case Ident(name=name):
                return self._lookup(name)
            case Member(base=Ident(name=base), member=member) if base == MSG and MSG not in self.types:
                return self.env.sender if member == "sender" else self.env.value
            case Member(base=base, member="length") if isinstance(self.type_of(base), ArrayType):
                return len(self.eval(base))
            case Member(base=base, member=member):
                return self.eval(base)[member]
            case Index(base=base, index=index):
                return self._read_index(node, base, index)
            case Unary(op="!", operand=operand):
                return not self.eval(operand)
            case Unary(op="-", operand=operand):
                # a negated uint stays a uint: only -0 is representable
                signed = isinstance(operand, IntLit) or self.type_of(operand) == INT
                return check_range(-self.eval(operand), INT if signed else UINT)
            case Binary(op="&&", left=left, right=right):
                return bool(self.eval(left)) and bool(self.eval(right))
            case Binary(op="||", left=left, right=right):
                return bool(self.eval(left)) or bool(self.eval(right))
            case Binary(op=op, left=left, right=right):
                return self._binary(node, op, self.eval(left), self.eval(right))
        raise TypeError(f"cannot evaluate {type(node).__name__}")

    def _lookup(self, name: str) -> Any:
        if name in self.locals:
            return self.locals[name]
        if name in self.state.store:
            return self.state.store[name]
        if name == CREATION_TIME:
            return self.state.creation_time
        if name == NOW:
            return self.env.now
        raise KeyError(name)

    def _read_index(self, node, base, index) -> Any:
        container = self.eval(base)
        key = self.eval(index)
        if isinstance(container, list):
            if not 0 <= key < len(container):
                raise Rejection(RejectionCode.INDEX_OUT_OF_RANGE)
            return container[key]
        if key in container:
            return container[key]
        return self.zero(self.type_of(node))

    def _binary(self, node, op: str, a: Any, b: Any) -> Any:
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        result_type = self.type_of(node)
        if op == "+":
            return check_range(a + b, result_type)
        if op == "-":
            return check_range(a - b, result_type)
        if op == "*":
            return check_range(a * b, result_type)
        raise TypeError(f"operator {op} is outside the core")

    # ── writes ────────────────────────────────────────────────────────────
    def _container(self, node) -> Any:
        """The mutable dict / list a path designates, materialising mapping entries."""
        match node:
            case Ident(name=name):
                if name in self.locals:
                    return self.locals[name]
                return self.state.store[name]
            case Member(base=base, member=member):
                return self._container(base)[member]
            case Index(base=base, index=index):
                parent = self._container(base)
                key = self.eval(index)
                if isinstance(parent, list):
                    if not 0 <= key < len(parent):
                        raise Rejection(RejectionCode.INDEX_OUT_OF_RANGE)
                    return parent[key]
                if key not in parent:
                    parent[key] = self.zero(self.type_of(node))
                return parent[key]
        raise TypeError(f"{type(node).__name__} is not assignable")

    def _peek(self, node) -> Any:
        """The value a path designates without materialising anything; None when absent."""
        match node:
            case Ident(name=name):
                return self.locals[name] if name in self.locals else self.state.store.get(name)
            case Member(base=base, member=member):
                parent = self._peek(base)
                return None if parent is None else parent.get(member)
            case Index(base=base, index=index):
                parent = self._peek(base)
                if parent is None:
                    return None
                key = self.eval(index)
                if isinstance(parent, list):
                    return parent[key] if 0 <= key < len(parent) else None
                return parent.get(key)
        return None

    def _prune(self, node) -> None:
        """Drop mapping entries on the path to ``node`` that hold only zero values."""
        while isinstance(node, (Index, Member)):
            if isinstance(node, Index) and isinstance(self.type_of(node.base), MappingType):
                parent = self._peek(node.base)
                key = self.eval(node.index)
                if isinstance(parent, dict) and key in parent \
                        and is_default(parent[key], self.type_of(node), self.struct_decls()):
                    del parent[key]
            node = node.base

    def write(self, target, value: Any) -> None:
        if isinstance(value, int) and not isinstance(value, bool):
            checked(value, self.type_of(target))
        match target:
            case Ident(name=name):
                if name in self.locals:
                    self.locals[name] = value
                elif name in self.state.store:
                    self.state.store[name] = value
                elif name == CREATION_TIME:
                    self.state.creation_time = value
                else:
                    raise KeyError(name)
            case Member(base=base, member=member):
                self._container(base)[member] = value
            case Index(base=base, index=index):
                parent = self._container(base)
                key = self.eval(index)
                if isinstance(parent, list):
                    if not 0 <= key < len(parent):
                        raise Rejection(RejectionCode.INDEX_OUT_OF_RANGE)
                    parent[key] = value
                elif is_zero(value):
                    parent.pop(key, None)
                else:
                    parent[key] = value
            case _:
                raise TypeError(f"{type(target).__name__} is not assignable")
        self._prune(target)

    # ── statements ────────────────────────────────────────────────────────
    def execute(self, stmt) -> None:
        match stmt:
            case Assign(target=target, op="=", value=value):
                self.write(target, self.eval(value))
            case Assign(target=target, op=op, value=value):
                current, delta = self.eval(target), self.eval(value)
                self.write(target, current + delta if op == "+=" else current - delta)
            case MappingPush(target=target, value=literal):
                self._push(target, literal)
            case Send(recipient=recipient, amount=amount):
                self._send(self.eval(recipient), self.eval(amount))
            case LocalDecl(type_name=type_name, name=name, value=value):
                local_type = ElementaryType(name=type_name)
                self.types = self.types.extend({name: local_type})
                self.locals[name] = self.zero(local_type) if value is None else checked(self.eval(value), local_type)
            case OpaqueStatement():
                raise TypeError("opaque statements are not executable")
            case _:
                raise TypeError(f"cannot execute {type(stmt).__name__}")

    def _push(self, target, literal: Call) -> None:
        array = self._container(target)
        struct_type = self.type_of(target)
        if not (isinstance(struct_type, ArrayType) and isinstance(struct_type.element, StructRef)):
            raise TypeError("push target is not a struct array")
        decl = self.struct_decls()[struct_type.element.name]
        element = self.zero(struct_type.element)
        for arg in literal.named_args or []:
            element[arg.name] = checked(self.eval(arg.value), decl.field_type(arg.name))
        array.append(element)

    def _send(self, recipient: str, amount: int) -> None:
        if amount < 0:
            raise Rejection(RejectionCode.OVERFLOW)
        if amount > self.state.balance:
            raise Rejection(RejectionCode.INSUFFICIENT_BALANCE)
        self.state.balance -= amount
        if self.on_send is not None:
            self.on_send(recipient, amount)
