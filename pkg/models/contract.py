# models/contract.py
# ─────────────────────────────────────────────────────────────────────────────
"""
The FSM contract model.

A Contract is a tree of frozen pydantic models. Structural well-formedness is
enforced by the types; semantic rules (exactly one initial state, unique
names, known state references …) are checked by ``compiler.fsm.validate`` so
that a broken contract can still be represented and reported on.
"""

from __future__ import annotations

from enum import Enum
from typing import Final, Iterator, Optional

from pydantic import BaseModel, ConfigDict, Field

from .expressions import Expression, Statement
from .types import TypeRef


class VariableKind(str, Enum):
    CONTRACT_DATA = "ContractData"
    INPUT_DATA = "InputData"
    OUTPUT_DATA = "OutputData"


class Visibility(str, Enum):
    PUBLIC = "public"
    PRIVATE = "private"


class Tag(str, Enum):
    PAYABLE = "payable"
    ADMIN = "admin"
    EVENT = "event"


# Canonical tag order used by the serializer and the emitter.
TAG_ORDER: Final[tuple[Tag, ...]] = (Tag.PAYABLE, Tag.ADMIN, Tag.EVENT)

# Implicit contract variable injected by the code generator.
CREATION_TIME: Final[str] = "creationTime"


class StateDecl(BaseModel):
    name: str
    is_initial: bool = False

    model_config = ConfigDict(frozen=True)


class Variable(BaseModel):
    name: str
    kind: VariableKind
    semantic_type: TypeRef
    visibility: Optional[Visibility] = None   # ContractData only
    initializer: Optional[Expression] = None

    model_config = ConfigDict(frozen=True)


class StructField(BaseModel):
    name: str
    semantic_type: TypeRef

    model_config = ConfigDict(frozen=True)


class StructDecl(BaseModel):
    name: str
    fields: list[StructField]

    model_config = ConfigDict(frozen=True)

    def field_type(self, name: str) -> TypeRef | None:
        return next((f.semantic_type for f in self.fields if f.name == name), None)


class Transition(BaseModel):
    """Edge with its six attribute groups: name, guards, input, output, statements, tags."""

    name: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    guards: list[Expression] = Field(default_factory=list)
    input: list[Variable] = Field(default_factory=list)
    output: list[Variable] = Field(default_factory=list)
    statements: list[Statement] = Field(default_factory=list)
    tags: frozenset[Tag] = frozenset()

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @property
    def is_payable(self) -> bool:
        return Tag.PAYABLE in self.tags

    @property
    def is_admin(self) -> bool:
        return Tag.ADMIN in self.tags

    @property
    def emits_event(self) -> bool:
        return Tag.EVENT in self.tags

    @property
    def sorted_tags(self) -> list[Tag]:
        return [t for t in TAG_ORDER if t in self.tags]


class TimedTransition(BaseModel):
    name: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    guards: list[Expression] = Field(default_factory=list)
    statements: list[Statement] = Field(default_factory=list)
    time: int  # seconds since contract creation

    model_config = ConfigDict(frozen=True, populate_by_name=True)


class Contract(BaseModel):
    name: str
    states: list[StateDecl] = Field(default_factory=list)
    variables: list[Variable] = Field(default_factory=list)
    custom_types: list[StructDecl] = Field(default_factory=list)
    transitions: list[Transition] = Field(default_factory=list)
    timed_transitions: list[TimedTransition] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    # ── lookups ───────────────────────────────────────────────────────────
    @property
    def initial_states(self) -> list[StateDecl]:
        return [s for s in self.states if s.is_initial]

    @property
    def initial_state(self) -> str:
        """Name of the unique initial state (caller guarantees uniqueness)."""
        initial = self.initial_states
        if len(initial) != 1:
            raise ValueError(f"contract {self.name} has {len(initial)} initial states")
        return initial[0].name

    @property
    def state_names(self) -> list[str]:
        return [s.name for s in self.states]

    def variable(self, name: str) -> Variable | None:
        return next((v for v in self.variables if v.name == name), None)

    def struct(self, name: str) -> StructDecl | None:
        return next((s for s in self.custom_types if s.name == name), None)

    def transition(self, name: str) -> Transition | None:
        return next((t for t in self.transitions if t.name == name), None)

    def timed_transition(self, name: str) -> TimedTransition | None:
        return next((t for t in self.timed_transitions if t.name == name), None)

    def timed_in_firing_order(self) -> list[TimedTransition]:
        """Ascending time, ties broken by declaration order."""
        indexed = list(enumerate(self.timed_transitions))
        return [t for _, t in sorted(indexed, key=lambda it: (it[1].time, it[0]))]

    def declares_creation_time(self) -> bool:
        return self.variable(CREATION_TIME) is not None

    def all_edges(self) -> Iterator[tuple[str, str, str, bool]]:
        """(name, from, to, timed) for every transition and timed transition."""
        for t in self.transitions:
            yield t.name, t.source, t.target, False
        for tt in self.timed_transitions:
            yield tt.name, tt.source, tt.target, True
