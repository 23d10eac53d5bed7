# models/runtime.py
# ─────────────────────────────────────────────────────────────────────────────
"""Interpreter runtime values: environment, instance state, invocations, traces."""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class RejectionCode(str, Enum):
    LOCKED = "R_LOCKED"
    BAD_COUNTER = "R_BAD_COUNTER"
    NOT_ADMIN = "R_NOT_ADMIN"
    WRONG_STATE = "R_WRONG_STATE"
    GUARD_FALSE = "R_GUARD_FALSE"
    NOT_PAYABLE = "R_NOT_PAYABLE"
    OVERFLOW = "R_OVERFLOW"
    INSUFFICIENT_BALANCE = "R_INSUFFICIENT_BALANCE"
    INDEX_OUT_OF_RANGE = "R_INDEX_OUT_OF_RANGE"
    LAST_ADMIN = "E_LAST_ADMIN"


class Env(BaseModel):
    now: int = Field(ge=0)
    sender: str
    value: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True)


class InstanceState(BaseModel):
    """
    Complete runtime state of one contract instance.

    Mappings are nested dicts holding only written keys; reads of absent keys
    yield the value type's zero.
    """

    current_state: str
    store: dict[str, Any] = Field(default_factory=dict)
    locked: bool = False
    counter: int = 0
    creation_time: int = 0
    admin_set: list[str] = Field(default_factory=list)  # insertion ordered, no duplicates
    balance: int = 0

    def fingerprint(self) -> tuple:
        """Hashable snapshot used for state de-duplication in searches."""
        return (
            self.current_state,
            _freeze(self.store),
            self.locked,
            self.counter,
            tuple(self.admin_set),
            self.balance,
        )


def _freeze(value: Any) -> Any:
    if isinstance(value, dict):
        return tuple(sorted(((repr(k), _freeze(v)) for k, v in value.items())))
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


class Invocation(BaseModel):
    transition: str
    env: Env
    args: dict[str, Any] = Field(default_factory=dict)
    counter_arg: Optional[int] = None
    reentry: Optional["Invocation"] = None

    model_config = ConfigDict(frozen=True)

    def without_reentry(self) -> "Invocation":
        return self.model_copy(update={"reentry": None})

    def flatten(self) -> list["Invocation"]:
        """This call followed by its nested reentry chain, each without reentry."""
        chain: list[Invocation] = []
        call: Invocation | None = self
        while call is not None:
            chain.append(call.without_reentry())
            call = call.reentry
        return chain


Invocation.model_rebuild()


class Accepted(BaseModel):
    status: Literal["accepted"] = "accepted"
    new_state: str
    outputs: dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)


class Rejected(BaseModel):
    status: Literal["rejected"] = "rejected"
    code: RejectionCode

    model_config = ConfigDict(frozen=True)


Outcome = Annotated[Union[Accepted, Rejected], Field(discriminator="status")]


class TraceEntry(BaseModel):
    invocation: Invocation   # stored without its reentry; nested frames follow at depth + 1
    outcome: Outcome
    depth: int = 0

    model_config = ConfigDict(frozen=True)

    @property
    def accepted(self) -> bool:
        return isinstance(self.outcome, Accepted)


class Trace(BaseModel):
    entries: list[TraceEntry] = Field(default_factory=list)
    final_state: Optional[InstanceState] = None

    @property
    def top_level(self) -> list[TraceEntry]:
        return [e for e in self.entries if e.depth == 0]

    @property
    def all_accepted(self) -> bool:
        return all(e.accepted for e in self.top_level)

    @property
    def max_accepted_depth(self) -> int:
        return max((e.depth for e in self.entries if e.accepted), default=-1)
