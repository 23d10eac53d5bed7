# models/plugins.py
# ─────────────────────────────────────────────────────────────────────────────
"""Plugin selection and the woven (augmented) contract."""

from __future__ import annotations

from enum import Enum
from typing import Final, Iterable

from pydantic import BaseModel, ConfigDict, Field

from .contract import Contract, Variable

# CLI / report names for each plugin, in canonical order.
PLUGIN_NAMES: Final[tuple[str, ...]] = ("locking", "counter", "timed", "access")


class PluginSet(BaseModel):
    locking: bool = False
    transition_counter: bool = False
    timed_transitions: bool = False
    access_control: bool = False

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "PluginSet":
        wanted = {n.strip() for n in names if n.strip()}
        unknown = wanted - set(PLUGIN_NAMES)
        if unknown:
            raise ValueError(f"unknown plugin(s): {', '.join(sorted(unknown))}")
        return cls(
            locking="locking" in wanted,
            transition_counter="counter" in wanted,
            timed_transitions="timed" in wanted,
            access_control="access" in wanted,
        )

    @classmethod
    def all_combinations(cls) -> list["PluginSet"]:
        """The 16 combinations, in binary order over (locking, counter, timed, access)."""
        return [
            cls(
                locking=bool(i & 8),
                transition_counter=bool(i & 4),
                timed_transitions=bool(i & 2),
                access_control=bool(i & 1),
            )
            for i in range(16)
        ]

    @property
    def names(self) -> list[str]:
        flags = (self.locking, self.transition_counter, self.timed_transitions, self.access_control)
        return [name for name, on in zip(PLUGIN_NAMES, flags) if on]

    @property
    def slug(self) -> str:
        return "-".join(self.names) or "none"


class WrapperKind(str, Enum):
    """Per-transition plugin wrappers, declared in application order."""

    LOCKING = "locking"
    TRANSITION_COUNTING = "transitionCounting"
    TIMED_TRANSITIONS = "timedTransitions"
    ACCESS_GUARD = "onlyAdmin"


WRAPPER_ORDER: Final[tuple[WrapperKind, ...]] = tuple(WrapperKind)


class AdminAction(str, Enum):
    ADD = "add"
    REMOVE = "remove"


class AdminTransition(BaseModel):
    """Generated, state-independent admin-management entry point."""

    name: str
    action: AdminAction
    parameter: Variable

    model_config = ConfigDict(frozen=True)


class TransitionWeave(BaseModel):
    transition: str
    wrappers: list[WrapperKind] = Field(default_factory=list)
    extra_inputs: list[Variable] = Field(default_factory=list)
    generated: bool = False

    model_config = ConfigDict(frozen=True)


class AugmentedContract(BaseModel):
    """
    Result of weaving. Deliberately not a Contract subclass so it cannot be
    woven a second time.
    """

    base: Contract
    plugins: PluginSet
    extra_variables: list[Variable] = Field(default_factory=list)
    weaves: list[TransitionWeave] = Field(default_factory=list)
    generated_transitions: list[AdminTransition] = Field(default_factory=list)
    inject_creation_time: bool = True

    model_config = ConfigDict(frozen=True)

    @property
    def wrappers(self) -> dict[str, list[WrapperKind]]:
        return {w.transition: list(w.wrappers) for w in self.weaves}

    @property
    def extra_inputs(self) -> dict[str, list[Variable]]:
        return {w.transition: list(w.extra_inputs) for w in self.weaves if w.extra_inputs}

    def weave_for(self, name: str) -> TransitionWeave | None:
        return next((w for w in self.weaves if w.transition == name), None)

    def admin_transition(self, name: str) -> AdminTransition | None:
        return next((g for g in self.generated_transitions if g.name == name), None)
