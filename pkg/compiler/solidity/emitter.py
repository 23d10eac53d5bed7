# compiler/solidity/emitter.py
# ─────────────────────────────────────────────────────────────────────────────
"""
AugmentedContract → Solidity source.

The output is a sequence of blank-line separated sections:

    pragma / contract header
    enum States            (initial state first)
    state + creationTime
    structs, contract variables
    plugin members         (variable, then modifier, per enabled plugin)
    events
    one function per entry point, each preceded by ``// Transition <name>``

Wrappers become modifiers applied in weave order. Opaque guards and
statements are copied verbatim.
"""

from __future__ import annotations

import logging
from typing import Final, Iterable

from pydantic import BaseModel, ConfigDict, Field

from models.contract import CREATION_TIME, Contract, TimedTransition, Transition, Variable
from models.diagnostic import has_errors
from models.errors import EmitError, InvalidContractError
from models.plugins import AdminAction, AdminTransition, AugmentedContract, TransitionWeave, WrapperKind
from models.types import render_type

from compiler.dsl.printer import render_expression, render_statement
from compiler.dsl.serializer import render_duration
from compiler.fsm.validate import validate
from compiler.weaver.weave import (
    ADMIN_COUNT_VARIABLE, ADMINS_VARIABLE, COUNTER_PARAMETER, COUNTER_VARIABLE, LOCK_VARIABLE,
)

log = logging.getLogger(__name__)

DEFAULT_PRAGMA: Final[str] = "^0.4.17"
DEFAULT_INDENT: Final[int] = 4
STATE_ENUM: Final[str] = "States"
STATE_VARIABLE: Final[str] = "state"


class EmitOptions(BaseModel):
    pragma_version: str = Field(default=DEFAULT_PRAGMA, min_length=1)
    indent: int = Field(default=DEFAULT_INDENT, ge=1, le=8)

    model_config = ConfigDict(frozen=True)


def modifier_call(kind: WrapperKind) -> str:
    """How a wrapper is applied in a function header."""
    if kind is WrapperKind.TRANSITION_COUNTING:
        return f"{kind.value}({COUNTER_PARAMETER})"
    return kind.value


def ordered_states(contract: Contract) -> list[str]:
    initial = contract.initial_state
    return [initial] + [s for s in contract.state_names if s != initial]


def event_name(transition: str) -> str:
    return f"{transition}Event"


class _Writer:
    """Indented line builder for one function / modifier block."""

    def __init__(self, unit: str) -> None:
        self.unit = unit
        self.lines: list[str] = []

    def add(self, depth: int, text: str) -> None:
        self.lines.append(f"{self.unit * depth}{text}")

    def extend(self, depth: int, texts: Iterable[str]) -> None:
        for text in texts:
            self.add(depth, text)


class SolidityEmitter:
    def __init__(self, aug: AugmentedContract, opts: EmitOptions) -> None:
        self.aug = aug
        self.base = aug.base
        self.opts = opts
        self.unit = " " * opts.indent

    # ── helpers ────────────────────────────────────────────────────────────
    def _w(self) -> _Writer:
        return _Writer(self.unit)

    def _render_statements(self, statements) -> list[str]:
        try:
            return [render_statement(s) for s in statements]
        except TypeError as exc:
            raise EmitError(str(exc)) from exc

    def _variable(self, v: Variable) -> str:
        init = f" = {render_expression(v.initializer)}" if v.initializer is not None else ""
        visibility = v.visibility.value if v.visibility is not None else "private"
        return f"{render_type(v.semantic_type)} {visibility} {v.name}{init};"

    # ── sections ───────────────────────────────────────────────────────────
    def _enum(self) -> list[str]:
        w = self._w()
        w.add(1, f"enum {STATE_ENUM} {{")
        names = ordered_states(self.base)
        w.extend(2, [f"{n}," for n in names[:-1]] + [names[-1]])
        w.add(1, "}")
        return w.lines

    def _state_variables(self) -> list[str]:
        w = self._w()
        w.add(1, f"{STATE_ENUM} private {STATE_VARIABLE} = {STATE_ENUM}.{self.base.initial_state};")
        if self.aug.inject_creation_time:
            w.add(1, f"uint private {CREATION_TIME} = now;")
        return w.lines

    def _structs(self) -> list[list[str]]:
        sections = []
        for s in self.base.custom_types:
            w = self._w()
            w.add(1, f"struct {s.name} {{")
            w.extend(2, [f"{render_type(f.semantic_type)} {f.name};" for f in s.fields])
            w.add(1, "}")
            sections.append(w.lines)
        return sections

    def _user_variables(self) -> list[list[str]]:
        if not self.base.variables:
            return []
        w = self._w()
        w.extend(1, [self._variable(v) for v in self.base.variables])
        return [w.lines]

    def _extra(self, name: str) -> Variable:
        return next(v for v in self.aug.extra_variables if v.name == name)

    def _locking(self) -> list[list[str]]:
        decl = self._w()
        decl.add(1, self._variable(self._extra(LOCK_VARIABLE)))
        mod = self._w()
        mod.add(1, f"modifier {WrapperKind.LOCKING.value} {{")
        mod.extend(2, [f"require(!{LOCK_VARIABLE});", f"{LOCK_VARIABLE} = true;", "_;", f"{LOCK_VARIABLE} = false;"])
        mod.add(1, "}")
        return [decl.lines, mod.lines]

    def _counter(self) -> list[list[str]]:
        decl = self._w()
        decl.add(1, self._variable(self._extra(COUNTER_VARIABLE)))
        mod = self._w()
        mod.add(1, f"modifier {WrapperKind.TRANSITION_COUNTING.value}(uint {COUNTER_PARAMETER}) {{")
        mod.extend(2, [
            f"require({COUNTER_PARAMETER} == {COUNTER_VARIABLE});",
            f"{COUNTER_VARIABLE} += 1;",
            "_;",
        ])
        mod.add(1, "}")
        return [decl.lines, mod.lines]

    def _timed_block(self, w: _Writer, tt: TimedTransition) -> None:
        conditions = [
            f"{STATE_VARIABLE} == {STATE_ENUM}.{tt.source}",
            f"now >= {CREATION_TIME} + {render_duration(tt.time)}",
        ]
        conditions += [f"({render_expression(g)})" for g in tt.guards]
        w.add(2, f"if ({' && '.join(conditions)}) {{")
        w.extend(3, self._render_statements(tt.statements))
        if tt.source != tt.target:
            w.add(3, f"{STATE_VARIABLE} = {STATE_ENUM}.{tt.target};")
        w.add(2, "}")

    def _timed(self) -> list[list[str]]:
        w = self._w()
        w.add(1, f"modifier {WrapperKind.TIMED_TRANSITIONS.value} {{")
        for tt in self.base.timed_in_firing_order():
            self._timed_block(w, tt)
        w.add(2, "_;")
        w.add(1, "}")
        return [w.lines]

    def _access(self) -> list[list[str]]:
        decl = self._w()
        decl.add(1, self._variable(self._extra(ADMINS_VARIABLE)))
        decl.add(1, self._variable(self._extra(ADMIN_COUNT_VARIABLE)))
        ctor = self._w()
        ctor.add(1, f"function {self.base.name}() public {{")
        ctor.add(2, f"{ADMINS_VARIABLE}[msg.sender] = true;")
        ctor.add(1, "}")
        mod = self._w()
        mod.add(1, f"modifier {WrapperKind.ACCESS_GUARD.value} {{")
        mod.extend(2, [f"require({ADMINS_VARIABLE}[msg.sender]);", "_;"])
        mod.add(1, "}")
        return [decl.lines, ctor.lines, mod.lines]

    def _events(self) -> list[list[str]]:
        names = [t.name for t in self.base.transitions if t.emits_event]
        if not names:
            return []
        w = self._w()
        w.extend(1, [f"event {event_name(n)}();" for n in names])
        return [w.lines]

    # ── functions ──────────────────────────────────────────────────────────
    def _header(self, name: str, params: list[Variable], weave: TransitionWeave,
                payable: bool, outputs: list[Variable]) -> str:
        all_params = [*params, *weave.extra_inputs]
        parts = [f"function {name}({', '.join(f'{render_type(p.semantic_type)} {p.name}' for p in all_params)})"]
        parts += [modifier_call(k) for k in weave.wrappers]
        if payable:
            parts.append("payable")
        if outputs:
            parts.append(f"returns ({', '.join(f'{render_type(p.semantic_type)} {p.name}' for p in outputs)})")
        return " ".join(parts) + " {"

    def _transition(self, t: Transition) -> list[str]:
        weave = self.aug.weave_for(t.name)
        if weave is None:
            raise EmitError(f"transition {t.name} was not woven")
        w = self._w()
        w.add(1, f"// Transition {t.name}")
        w.add(1, self._header(t.name, t.input, weave, t.is_payable, t.output))
        w.add(2, f"require({STATE_VARIABLE} == {STATE_ENUM}.{t.source});")
        w.extend(2, [f"require({render_expression(g)});" for g in t.guards])
        w.extend(2, self._render_statements(t.statements))
        if t.source != t.target:
            w.add(2, f"{STATE_VARIABLE} = {STATE_ENUM}.{t.target};")
        if t.emits_event:
            # 0.4.17 has no `emit` keyword; a bare call fires the event
            w.add(2, f"{event_name(t.name)}();")
        w.add(1, "}")
        return w.lines

    def _admin(self, g: AdminTransition) -> list[str]:
        weave = self.aug.weave_for(g.name)
        if weave is None:
            raise EmitError(f"generated transition {g.name} was not woven")
        p = g.parameter.name
        w = self._w()
        w.add(1, f"// Transition {g.name}")
        w.add(1, self._header(g.name, [g.parameter], weave, False, []))
        if g.action is AdminAction.ADD:
            w.add(2, f"if (!{ADMINS_VARIABLE}[{p}]) {{")
            w.extend(3, [f"{ADMINS_VARIABLE}[{p}] = true;", f"{ADMIN_COUNT_VARIABLE} += 1;"])
        else:
            w.add(2, f"if ({ADMINS_VARIABLE}[{p}]) {{")
            w.extend(3, [
                f"require({ADMIN_COUNT_VARIABLE} > 1);",
                f"{ADMINS_VARIABLE}[{p}] = false;",
                f"{ADMIN_COUNT_VARIABLE} -= 1;",
            ])
        w.add(2, "}")
        w.add(1, "}")
        return w.lines

    # ── driver ─────────────────────────────────────────────────────────────
    def emit(self) -> str:
        plugins = self.aug.plugins
        sections: list[list[str]] = [self._enum(), self._state_variables()]
        sections += self._structs()
        sections += self._user_variables()
        if plugins.locking:
            sections += self._locking()
        if plugins.transition_counter:
            sections += self._counter()
        if plugins.timed_transitions:
            sections += self._timed()
        if plugins.access_control:
            sections += self._access()
        sections += self._events()
        sections += [self._transition(t) for t in self.base.transitions]
        sections += [self._admin(g) for g in self.aug.generated_transitions]

        body = "\n\n".join("\n".join(section) for section in sections)
        return f"pragma solidity {self.opts.pragma_version};\n\ncontract {self.base.name} {{\n{body}\n}}\n"


def emit_solidity(aug: AugmentedContract, opts: EmitOptions | None = None) -> str:
    """Deterministic Solidity text for a woven contract."""
    opts = opts or EmitOptions()
    diagnostics = validate(aug.base)
    if has_errors(diagnostics):
        raise InvalidContractError(
            f"contract {aug.base.name} has errors; refusing to emit",
            diagnostics=[d for d in diagnostics if d.is_error],
        )
    text = SolidityEmitter(aug, opts).emit()
    log.debug("emitted %s [%s]: %d bytes", aug.base.name, aug.plugins.slug, len(text))
    return text
