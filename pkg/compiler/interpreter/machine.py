# compiler/interpreter/machine.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Abstract execution of a woven contract.

Design notes
------------
* Transaction semantics: ``invoke`` works on a deep copy; any rejection
  returns the untouched input state. Nested reentry frames snapshot the
  working copy first, so a rejected nested frame rolls back on its own and
  the outer frame carries on.
* Checks run in this order: payable, wrappers in weave order (locking,
  counter, timed transitions, access guard), then the body (state, guards,
  statements, state update).
* Reentry: at the first ``Send`` of a frame the invocation's ``reentry`` is
  attempted with ``msg.sender`` = the Send recipient at the outer ``now``.
* Trace entries are recorded pre-order: a frame's entry precedes the entries
  of the frames nested inside it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable

from pydantic import ValidationError

from models.contract import TimedTransition, Transition, Variable
from models.errors import InterpretationError
from models.expressions import CoreExpression, is_core
from models.plugins import AdminAction, AdminTransition, AugmentedContract, WrapperKind
from models.runtime import (
    Accepted, Env, InstanceState, Invocation, Outcome, Rejected, RejectionCode, Trace, TraceEntry,
)
from models.types import ElementaryType

from compiler.fsm.typecheck import TypeEnv, body_env, contract_env

from .evaluate import Frame, Rejection, argument_adapter

log = logging.getLogger(__name__)


@dataclass
class _Entry:
    """Resolved entry point: a user transition or a generated admin transition."""

    name: str
    transition: Transition | None = None
    admin: AdminTransition | None = None

    @property
    def payable(self) -> bool:
        return self.transition is not None and self.transition.is_payable


def _interpretable(items: Iterable) -> bool:
    return all(is_core(item) for item in items)


def _check_argument(transition: str, param: Variable, value: Any) -> None:
    t = param.semantic_type
    if not isinstance(t, ElementaryType):
        return
    try:
        argument_adapter(t.name).validate_python(value)
    except ValidationError as exc:
        raise InterpretationError(
            f"{transition}: argument {param.name}={value!r} is not a valid {t.name}", code="E_BAD_INVOCATION"
        ) from exc


def _restore(target: InstanceState, snapshot: InstanceState) -> None:
    for field in type(target).model_fields:
        setattr(target, field, getattr(snapshot, field))


class Interpreter:
    """Executes invocations against one AugmentedContract."""

    def __init__(self, aug: AugmentedContract) -> None:
        self.aug = aug
        self.base = aug.base
        self.plugins = aug.plugins
        self._contract_env: TypeEnv = contract_env(self.base)
        self._timed: list[TimedTransition] = (
            self.base.timed_in_firing_order() if self.plugins.timed_transitions else []
        )

    # ── setup ──────────────────────────────────────────────────────────────
    def init_instance(self, creation_time: int, creator: str) -> InstanceState:
        """Initial state, initializers evaluated in declaration order, creator as first admin."""
        state = InstanceState(
            current_state=self.base.initial_state,
            creation_time=creation_time,
            admin_set=[creator] if self.plugins.access_control else [],
        )
        frame = Frame(state, Env(now=creation_time, sender=creator), self._contract_env)
        for v in self.base.variables:
            if v.initializer is None:
                state.store[v.name] = frame.zero(v.semantic_type)
            elif isinstance(v.initializer, CoreExpression):
                try:
                    state.store[v.name] = frame.eval(v.initializer.ast)
                except Rejection as exc:
                    raise InterpretationError(f"initializer of {v.name} fails: {exc.code.value}") from exc
            else:
                raise InterpretationError(f"initializer of {v.name} is opaque: {v.initializer.text}")
        return state

    # ── lookup / validation ───────────────────────────────────────────────
    def _entry(self, call: Invocation) -> _Entry:
        transition = self.base.transition(call.transition)
        if transition is not None:
            if not (_interpretable(transition.guards) and _interpretable(transition.statements)):
                raise InterpretationError(f"transition {transition.name} has opaque guards or statements")
            entry = _Entry(name=transition.name, transition=transition)
            params = list(transition.input)
        else:
            admin = self.aug.admin_transition(call.transition)
            if admin is None:
                raise InterpretationError(f"no invocable transition named {call.transition!r}", code="E_BAD_INVOCATION")
            entry = _Entry(name=admin.name, admin=admin)
            params = [admin.parameter]
        for tt in self._timed:
            if not (_interpretable(tt.guards) and _interpretable(tt.statements)):
                raise InterpretationError(f"timed transition {tt.name} has opaque guards or statements")
        expected = [p.name for p in params]
        if sorted(call.args) != sorted(expected):
            raise InterpretationError(
                f"{call.transition} expects arguments {expected}, got {sorted(call.args)}", code="E_BAD_INVOCATION"
            )
        for p in params:
            _check_argument(call.transition, p, call.args[p.name])
        if call.counter_arg is not None and not self.plugins.transition_counter:
            raise InterpretationError("counterArg given but the counter plugin is off", code="E_BAD_INVOCATION")
        return entry

    # ── execution ─────────────────────────────────────────────────────────
    def invoke(self, state: InstanceState, call: Invocation) -> tuple[InstanceState, Outcome]:
        new_state, outcome, _ = self.invoke_traced(state, call)
        return new_state, outcome

    def invoke_traced(
        self, state: InstanceState, call: Invocation
    ) -> tuple[InstanceState, Outcome, list[TraceEntry]]:
        """Atomic invocation; returns the new state, the outcome and the frames it produced."""
        work = state.model_copy(deep=True)
        entries: list[TraceEntry] = []
        outcome = self._frame(work, call, depth=0, entries=entries)
        if isinstance(outcome, Rejected):
            return state, outcome, entries
        return work, outcome, entries

    def _frame(self, work: InstanceState, call: Invocation, depth: int, entries: list[TraceEntry]) -> Outcome:
        entry = self._entry(call)
        slot = len(entries)
        entries.append(None)  # type: ignore[arg-type]  # filled once the outcome is known
        snapshot = work.model_copy(deep=True)
        pending = [call.reentry]

        def on_send(recipient: str, _amount: int) -> None:
            nested = pending[0]
            if nested is None:
                return
            pending[0] = None
            effective = nested.model_copy(
                update={"env": nested.env.model_copy(update={"sender": recipient, "now": call.env.now})}
            )
            self._frame(work, effective, depth + 1, entries)

        try:
            outputs = self._run(work, entry, call, on_send)
            outcome: Outcome = Accepted(new_state=work.current_state, outputs=outputs)
        except Rejection as exc:
            _restore(work, snapshot)
            outcome = Rejected(code=exc.code)
        entries[slot] = TraceEntry(invocation=call.without_reentry(), outcome=outcome, depth=depth)
        return outcome

    def _run(self, work: InstanceState, entry: _Entry, call: Invocation, on_send) -> dict[str, Any]:
        env = call.env
        wrappers = self.aug.wrappers.get(entry.name, [])

        if env.value > 0 and not entry.payable:
            raise Rejection(RejectionCode.NOT_PAYABLE)

        locking = WrapperKind.LOCKING in wrappers
        if locking:
            if work.locked:
                raise Rejection(RejectionCode.LOCKED)
            work.locked = True
        if WrapperKind.TRANSITION_COUNTING in wrappers:
            if call.counter_arg is None or call.counter_arg != work.counter:
                raise Rejection(RejectionCode.BAD_COUNTER)
            work.counter += 1
        if WrapperKind.TIMED_TRANSITIONS in wrappers:
            self._fire_timed(work, env)
        if WrapperKind.ACCESS_GUARD in wrappers and env.sender not in work.admin_set:
            raise Rejection(RejectionCode.NOT_ADMIN)

        if entry.payable:
            work.balance += env.value
        if entry.admin is not None:
            self._admin(work, entry.admin, call)
            outputs: dict[str, Any] = {}
        else:
            outputs = self._body(work, entry.transition, call, on_send)

        if locking:
            work.locked = False
        return outputs

    def _fire_timed(self, work: InstanceState, env: Env) -> None:
        """Single pass in (time, declaration) order; a fired entry may enable later ones."""
        for tt in self._timed:
            if work.current_state != tt.source or env.now < work.creation_time + tt.time:
                continue
            frame = Frame(work, env, self._contract_env)
            if not all(frame.eval(g.ast) for g in tt.guards):
                continue
            for stmt in tt.statements:
                frame.execute(stmt)
            work.current_state = tt.target

    def _admin(self, work: InstanceState, admin: AdminTransition, call: Invocation) -> None:
        who = call.args[admin.parameter.name]
        if admin.action is AdminAction.ADD:
            if who not in work.admin_set:
                work.admin_set.append(who)
        elif who in work.admin_set:
            if len(work.admin_set) == 1:
                raise Rejection(RejectionCode.LAST_ADMIN)
            work.admin_set.remove(who)

    def _body(self, work: InstanceState, t: Transition, call: Invocation, on_send) -> dict[str, Any]:
        if work.current_state != t.source:
            raise Rejection(RejectionCode.WRONG_STATE)
        types = body_env(self.base, t)
        frame = Frame(work, call.env, types, on_send=on_send)
        frame.locals.update({p.name: call.args[p.name] for p in t.input})
        frame.locals.update({p.name: frame.zero(p.semantic_type) for p in t.output})
        for g in t.guards:
            if not frame.eval(g.ast):
                raise Rejection(RejectionCode.GUARD_FALSE)
        for stmt in t.statements:
            frame.execute(stmt)
        work.current_state = t.target
        return {p.name: frame.locals[p.name] for p in t.output}

    # ── schedules ─────────────────────────────────────────────────────────
    def run_calls(self, state: InstanceState, calls: Iterable[Invocation]) -> Trace:
        entries: list[TraceEntry] = []
        for call in calls:
            state, _, produced = self.invoke_traced(state, call)
            entries.extend(produced)
        return Trace(entries=entries, final_state=state)

    def run_schedule(self, creation_time: int, creator: str, calls: Iterable[Invocation]) -> Trace:
        return self.run_calls(self.init_instance(creation_time, creator), calls)


# ── Functional API ───────────────────────────────────────────────────────────
def init_instance(aug: AugmentedContract, creation_time: int, creator: str) -> InstanceState:
    return Interpreter(aug).init_instance(creation_time, creator)


def invoke(aug: AugmentedContract, state: InstanceState, call: Invocation) -> tuple[InstanceState, Outcome]:
    return Interpreter(aug).invoke(state, call)


def run_schedule(aug: AugmentedContract, creation_time: int, creator: str, calls: Iterable[Invocation]) -> Trace:
    trace = Interpreter(aug).run_schedule(creation_time, creator, calls)
    log.debug(
        "ran %d top-level calls on %s: %d accepted",
        len(trace.top_level), aug.base.name, sum(e.accepted for e in trace.top_level),
    )
    return trace
