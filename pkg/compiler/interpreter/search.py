# compiler/interpreter/search.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Bounded adversarial searches over the interpreter.

Design notes
------------
* ``search_reentrancy`` explores the states reachable through setup
  prefixes breadth-first (states de-duplicated by fingerprint). At every
  visited state it tries each call that executes a ``Send`` with every
  reentry chain up to the depth limit. A finding needs an accepted
  top-level call, an accepted nested frame, and a final (state, store,
  balance) that differs from running the executed calls one after another.
* ``search_order_dependence`` brute-forces permutations of a short call
  list. Calls keep their ``counter_arg`` when permuted, which is exactly
  what the counter plugin relies on.
* Transitions with opaque guards or statements are left out of the
  enumeration; an opaque timed transition or initializer still fails the
  search with E_UNINTERPRETABLE.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from typing import Any, Final, Iterator, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from models.contract import Contract, Variable
from models.expressions import DurationLit, Send, is_core
from models.plugins import AugmentedContract
from models.runtime import Env, InstanceState, Invocation, Trace
from models.types import ElementaryType, TypeRef
from schemas.cli import DEFAULT_CREATION_TIME, DEFAULT_CREATOR

from .evaluate import ZERO_BYTES32, zero_value
from .machine import Interpreter

log = logging.getLogger(__name__)

DEFAULT_ATTACKER: Final[str] = "attacker"
DEFAULT_DEPTH: Final[int] = 2
MAX_DEPTH: Final[int] = 3
MAX_ORDER_CALLS: Final[int] = 4


class SearchBounds(BaseModel):
    """The finite schedule space a search enumerates."""

    senders: list[str] = Field(default_factory=lambda: [DEFAULT_CREATOR, DEFAULT_ATTACKER], min_length=1)
    values: list[int] = Field(default_factory=lambda: [10])
    uint_values: list[int] = Field(default_factory=lambda: [10])
    bytes32_values: list[str] = Field(default_factory=lambda: ["0x" + "ab" * 32])
    time_offsets: Optional[list[int]] = None   # None: 0 plus every duration the contract mentions
    max_prefix: int = Field(default=5, ge=0)
    creation_time: int = Field(default=DEFAULT_CREATION_TIME, ge=0)
    creator: str = DEFAULT_CREATOR

    model_config = ConfigDict(frozen=True)


class ReentrancyWitness(BaseModel):
    prefix: list[Invocation]
    attack: Invocation
    trace: Trace                     # prefix then the reentrant call, from a fresh instance
    serial_state: InstanceState      # same calls executed without reentry


class OrderWitness(BaseModel):
    first: list[int]
    second: list[int]
    first_trace: Trace
    second_trace: Trace
    # divergent: outcomes differ between orders (no counter)
    # extra_accepted: an order besides the declared numbering is fully accepted
    # declared_rejected: the declared numbering itself is not fully accepted
    reason: Literal["divergent", "extra_accepted", "declared_rejected"] = "divergent"


# ── schedule space ───────────────────────────────────────────────────────────
def _durations(node) -> Iterator[int]:
    if isinstance(node, DurationLit):
        yield node.seconds
    elif isinstance(node, BaseModel):
        for field in type(node).model_fields:
            yield from _durations(getattr(node, field))
    elif isinstance(node, (list, tuple, frozenset)):
        for item in node:
            yield from _durations(item)


def time_offsets(contract: Contract) -> list[int]:
    found = set(_durations(contract)) | {t.time for t in contract.timed_transitions}
    return sorted({0} | found)


def _has_send(statements) -> bool:
    return any(isinstance(s, Send) for s in statements)


class _Space:
    """Enumerates concrete invocations for one contract under ``SearchBounds``."""

    def __init__(self, aug: AugmentedContract, bounds: SearchBounds) -> None:
        self.aug = aug
        self.bounds = bounds
        self.senders = list(dict.fromkeys([bounds.creator, *bounds.senders]))
        offsets = bounds.time_offsets if bounds.time_offsets is not None else time_offsets(aug.base)
        self.times = [bounds.creation_time + o for o in offsets]
        self._structs = {s.name: s for s in aug.base.custom_types}
        self.entries: list[tuple[str, list[Variable], bool]] = []
        for t in aug.base.transitions:
            if all(is_core(x) for x in (*t.guards, *t.statements)):
                self.entries.append((t.name, list(t.input), t.is_payable))
            else:
                log.debug("search skips %s: opaque guards or statements", t.name)
        self.entries += [(g.name, [g.parameter], False) for g in aug.generated_transitions]
        self.send_transitions = {t.name for t in aug.base.transitions if _has_send(t.statements)}
        self.send_sources = {t.source for t in aug.base.transitions if _has_send(t.statements)}

    def domain(self, t: TypeRef) -> list[Any]:
        if isinstance(t, ElementaryType):
            return {
                "uint": self.bounds.uint_values,
                "int": self.bounds.uint_values,
                "bool": [False, True],
                "address": self.senders,
                "bytes32": self.bounds.bytes32_values or [ZERO_BYTES32],
                "string": [""],
            }[t.name]
        return [zero_value(t, self._structs)]

    def _arg_sets(self, params: list[Variable]) -> Iterator[dict[str, Any]]:
        names = [p.name for p in params]
        for combo in itertools.product(*(self.domain(p.semantic_type) for p in params)):
            yield dict(zip(names, combo))

    def calls(self, counter: Optional[int], names: Optional[set[str]] = None,
              senders: Optional[list[str]] = None, times: Optional[list[int]] = None) -> Iterator[Invocation]:
        for name, params, payable in self.entries:
            if names is not None and name not in names:
                continue
            values = [v for v in self.bounds.values if v > 0] if payable else [0]
            for sender, now, value, args in itertools.product(
                senders or self.senders, times or self.times, values or [0], list(self._arg_sets(params))
            ):
                yield Invocation(
                    transition=name,
                    env=Env(now=now, sender=sender, value=value),
                    args=args,
                    counter_arg=counter,
                )

    def reentry_chains(self, counter: Optional[int], length: int) -> Iterator[Optional[Invocation]]:
        """Nested call chains of exactly ``length`` frames; sender and now are fixed at run time."""
        if length == 0:
            yield None
            return
        nested_counter = None if counter is None else counter + 1
        anchor = [self.senders[0]], [self.times[0]]
        for call in self.calls(nested_counter, senders=anchor[0], times=anchor[1]):
            for tail in self.reentry_chains(nested_counter, length - 1):
                yield call.model_copy(update={"reentry": tail})


def _counter(aug: AugmentedContract, state: InstanceState) -> Optional[int]:
    return state.counter if aug.plugins.transition_counter else None


def _observable(state: InstanceState) -> tuple:
    fp = state.fingerprint()
    return fp[0], fp[1], state.balance


# ── reentrancy ───────────────────────────────────────────────────────────────
def search_reentrancy(
    aug: AugmentedContract,
    depth_limit: int = DEFAULT_DEPTH,
    bounds: SearchBounds | None = None,
) -> ReentrancyWitness | None:
    """First exploitable reentrant call found within the bounds, or None."""
    if not 1 <= depth_limit <= MAX_DEPTH:
        raise ValueError(f"depth_limit must be between 1 and {MAX_DEPTH}, got {depth_limit}")
    bounds = bounds or SearchBounds()
    interp = Interpreter(aug)
    space = _Space(aug, bounds)
    if not space.send_transitions or depth_limit == 1:
        log.debug("%s: no reentry sites within depth %d", aug.base.name, depth_limit)
        return None

    start = interp.init_instance(bounds.creation_time, bounds.creator)
    queue: deque[tuple[InstanceState, list[Invocation]]] = deque([(start, [])])
    seen = {start.fingerprint()}
    explored = 0

    while queue:
        state, prefix = queue.popleft()
        explored += 1
        witness = _attack(aug, interp, space, state, prefix, depth_limit, bounds)
        if witness is not None:
            log.debug("%s: reentrancy found after %d states", aug.base.name, explored)
            return witness
        if len(prefix) >= bounds.max_prefix:
            continue
        for call in space.calls(_counter(aug, state)):
            new_state, outcome = interp.invoke(state, call)
            fp = new_state.fingerprint()
            if outcome.status == "accepted" and fp not in seen:
                seen.add(fp)
                queue.append((new_state, [*prefix, call]))

    log.debug("%s: no reentrancy in %d states (depth %d)", aug.base.name, explored, depth_limit)
    return None


def _attack(
    aug: AugmentedContract,
    interp: Interpreter,
    space: _Space,
    state: InstanceState,
    prefix: list[Invocation],
    depth_limit: int,
    bounds: SearchBounds,
) -> ReentrancyWitness | None:
    if not aug.plugins.timed_transitions and state.current_state not in space.send_sources:
        return None
    counter = _counter(aug, state)
    for outer in space.calls(counter, names=space.send_transitions):
        for chain in space.reentry_chains(counter, depth_limit - 1):
            call = outer.model_copy(update={"reentry": chain})
            after, outcome, entries = interp.invoke_traced(state, call)
            if outcome.status != "accepted" or not any(e.depth > 0 and e.accepted for e in entries):
                continue
            serial = interp.run_calls(state, [e.invocation for e in entries]).final_state
            if _observable(after) == _observable(serial):
                continue
            trace = interp.run_schedule(bounds.creation_time, bounds.creator, [*prefix, call])
            return ReentrancyWitness(prefix=prefix, attack=call, trace=trace, serial_state=serial)
    return None


# ── ordering ─────────────────────────────────────────────────────────────────
def _accepted_indices(trace: Trace, order: Sequence[int]) -> frozenset[int]:
    top = trace.top_level
    return frozenset(i for i, entry in zip(order, top) if entry.accepted)


def _permuted(calls: Sequence[Invocation], order: Sequence[int]) -> list[Invocation]:
    return [calls[i] for i in order]


def declared_order(calls: Sequence[Invocation]) -> tuple[int, ...]:
    """Call indices sorted by ``counter_arg`` (list position breaks ties)."""
    return tuple(sorted(
        range(len(calls)),
        key=lambda i: (calls[i].counter_arg is None, calls[i].counter_arg or 0, i),
    ))


def fully_accepted_permutations(
    aug: AugmentedContract,
    calls: Sequence[Invocation],
    creation_time: int = DEFAULT_CREATION_TIME,
    creator: str = DEFAULT_CREATOR,
) -> list[tuple[int, ...]]:
    interp = Interpreter(aug)
    return [
        order
        for order in itertools.permutations(range(len(calls)))
        if interp.run_schedule(creation_time, creator, _permuted(calls, order)).all_accepted
    ]


def search_order_dependence(
    aug: AugmentedContract,
    calls: Sequence[Invocation],
    creation_time: int = DEFAULT_CREATION_TIME,
    creator: str = DEFAULT_CREATOR,
) -> OrderWitness | None:
    """
    Without the counter plugin: two orders of ``calls`` whose accepted sets or
    final (state, store) differ. With it: two distinct orders that are both
    fully accepted, which the counter is meant to rule out.
    """
    if len(calls) > MAX_ORDER_CALLS:
        raise ValueError(f"order search takes at most {MAX_ORDER_CALLS} calls, got {len(calls)}")
    interp = Interpreter(aug)
    identity = tuple(range(len(calls)))

    def run(order: Sequence[int]) -> Trace:
        return interp.run_schedule(creation_time, creator, _permuted(calls, order))

    if aug.plugins.transition_counter:
        declared = declared_order(calls)
        accepted = fully_accepted_permutations(aug, calls, creation_time, creator)
        if accepted == [declared]:
            return None
        if declared in accepted:
            other = next(order for order in accepted if order != declared)
            reason = "extra_accepted"
        else:
            other = accepted[0] if accepted else declared
            reason = "declared_rejected"
        log.debug("%s: counter order check failed (%s)", aug.base.name, reason)
        return OrderWitness(
            first=list(declared), second=list(other),
            first_trace=run(declared), second_trace=run(other), reason=reason,
        )

    reference = run(identity)
    ref_key = (_accepted_indices(reference, identity), _observable(reference.final_state)[:2])
    for order in itertools.permutations(identity):
        if order == identity:
            continue
        trace = run(order)
        key = (_accepted_indices(trace, order), _observable(trace.final_state)[:2])
        if key != ref_key:
            return OrderWitness(first=list(identity), second=list(order), first_trace=reference, second_trace=trace)
    return None

