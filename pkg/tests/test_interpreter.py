# tests/test_interpreter.py
"""Abstract interpreter, plugin semantics and the bounded searches."""

from __future__ import annotations

import itertools
import random

import pytest

from compiler.dsl import parse_contract
from compiler.interpreter import (
    Interpreter, SearchBounds, declared_order, fully_accepted_permutations, init_instance, invoke,
    run_schedule, search_order_dependence, search_reentrancy,
)
from compiler.interpreter.evaluate import ZERO_ADDRESS
from compiler.interpreter.search import time_offsets
from models.errors import InterpretationError
from models.plugins import PluginSet
from models.runtime import Accepted, Env, InstanceState, Invocation, Rejected, RejectionCode
from schemas.schedule import load_schedule

from conftest import BLINDED, CREATION_TIME, CREATOR, SCHEDULES, weave

CLOSE_AT = CREATION_TIME + 432_000


def call(transition: str, sender: str = "alice", now: int = CREATION_TIME, value: int = 0,
         counter: int | None = None, reentry: Invocation | None = None, **args) -> Invocation:
    return Invocation(
        transition=transition,
        env=Env(now=now, sender=sender, value=value),
        args=args,
        counter_arg=counter,
        reentry=reentry,
    )


def bid(sender: str, now: int = CREATION_TIME, value: int = 10, counter: int | None = None) -> Invocation:
    return call("bid", sender, now, value, counter, blindedBid=BLINDED)


def code_of(outcome) -> RejectionCode | None:
    return outcome.code if isinstance(outcome, Rejected) else None


# ── basics ───────────────────────────────────────────────────────────────────
class TestInstance:
    def test_initial_state(self, auction):
        state = init_instance(weave(auction), CREATION_TIME, CREATOR)
        assert state.current_state == "ABB"
        assert state.creation_time == CREATION_TIME
        assert state.store == {"bids": {}, "pendingReturns": {}, "highestBidder": ZERO_ADDRESS, "highestBid": 0}
        assert state.admin_set == []
        assert (state.locked, state.counter, state.balance) == (False, 0, 0)

    def test_creator_is_the_first_admin(self, auction):
        assert init_instance(weave(auction, "access"), CREATION_TIME, CREATOR).admin_set == [CREATOR]

    def test_initializers_run_in_declaration_order(self):
        contract = parse_contract(
            "contract T { state initial S; var private uint a = 5; var private uint b = a + 2; "
            "var private uint deadline = now + 1 hours; }"
        )
        state = init_instance(weave(contract), 50, CREATOR)
        assert state.store == {"a": 5, "b": 7, "deadline": 3_650}

    def test_opaque_initializer(self):
        contract = parse_contract("contract T { state initial S; var private uint h = uint(keccak256(1)); }")
        with pytest.raises(InterpretationError) as info:
            init_instance(weave(contract), CREATION_TIME, CREATOR)
        assert info.value.code == "E_UNINTERPRETABLE"


class TestInvoke:
    def test_bid_is_recorded(self, auction):
        aug = weave(auction)
        state, outcome = invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), bid("alice"))
        assert outcome == Accepted(new_state="ABB")
        assert state.balance == 10
        assert state.store["pendingReturns"] == {"alice": 10}
        assert state.store["bids"] == {"alice": [{"blindedBid": BLINDED, "deposit": 10}]}

    def test_input_state_is_never_mutated(self, auction):
        aug = weave(auction)
        start = init_instance(aug, CREATION_TIME, CREATOR)
        before = start.model_copy(deep=True)
        invoke(aug, start, bid("alice"))
        assert start == before

    def test_value_to_a_non_payable_transition(self, auction):
        aug = weave(auction)
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, outcome = invoke(aug, start, call("close", now=CLOSE_AT, value=1))
        assert code_of(outcome) is RejectionCode.NOT_PAYABLE
        assert state == start

    def test_guards(self, auction):
        aug = weave(auction)
        start = init_instance(aug, CREATION_TIME, CREATOR)
        _, early = invoke(aug, start, call("close", now=CLOSE_AT - 1))
        assert code_of(early) is RejectionCode.GUARD_FALSE
        state, on_time = invoke(aug, start, call("close", now=CLOSE_AT))
        assert on_time == Accepted(new_state="RB")
        assert state.current_state == "RB"

    def test_wrong_state(self, auction):
        aug = weave(auction)
        _, outcome = invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), call("withdraw"))
        assert code_of(outcome) is RejectionCode.WRONG_STATE

    def test_guard_on_refund(self, auction):
        aug = weave(auction)
        trace = run_schedule(aug, CREATION_TIME, CREATOR, [call("cancelABB", CREATOR), call("unbid")])
        assert [code_of(e.outcome) for e in trace.top_level] == [None, RejectionCode.GUARD_FALSE]

    def test_insufficient_balance_rolls_back(self, auction):
        aug = weave(auction)
        start = InstanceState(
            current_state="F",
            store={"bids": {}, "pendingReturns": {"alice": 50}, "highestBidder": ZERO_ADDRESS, "highestBid": 0},
            creation_time=CREATION_TIME,
            balance=10,
        )
        state, outcome = invoke(aug, start, call("withdraw"))
        assert code_of(outcome) is RejectionCode.INSUFFICIENT_BALANCE
        assert state == start

    def test_opaque_transition_is_uninterpretable(self, auction):
        aug = weave(auction)
        start = init_instance(aug, CREATION_TIME, CREATOR)
        with pytest.raises(InterpretationError) as info:
            invoke(aug, start, call("reveal", value=10, secret=BLINDED))
        assert info.value.code == "E_UNINTERPRETABLE"

    @pytest.mark.parametrize("bad", [
        call("nope"),
        call("bid", value=10),
        call("close", extra=1),
    ])
    def test_bad_invocations(self, auction, bad):
        aug = weave(auction)
        with pytest.raises(InterpretationError) as info:
            invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), bad)
        assert info.value.code == "E_BAD_INVOCATION"

    @pytest.mark.parametrize("blinded", ["0x12", 7, None, "0x" + "zz" * 32])
    def test_arguments_must_fit_their_type(self, auction, blinded):
        aug = weave(auction)
        with pytest.raises(InterpretationError) as info:
            invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), call("bid", value=10, blindedBid=blinded))
        assert info.value.code == "E_BAD_INVOCATION"

    def test_counter_arg_needs_the_counter_plugin(self, auction):
        aug = weave(auction)
        with pytest.raises(InterpretationError) as info:
            invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), bid("alice", counter=0))
        assert info.value.code == "E_BAD_INVOCATION"

    def test_full_auction_schedule(self, auction):
        trace = run_schedule(weave(auction), CREATION_TIME, CREATOR, load_schedule(SCHEDULES / "auction.json"))
        assert trace.all_accepted
        assert [e.outcome.new_state for e in trace.entries] == ["ABB", "ABB", "RB", "F", "F"]
        assert trace.final_state.balance == 10
        assert trace.final_state.store["pendingReturns"] == {"bob": 10}


LEDGER = """
contract Ledger {
    state initial S;
    var private mapping(address => mapping(address => uint)) owed;
    transition pay { from S; to S; tags payable; }
    transition refund { from S; to S; input uint amount; do { msg.sender.transfer(-amount); } }
    transition refundThree { from S; to S; do { msg.sender.transfer(-3); } }
    transition settle { from S; to S; input uint amount; do { owed[msg.sender][msg.sender] = amount; } }
    transition settleBelowZero { from S; to S; do { uint y = -5; owed[msg.sender][msg.sender] = y; } }
}
"""


class TestArithmetic:
    @pytest.fixture
    def ledger(self):
        return weave(parse_contract(LEDGER))

    @pytest.fixture
    def funded(self, ledger) -> InstanceState:
        state, _ = invoke(ledger, init_instance(ledger, CREATION_TIME, CREATOR), call("pay", value=10))
        assert state.balance == 10
        return state

    @pytest.mark.parametrize("refund", [call("refund", amount=3), call("refundThree")])
    def test_negative_transfer_is_an_overflow(self, ledger, funded, refund):
        state, outcome = invoke(ledger, funded, refund)
        assert code_of(outcome) is RejectionCode.OVERFLOW
        assert state == funded

    def test_negative_zero_is_fine(self, ledger, funded):
        state, outcome = invoke(ledger, funded, call("refund", amount=0))
        assert outcome == Accepted(new_state="S")
        assert state.balance == 10

    def test_local_declaration_is_range_checked(self, ledger, funded):
        state, outcome = invoke(ledger, funded, call("settleBelowZero"))
        assert code_of(outcome) is RejectionCode.OVERFLOW
        assert state == funded

    @pytest.mark.parametrize("amount", ["7", -3, True, 2**256])
    def test_uint_arguments_are_validated(self, ledger, funded, amount):
        with pytest.raises(InterpretationError) as info:
            invoke(ledger, funded, call("settle", amount=amount))
        assert info.value.code == "E_BAD_INVOCATION"

    def test_zero_writes_leave_no_mapping_entries(self, ledger, funded):
        state, _ = invoke(ledger, funded, call("settle", amount=4))
        assert state.store["owed"] == {"alice": {"alice": 4}}
        state, outcome = invoke(ledger, state, call("settle", amount=0))
        assert outcome == Accepted(new_state="S")
        assert state.store == funded.store == {"owed": {}}


# ── plugins ──────────────────────────────────────────────────────────────────
class TestLocking:
    def test_held_lock_rejects(self, auction):
        aug = weave(auction, "locking")
        start = init_instance(aug, CREATION_TIME, CREATOR).model_copy(update={"locked": True})
        state, outcome = invoke(aug, start, bid("alice"))
        assert code_of(outcome) is RejectionCode.LOCKED
        assert state == start

    def test_lock_is_released(self, auction):
        aug = weave(auction, "locking")
        state, outcome = invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), bid("alice"))
        assert outcome.status == "accepted"
        assert not state.locked

    def test_nested_call_is_rejected(self, vulnerable_auction):
        aug = weave(vulnerable_auction, "locking")
        trace = run_schedule(aug, CREATION_TIME, CREATOR, load_schedule(SCHEDULES / "reentrant_withdraw.json"))
        nested = [e for e in trace.entries if e.depth == 1]
        assert [code_of(e.outcome) for e in nested] == [RejectionCode.LOCKED]
        assert trace.all_accepted
        assert trace.final_state.balance == 10

    def test_random_schedules_never_nest(self, vulnerable_auction, rng):
        aug = weave(vulnerable_auction, "locking")
        interp = Interpreter(aug)
        for _ in range(1_000):
            trace = interp.run_schedule(CREATION_TIME, CREATOR, _random_schedule(rng))
            assert trace.max_accepted_depth <= 0


def _random_reentry(rng: random.Random, depth: int) -> Invocation | None:
    if depth == 0 or rng.random() < 0.3:
        return None
    name = rng.choice(["withdraw", "unbid", "close", "cancelABB"])
    return call(name, reentry=_random_reentry(rng, depth - 1))


def _random_schedule(rng: random.Random) -> list[Invocation]:
    calls = []
    for _ in range(rng.randint(1, 8)):
        kind = rng.choice(["bid", "bid", "close", "finish", "cancelABB", "withdraw", "unbid"])
        sender = rng.choice([CREATOR, "alice", "bob"])
        now = rng.choice([CREATION_TIME, CLOSE_AT, CLOSE_AT + 10])
        if kind == "bid":
            calls.append(bid(sender, now))
        elif kind in ("withdraw", "unbid"):
            calls.append(call(kind, sender, now, reentry=_random_reentry(rng, 2)))
        else:
            calls.append(call(kind, sender, now))
    return calls


class TestReentry:
    def test_double_withdraw(self, vulnerable_auction):
        aug = weave(vulnerable_auction)
        trace = run_schedule(aug, CREATION_TIME, CREATOR, load_schedule(SCHEDULES / "reentrant_withdraw.json"))
        assert [e.depth for e in trace.entries] == [0, 0, 0, 0, 0, 1]
        assert trace.entries[-1].accepted
        assert trace.entries[-1].invocation.env.sender == "alice"
        assert trace.final_state.balance == 0
        assert trace.final_state.store["pendingReturns"] == {"bob": 10}

    def test_safe_withdraw_pays_once(self, auction):
        trace = run_schedule(weave(auction), CREATION_TIME, CREATOR, load_schedule(SCHEDULES / "reentrant_withdraw.json"))
        assert trace.entries[-1].accepted
        assert trace.final_state.balance == 10

    def test_rejected_nested_frame_rolls_back_alone(self, auction):
        aug = weave(auction)
        calls = load_schedule(SCHEDULES / "auction.json")
        last = calls[-1].model_copy(update={"reentry": bid("mallory")})
        trace = run_schedule(aug, CREATION_TIME, CREATOR, [*calls[:-1], last])
        outer, nested = trace.entries[-2:]
        assert outer.accepted
        assert code_of(nested.outcome) is RejectionCode.WRONG_STATE
        assert trace.final_state.balance == 10


class TestCounter:
    def test_sequencing(self, auction):
        aug = weave(auction, "counter")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, first = invoke(aug, start, bid("alice", counter=0))
        assert first.status == "accepted" and state.counter == 1
        _, replay = invoke(aug, state, bid("bob", counter=0))
        assert code_of(replay) is RejectionCode.BAD_COUNTER
        _, missing = invoke(aug, state, bid("bob"))
        assert code_of(missing) is RejectionCode.BAD_COUNTER

    def test_schedule_file(self, auction):
        aug = weave(auction, "counter")
        trace = run_schedule(aug, CREATION_TIME, CREATOR, load_schedule(SCHEDULES / "auction_counter.json"))
        assert trace.all_accepted
        assert trace.final_state.counter == 2


class TestTimed:
    def test_bids_close_by_themselves(self, timed_auction):
        aug = weave(timed_auction, "timed")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, outcome = invoke(aug, start, bid("alice", now=CLOSE_AT - 1))
        assert outcome == Accepted(new_state="ABB")
        for now in (CLOSE_AT, CLOSE_AT + 1, CLOSE_AT + 86_400):
            after, late = invoke(aug, state, bid("bob", now=now))
            assert code_of(late) is RejectionCode.WRONG_STATE
            assert after == state

    def test_random_bid_times(self, timed_auction, rng):
        aug = weave(timed_auction, "timed")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        for _ in range(200):
            now = CREATION_TIME + rng.randint(0, 2 * 432_000)
            _, outcome = invoke(aug, start, bid("alice", now=now))
            if now < CLOSE_AT:
                assert outcome == Accepted(new_state="ABB")
            else:
                assert code_of(outcome) is RejectionCode.WRONG_STATE

    def test_timed_transition_enables_the_next_call(self, timed_auction):
        aug = weave(timed_auction, "timed")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, outcome = invoke(aug, start, call("finish", CREATOR, CLOSE_AT))
        assert outcome == Accepted(new_state="F")
        assert state.current_state == "F"

    def test_firing_order(self, phases):
        assert [t.name for t in phases.timed_in_firing_order()] == ["first", "rival", "second"]

    @pytest.mark.parametrize("offset, transition, trail", [
        (3_599, "stayA", 0),
        (3_600, "stayB", 1),
        (7_199, "stayB", 1),
        (7_200, "stayC", 12),
        (86_400, "stayC", 12),
    ])
    def test_one_call_fires_every_due_entry(self, phases, offset, transition, trail):
        aug = weave(phases, "timed")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, outcome = invoke(aug, start, call(transition, now=CREATION_TIME + offset))
        assert outcome == Accepted(new_state=transition[-1])
        assert state.store["trail"] == trail

    def test_tie_goes_to_the_earlier_declaration(self, phases):
        aug = weave(phases, "timed")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        _, outcome = invoke(aug, start, call("stayD", now=CREATION_TIME + 3_600))
        assert code_of(outcome) is RejectionCode.WRONG_STATE

    def test_chaining_across_calls(self, phases):
        calls = [call("stayB", now=CREATION_TIME + 3_600), call("stayC", now=CREATION_TIME + 7_200)]
        trace = run_schedule(weave(phases, "timed"), CREATION_TIME, CREATOR, calls)
        assert trace.all_accepted
        assert trace.final_state.current_state == "C"
        assert trace.final_state.store["trail"] == 12

    def test_without_the_plugin_nothing_fires(self, timed_auction):
        aug = weave(timed_auction)
        _, outcome = invoke(aug, init_instance(aug, CREATION_TIME, CREATOR), bid("alice", now=CLOSE_AT * 2))
        assert outcome == Accepted(new_state="ABB")


class TestAccess:
    def test_only_admins_run_admin_transitions(self, auction):
        aug = weave(auction, "access")
        trace = run_schedule(aug, CREATION_TIME, CREATOR, [
            call("cancelABB", "mallory"),
            call("addAdmin", CREATOR, admin="alice"),
            call("cancelABB", "alice"),
        ])
        assert [code_of(e.outcome) for e in trace.top_level] == [RejectionCode.NOT_ADMIN, None, None]
        assert trace.final_state.admin_set == [CREATOR, "alice"]
        assert trace.final_state.current_state == "C"

    def test_admin_management_is_state_independent(self, auction):
        aug = weave(auction, "access")
        trace = run_schedule(aug, CREATION_TIME, CREATOR, [
            call("cancelABB", CREATOR),
            call("addAdmin", CREATOR, admin="alice"),
            call("addAdmin", CREATOR, admin="alice"),
            call("removeAdmin", "alice", admin=CREATOR),
            call("removeAdmin", "alice", admin="nobody"),
        ])
        assert trace.all_accepted
        assert trace.final_state.admin_set == ["alice"]

    def test_last_admin_stays(self, auction):
        aug = weave(auction, "access")
        start = init_instance(aug, CREATION_TIME, CREATOR)
        state, outcome = invoke(aug, start, call("removeAdmin", CREATOR, admin=CREATOR))
        assert code_of(outcome) is RejectionCode.LAST_ADMIN
        assert state.admin_set == [CREATOR]

    def test_admin_set_never_empties(self, auction, rng):
        aug = weave(auction, "access")
        interp = Interpreter(aug)
        people = [CREATOR, "alice", "bob"]
        state = interp.init_instance(CREATION_TIME, CREATOR)
        for _ in range(500):
            name = rng.choice(["addAdmin", "removeAdmin"])
            state, _ = interp.invoke(state, call(name, rng.choice(people), admin=rng.choice(people)))
            assert state.admin_set
            assert len(set(state.admin_set)) == len(state.admin_set)


# ── atomicity ────────────────────────────────────────────────────────────────
def _random_call(rng: random.Random, aug, state: InstanceState) -> Invocation:
    names = ["bid", "cancelABB", "unbid", "close", "finish", "withdraw", "cancelRB"]
    if aug.base.transition("close") is None:
        names.remove("close")
    if aug.plugins.access_control:
        names += ["addAdmin", "removeAdmin"]
    name = rng.choice(names)
    sender = rng.choice([CREATOR, "alice", "bob"])
    now = CREATION_TIME + rng.choice([0, 1_000, 432_000, 500_000])
    value = rng.choice([0, 0, 10]) if name == "bid" else rng.choice([0, 0, 0, 5])
    counter = None
    if aug.plugins.transition_counter:
        counter = rng.choice([state.counter, state.counter, state.counter + 1, None])
    args = {"blindedBid": BLINDED} if name == "bid" else {}
    if name in ("addAdmin", "removeAdmin"):
        args = {"admin": rng.choice([CREATOR, "alice", "bob"])}
    reentry = None
    if name in ("withdraw", "unbid") and rng.random() < 0.5:
        reentry = call(rng.choice(["withdraw", "unbid", "cancelRB"]),
                       counter=None if counter is None else counter + 1)
    return Invocation(
        transition=name, env=Env(now=now, sender=sender, value=value),
        args=args, counter_arg=counter, reentry=reentry,
    )


@pytest.mark.parametrize("plugins", PluginSet.all_combinations(), ids=lambda p: p.slug)
def test_rejection_leaves_state_untouched(plugins, auction, timed_auction, rng):
    contract = timed_auction if plugins.timed_transitions else auction
    aug = weave(contract, plugins)
    interp = Interpreter(aug)
    state = interp.init_instance(CREATION_TIME, CREATOR)
    rejected = 0
    for i in range(1_000):
        if i % 40 == 0:
            state = interp.init_instance(CREATION_TIME, CREATOR)
        before = state.model_copy(deep=True)
        new_state, outcome = interp.invoke(state, _random_call(rng, aug, state))
        assert state == before
        if isinstance(outcome, Rejected):
            rejected += 1
            assert new_state == before
        state = new_state
    assert rejected > 0


# ── searches ─────────────────────────────────────────────────────────────────
class TestReentrancySearch:
    def test_finds_the_double_withdraw(self, vulnerable_auction):
        witness = search_reentrancy(weave(vulnerable_auction), depth_limit=2)
        assert witness is not None
        assert witness.attack.transition == "withdraw"
        assert witness.attack.reentry.transition == "withdraw"
        assert witness.trace.final_state.balance == 0
        assert witness.serial_state.balance == 10
        assert [c.transition for c in witness.prefix].count("bid") == 2

    def test_locking_prevents_it(self, vulnerable_auction):
        assert search_reentrancy(weave(vulnerable_auction, "locking"), depth_limit=2) is None

    def test_counter_alone_does_not(self, vulnerable_auction):
        assert search_reentrancy(weave(vulnerable_auction, "counter"), depth_limit=2) is not None

    def test_safe_withdraw(self, auction):
        assert search_reentrancy(weave(auction), depth_limit=2) is None

    def test_depth_one_has_no_nesting(self, vulnerable_auction):
        assert search_reentrancy(weave(vulnerable_auction), depth_limit=1) is None

    @pytest.mark.parametrize("depth", [0, 4])
    def test_depth_bounds(self, auction, depth):
        with pytest.raises(ValueError):
            search_reentrancy(weave(auction), depth_limit=depth)

    def test_prefix_bound(self, vulnerable_auction):
        bounds = SearchBounds(max_prefix=3)
        assert search_reentrancy(weave(vulnerable_auction), 2, bounds) is None

    def test_time_offsets(self, auction, timed_auction):
        assert time_offsets(auction) == [0, 432_000]
        assert time_offsets(timed_auction) == [0, 432_000]


class TestOrderSearch:
    @staticmethod
    def _calls(counter: bool) -> list[Invocation]:
        calls = [bid("alice", CLOSE_AT, counter=0), bid("bob", CLOSE_AT, counter=1), call("close", CREATOR, CLOSE_AT, counter=2)]
        return calls if counter else [c.model_copy(update={"counter_arg": None}) for c in calls]

    def test_counter_accepts_only_the_declared_order(self, auction):
        aug = weave(auction, "counter")
        assert fully_accepted_permutations(aug, self._calls(counter=True)) == [(0, 1, 2)]
        assert search_order_dependence(aug, self._calls(counter=True)) is None

    def test_declared_order_follows_the_numbering(self):
        calls = [call("close", CREATOR, CLOSE_AT, counter=2), bid("alice", CLOSE_AT, counter=0), bid("bob", CLOSE_AT)]
        assert declared_order(calls) == (1, 0, 2)

    def test_numbering_need_not_match_list_order(self, auction):
        aug = weave(auction, "counter")
        calls = [call("close", CREATOR, CLOSE_AT, counter=2), bid("alice", CLOSE_AT, counter=0), bid("bob", CLOSE_AT, counter=1)]
        assert fully_accepted_permutations(aug, calls) == [(1, 2, 0)]
        assert search_order_dependence(aug, calls) is None

    def test_rejected_declared_order_is_a_finding(self, auction):
        aug = weave(auction, "counter")
        calls = [bid("alice", CLOSE_AT, counter=0), call("close", CREATOR, CLOSE_AT, counter=1), bid("bob", CLOSE_AT, counter=2)]
        assert fully_accepted_permutations(aug, calls) == []
        witness = search_order_dependence(aug, calls)
        assert witness is not None
        assert witness.reason == "declared_rejected"
        assert witness.first == witness.second == [0, 1, 2]
        assert [code_of(e.outcome) for e in witness.first_trace.top_level] == [None, None, RejectionCode.WRONG_STATE]

    def test_without_counter_order_matters(self, auction):
        aug = weave(auction)
        calls = self._calls(counter=False)
        witness = search_order_dependence(aug, calls)
        assert witness is not None
        assert witness.reason == "divergent"
        assert witness.first == [0, 1, 2]
        assert witness.first_trace.final_state.store != witness.second_trace.final_state.store

        stores = {
            repr(run_schedule(aug, CREATION_TIME, CREATOR, [calls[i] for i in order]).final_state.store)
            for order in itertools.permutations(range(3))
        }
        assert len(stores) >= 2

    def test_too_many_calls(self, auction):
        with pytest.raises(ValueError):
            search_order_dependence(weave(auction), [bid("alice")] * 5)
