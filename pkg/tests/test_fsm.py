# tests/test_fsm.py
"""Contract model: validation, reachability, node paths."""

from __future__ import annotations

import pytest

from compiler.fsm import reachable_states, resolve_node_path, transition_graph, validate
from models.contract import Contract, StateDecl, TimedTransition, Transition, Variable, VariableKind, Visibility
from models.errors import InvalidContractError
from models.expressions import CoreExpression, Ident, IntLit, OpaqueExpression
from models.types import StructRef, UINT


def _contract(**overrides) -> Contract:
    fields = dict(
        name="T",
        states=[StateDecl(name="A", is_initial=True), StateDecl(name="B")],
        transitions=[Transition(name="go", source="A", target="B")],
    )
    fields.update(overrides)
    return Contract(**fields)


def _codes(contract: Contract) -> list[str]:
    return [d.code for d in validate(contract)]


class TestValidate:
    def test_fixture_has_no_errors(self, auction):
        diagnostics = validate(auction)
        assert [d for d in diagnostics if d.is_error] == []

    def test_fixture_shape(self, auction):
        assert auction.state_names == ["ABB", "RB", "F", "C"]
        assert auction.initial_state == "ABB"
        assert [t.name for t in auction.transitions] == [
            "bid", "cancelABB", "unbid", "close", "reveal", "finish", "withdraw", "cancelRB",
        ]
        assert auction.transition("bid").is_payable

    def test_minimal_contract_is_valid(self):
        assert validate(Contract(name="T", states=[StateDecl(name="S", is_initial=True)])) == []

    def test_no_initial_state(self):
        contract = _contract(states=[StateDecl(name="A"), StateDecl(name="B")])
        diagnostics = validate(contract)
        assert [(d.code, d.node_path) for d in diagnostics] == [("E_INITIAL_COUNT", "states")]

    def test_two_initial_states(self):
        contract = _contract(states=[StateDecl(name="A", is_initial=True), StateDecl(name="B", is_initial=True)])
        assert "E_INITIAL_COUNT" in _codes(contract)

    def test_unknown_target_state(self):
        contract = _contract(transitions=[Transition(name="go", source="A", target="Z")])
        errors = [d for d in validate(contract) if d.is_error]
        assert [(d.code, d.node_path) for d in errors] == [("E_UNKNOWN_STATE", "transitions/go/to")]

    def test_duplicate_transition_across_timed(self):
        contract = _contract(timed_transitions=[TimedTransition(name="go", source="A", target="B", time=10)])
        assert "E_DUPLICATE_NAME" in _codes(contract)

    def test_invalid_names(self):
        contract = _contract(name="1bad", states=[StateDecl(name="A", is_initial=True), StateDecl(name="B-2")])
        paths = {d.node_path for d in validate(contract) if d.code == "E_INVALID_NAME"}
        assert paths == {"name", "states/1"}

    def test_unknown_struct_type(self):
        var = Variable(name="x", kind=VariableKind.CONTRACT_DATA, semantic_type=StructRef(name="Nope"),
                       visibility=Visibility.PRIVATE)
        assert "E_UNKNOWN_TYPE" in _codes(_contract(variables=[var]))

    def test_guard_must_be_bool(self):
        t = Transition(name="go", source="A", target="B", guards=[CoreExpression(ast=IntLit(value=1))])
        diagnostics = validate(_contract(transitions=[t]))
        assert [(d.code, d.node_path) for d in diagnostics] == [("E_GUARD_TYPE", "transitions/go/guards/0")]

    def test_opaque_guard_that_only_fails_typing_is_reported(self):
        t = Transition(name="go", source="A", target="B", guards=[OpaqueExpression(text="missing > 0")])
        assert _codes(_contract(transitions=[t])) == ["E_UNKNOWN_SYMBOL"]

    def test_unparsable_opaque_guard(self):
        t = Transition(name="go", source="A", target="B", guards=[OpaqueExpression(text="a >< b")])
        assert _codes(_contract(transitions=[t])) == ["E_PARSE"]

    def test_timed_transition_may_not_touch_input_data(self):
        contract = _contract(
            transitions=[Transition(
                name="go", source="A", target="B",
                input=[Variable(name="amount", kind=VariableKind.INPUT_DATA, semantic_type=UINT)],
            )],
            timed_transitions=[TimedTransition(
                name="expire", source="A", target="B", time=60,
                guards=[OpaqueExpression(text="amount > 0")],
            )],
        )
        assert _codes(contract) == ["E_TIMED_IO"]

    def test_negative_time(self):
        contract = _contract(timed_transitions=[TimedTransition(name="expire", source="A", target="B", time=-1)])
        assert "E_NEGATIVE_TIME" in _codes(contract)

    def test_unreachable_state_is_a_warning(self):
        contract = _contract(states=[
            StateDecl(name="A", is_initial=True), StateDecl(name="B"), StateDecl(name="Orphan"),
        ])
        diagnostics = validate(contract)
        assert [(d.code, d.node_path, d.is_error) for d in diagnostics] == [
            ("W_UNREACHABLE", "states/Orphan", False),
        ]

    def test_diagnostics_are_sorted(self):
        contract = _contract(
            states=[StateDecl(name="A"), StateDecl(name="B")],
            transitions=[Transition(name="go", source="X", target="Y")],
        )
        diagnostics = validate(contract)
        keys = [(d.node_path, d.code, d.message) for d in diagnostics]
        assert keys == sorted(keys)
        assert len(diagnostics) == 3

    def test_every_error_path_resolves(self, auction, rng):
        for _ in range(200):
            transitions = list(auction.transitions)
            i = rng.randrange(len(transitions))
            broken = transitions[i].model_copy(update={
                rng.choice(["source", "target"]): rng.choice(["Nowhere", "ABB", "F"]),
            })
            transitions[i] = broken
            mutated = auction.model_copy(update={"transitions": transitions})
            for d in validate(mutated):
                if d.is_error:
                    assert resolve_node_path(mutated, d.node_path) is not None, d


class TestReachability:
    def test_fixture_all_states_reachable(self, auction):
        assert reachable_states(auction) == {"ABB", "RB", "F", "C"}

    def test_guards_are_ignored(self):
        t = Transition(name="go", source="A", target="B", guards=[CoreExpression(ast=Ident(name="never"))])
        assert reachable_states(_contract(transitions=[t])) == {"A", "B"}

    def test_timed_edges_count(self):
        contract = _contract(
            transitions=[],
            timed_transitions=[TimedTransition(name="expire", source="A", target="B", time=5)],
        )
        assert reachable_states(contract) == {"A", "B"}

    def test_requires_one_initial_state(self):
        with pytest.raises(InvalidContractError) as info:
            reachable_states(_contract(states=[StateDecl(name="A"), StateDecl(name="B")]))
        assert info.value.code == "E_INITIAL_COUNT"

    def test_adding_a_transition_never_shrinks(self, auction, rng):
        names = auction.state_names
        contract = auction
        before = reachable_states(contract)
        for i in range(20):
            extra = Transition(name=f"extra{i}", source=rng.choice(names), target=rng.choice(names))
            contract = contract.model_copy(update={"transitions": [*contract.transitions, extra]})
            after = reachable_states(contract)
            assert before <= after
            before = after

    def test_transition_graph_has_one_edge_per_transition(self, auction):
        graph = transition_graph(auction)
        assert set(graph.nodes) == {"ABB", "RB", "F", "C"}
        assert graph.number_of_edges() == len(auction.transitions)
        assert graph.has_edge("ABB", "ABB", key="bid")


class TestNodePaths:
    @pytest.mark.parametrize("path, expected", [
        ("name", "BlindAuction"),
        ("transitions/close/to", "RB"),
        ("transitions/3/from", "ABB"),
        ("transitions/reveal/input/secret", "secret"),
        ("customTypes/Bid/fields/deposit", "deposit"),
        ("states/F", "F"),
    ])
    def test_resolves(self, auction, path, expected):
        node = resolve_node_path(auction, path)
        assert getattr(node, "name", node) == expected

    def test_guard_index(self, auction):
        assert resolve_node_path(auction, "transitions/close/guards/0") == auction.transition("close").guards[0]

    @pytest.mark.parametrize("path", ["transitions/nope", "states/Z", "transitions/close/guards/3", "bogus"])
    def test_unresolvable(self, auction, path):
        assert resolve_node_path(auction, path) is None
