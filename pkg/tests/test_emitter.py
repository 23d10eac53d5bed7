# tests/test_emitter.py
"""Solidity generation, golden files and the structural self-check."""

from __future__ import annotations

import re

import pytest

from compiler.dsl import parse_contract
from compiler.solidity import EmitOptions, emit_solidity, structural_check
from models.plugins import PluginSet

from conftest import GOLDEN, weave

COMBINATIONS = PluginSet.all_combinations()


def golden_path(plugins: PluginSet):
    return GOLDEN / f"blind_auction__{plugins.slug}.sol"


@pytest.mark.parametrize("plugins", COMBINATIONS, ids=[p.slug for p in COMBINATIONS])
def test_golden(plugins, auction, update_golden):
    solidity = emit_solidity(weave(auction, plugins))
    path = golden_path(plugins)
    if update_golden:
        path.write_text(solidity, encoding="utf-8")
    assert solidity == path.read_text(encoding="utf-8")


@pytest.mark.parametrize("plugins", COMBINATIONS, ids=[p.slug for p in COMBINATIONS])
def test_structural_check_passes(plugins, auction):
    aug = weave(auction, plugins)
    assert structural_check(emit_solidity(aug), aug) == []


def test_fixture_shape(auction):
    solidity = emit_solidity(weave(auction))
    enum = re.search(r"enum States \{([^}]*)\}", solidity)
    assert [m.strip() for m in enum.group(1).split(",")] == ["ABB", "RB", "F", "C"]
    functions = re.findall(r"^\s*function (\w+)\(", solidity, re.M)
    assert functions == ["bid", "cancelABB", "unbid", "close", "reveal", "finish", "withdraw", "cancelRB"]
    assert "function bid(bytes32 blindedBid) payable {" in solidity
    assert "uint private creationTime = now;" in solidity


def test_deterministic(auction):
    aug = weave(auction, "locking,counter,timed,access")
    assert emit_solidity(aug) == emit_solidity(aug)


def test_modifier_order_with_both_plugins(auction):
    solidity = emit_solidity(weave(auction, "locking,counter"))
    headers = re.findall(r"^\s*function \w+\([^)]*\) (.*)\{$", solidity, re.M)
    assert len(headers) == 8
    assert all(h.startswith("locking transitionCounting(nextTransitionNumber)") for h in headers)


def test_timed_fixture_inlines_the_timed_block(timed_auction):
    solidity = emit_solidity(weave(timed_auction, "timed"))
    assert "modifier timedTransitions {" in solidity
    assert "if (state == States.ABB && now >= creationTime + 5 days) {" in solidity
    aug = weave(timed_auction, "timed")
    assert structural_check(solidity, aug) == []


PHASES_TIMED_MODIFIER = """\
    modifier timedTransitions {
        if (state == States.A && now >= creationTime + 1 hours) {
            trail = trail * 10 + 1;
            state = States.B;
        }
        if (state == States.A && now >= creationTime + 1 hours) {
            trail = trail * 10 + 9;
            state = States.D;
        }
        if (state == States.B && now >= creationTime + 2 hours) {
            trail = trail * 10 + 2;
            state = States.C;
        }
        _;
    }
"""


def test_timed_blocks_follow_firing_order(phases):
    aug = weave(phases, "timed")
    solidity = emit_solidity(aug)
    assert PHASES_TIMED_MODIFIER in solidity
    assert structural_check(solidity, aug) == []


def test_events_fire_without_the_emit_keyword():
    contract = parse_contract("contract T { state initial A; state B; transition go { from A; to B; tags event; } }")
    solidity = emit_solidity(weave(contract))
    assert "    event goEvent();\n" in solidity
    assert "        state = States.B;\n        goEvent();\n    }\n" in solidity
    assert "emit " not in solidity


def test_pragma_option(auction):
    solidity = emit_solidity(weave(auction), EmitOptions(pragma_version="0.4.24"))
    assert solidity.startswith("pragma solidity 0.4.24;\n")


class TestStructuralCheck:
    def test_reports_a_missing_function(self, auction):
        aug = weave(auction)
        solidity = emit_solidity(aug).replace("function unbid()", "function unbid2()")
        findings = structural_check(solidity, aug)
        assert [(d.code, d.node_path) for d in findings] == [("E_STRUCT_FUNCTION", "transitions/unbid")]

    def test_reports_modifier_order(self, auction):
        aug = weave(auction, "locking,counter")
        solidity = emit_solidity(aug).replace(
            "locking transitionCounting(nextTransitionNumber) {",
            "transitionCounting(nextTransitionNumber) locking {",
            1,
        )
        codes = {d.code for d in structural_check(solidity, aug)}
        assert codes == {"E_STRUCT_MODIFIER_ORDER"}

    def test_reports_missing_state_require(self, auction):
        aug = weave(auction)
        solidity = emit_solidity(aug).replace("        require(state == States.F);\n", "", 1)
        findings = structural_check(solidity, aug)
        assert [(d.code, d.node_path) for d in findings] == [("E_STRUCT_STATE_REQUIRE", "transitions/withdraw")]

    def test_reports_enum_mismatch(self, auction):
        aug = weave(auction)
        solidity = emit_solidity(aug).replace("        C\n    }", "        C,\n        X\n    }", 1)
        assert [d.code for d in structural_check(solidity, aug)] == ["E_STRUCT_ENUM"]
