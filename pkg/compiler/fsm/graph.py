# compiler/fsm/graph.py
# ─────────────────────────────────────────────────────────────────────────────
"""Transition graph and guard-agnostic reachability."""

from __future__ import annotations

import networkx as nx

from models.contract import Contract
from models.diagnostic import error
from models.errors import InvalidContractError


def transition_graph(contract: Contract) -> nx.MultiDiGraph:
    """States as nodes, one keyed edge per (timed) transition."""
    graph = nx.MultiDiGraph(name=contract.name)
    for s in contract.states:
        graph.add_node(s.name, initial=s.is_initial)
    for name, source, target, timed in contract.all_edges():
        graph.add_edge(source, target, key=name, timed=timed)
    return graph


def reachable_states(contract: Contract) -> set[str]:
    """
    States reachable from the initial state following every edge, guards
    ignored (an over-approximation).
    """
    initial = contract.initial_states
    if len(initial) != 1:
        raise InvalidContractError(
            f"reachability needs exactly one initial state, found {len(initial)}",
            code="E_INITIAL_COUNT",
            diagnostics=[error("E_INITIAL_COUNT", "exactly one initial state required", "states")],
        )
    start = initial[0].name
    graph = transition_graph(contract)
    found = nx.descendants(graph, start) | {start}
    return found & set(contract.state_names)
