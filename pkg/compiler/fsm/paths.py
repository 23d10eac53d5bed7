# compiler/fsm/paths.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Node paths into a contract tree.

    name
    states[/<name|index>]
    variables/<name|index>[/initializer]
    customTypes/<name|index>[/fields/<name|index>]
    transitions/<name|index>[/from|to|name|guards|statements|input|output|tags[/<i|name>]]
    timedTransitions/<name|index>[/from|to|name|time|guards|statements[/<i>]]

Named segments match by name first, then by position, so findings about
duplicate or malformed names can still point at the exact node.
"""

from __future__ import annotations

from typing import Any, Sequence

from models.contract import Contract

_MISSING = object()


def _pick(items: Sequence[Any], key: str, name_of=lambda x: x.name) -> Any:
    for item in items:
        if name_of(item) == key:
            return item
    if key.isdigit() and int(key) < len(items):
        return items[int(key)]
    return _MISSING


def _pick_index(items: Sequence[Any], key: str) -> Any:
    if key.isdigit() and int(key) < len(items):
        return items[int(key)]
    return _MISSING


_TRANSITION_ATTRS = {
    "name": lambda t: t.name,
    "from": lambda t: t.source,
    "to": lambda t: t.target,
    "guards": lambda t: t.guards,
    "statements": lambda t: t.statements,
    "input": lambda t: t.input,
    "output": lambda t: t.output,
    "tags": lambda t: t.sorted_tags,
    "time": lambda t: t.time,
}


def _resolve_edge(edge: Any, rest: list[str]) -> Any:
    if not rest:
        return edge
    attr = _TRANSITION_ATTRS.get(rest[0])
    if attr is None or (rest[0] in ("input", "output", "tags") and not hasattr(edge, "input")):
        return _MISSING
    if rest[0] == "time" and not hasattr(edge, "time"):
        return _MISSING
    value = attr(edge)
    if len(rest) == 1:
        return value
    if len(rest) > 2:
        return _MISSING
    key = rest[1]
    if rest[0] in ("input", "output"):
        return _pick(value, key)
    if rest[0] == "tags":
        return _pick(value, key, name_of=lambda tag: tag.value)
    if rest[0] in ("guards", "statements"):
        return _pick_index(value, key)
    return _MISSING


def resolve_node_path(contract: Contract, path: str) -> Any | None:
    """The node a diagnostic path points at, or None when it does not resolve."""
    parts = path.split("/")
    head, rest = parts[0], parts[1:]
    node: Any = _MISSING
    if head == "name" and not rest:
        node = contract.name
    elif head == "states":
        if not rest:
            node = contract.states
        elif len(rest) == 1:
            node = _pick(contract.states, rest[0])
    elif head == "variables" and rest:
        var = _pick(contract.variables, rest[0])
        if len(rest) == 1:
            node = var
        elif var is not _MISSING and rest[1:] == ["initializer"]:
            node = var.initializer if var.initializer is not None else _MISSING
    elif head == "customTypes" and rest:
        struct = _pick(contract.custom_types, rest[0])
        if len(rest) == 1:
            node = struct
        elif struct is not _MISSING and len(rest) == 3 and rest[1] == "fields":
            node = _pick(struct.fields, rest[2])
    elif head in ("transitions", "timedTransitions") and rest:
        edges = contract.transitions if head == "transitions" else contract.timed_transitions
        edge = _pick(edges, rest[0])
        if edge is not _MISSING:
            node = _resolve_edge(edge, rest[1:])
    return None if node is _MISSING else node
