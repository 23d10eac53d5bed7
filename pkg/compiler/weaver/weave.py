# compiler/weaver/weave.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Plugin weaving.

Design notes
------------
* Weaving is non-destructive: the input Contract is carried as ``base``
  untouched and every addition lives beside it on the AugmentedContract.
* Wrapper order is fixed by ``WRAPPER_ORDER`` (locking, transition counting,
  timed transitions, access guard). Every entry point gets the same list,
  except that the access guard sits only on admin-tagged and generated
  admin transitions.
* ``apply_plugins`` is strict. ``relax_for_plugins`` is the explicit way to
  drop admin tags / timed transitions a plugin set cannot honour.
"""

from __future__ import annotations

import logging
from typing import Final

from models.contract import CREATION_TIME, Contract, Tag, Variable, VariableKind, Visibility
from models.diagnostic import has_errors
from models.errors import InvalidContractError, PluginError
from models.expressions import BoolLit, CoreExpression, IntLit
from models.plugins import (
    AdminAction, AdminTransition, AugmentedContract, PluginSet, TransitionWeave,
    WrapperKind, WRAPPER_ORDER,
)
from models.types import ADDRESS, BOOL, UINT, MappingType

from compiler.fsm.validate import validate

log = logging.getLogger(__name__)

# ── Plugin symbols ───────────────────────────────────────────────────────────
LOCK_VARIABLE: Final[str] = "locked"
COUNTER_VARIABLE: Final[str] = "transitionCounter"
ADMINS_VARIABLE: Final[str] = "admins"
ADMIN_COUNT_VARIABLE: Final[str] = "adminCount"
COUNTER_PARAMETER: Final[str] = "nextTransitionNumber"
ADMIN_PARAMETER: Final[str] = "admin"
ADD_ADMIN: Final[str] = "addAdmin"
REMOVE_ADMIN: Final[str] = "removeAdmin"


def _contract_var(name: str, semantic_type, initializer=None) -> Variable:
    return Variable(
        name=name,
        kind=VariableKind.CONTRACT_DATA,
        semantic_type=semantic_type,
        visibility=Visibility.PRIVATE,
        initializer=initializer,
    )


def _plugin_variables(plugins: PluginSet) -> list[Variable]:
    extra: list[Variable] = []
    if plugins.locking:
        extra.append(_contract_var(LOCK_VARIABLE, BOOL, CoreExpression(ast=BoolLit(value=False))))
    if plugins.transition_counter:
        extra.append(_contract_var(COUNTER_VARIABLE, UINT, CoreExpression(ast=IntLit(value=0))))
    if plugins.access_control:
        extra.append(_contract_var(ADMINS_VARIABLE, MappingType(key=ADDRESS, value=BOOL)))
        extra.append(_contract_var(ADMIN_COUNT_VARIABLE, UINT, CoreExpression(ast=IntLit(value=1))))
    return extra


def _admin_transitions() -> list[AdminTransition]:
    parameter = Variable(name=ADMIN_PARAMETER, kind=VariableKind.INPUT_DATA, semantic_type=ADDRESS)
    return [
        AdminTransition(name=ADD_ADMIN, action=AdminAction.ADD, parameter=parameter),
        AdminTransition(name=REMOVE_ADMIN, action=AdminAction.REMOVE, parameter=parameter),
    ]


def _wrappers(plugins: PluginSet, admin: bool) -> list[WrapperKind]:
    enabled = {
        WrapperKind.LOCKING: plugins.locking,
        WrapperKind.TRANSITION_COUNTING: plugins.transition_counter,
        WrapperKind.TIMED_TRANSITIONS: plugins.timed_transitions,
        WrapperKind.ACCESS_GUARD: plugins.access_control and admin,
    }
    return [kind for kind in WRAPPER_ORDER if enabled[kind]]


# ── Requirement / conflict checks ────────────────────────────────────────────
def _check_requirements(contract: Contract, plugins: PluginSet) -> None:
    problems: list[str] = []
    admin_tagged = [t.name for t in contract.transitions if t.is_admin]
    if admin_tagged and not plugins.access_control:
        problems.append(f"admin-tagged transitions {admin_tagged} need the access plugin")
    if contract.timed_transitions and not plugins.timed_transitions:
        names = [t.name for t in contract.timed_transitions]
        problems.append(f"timed transitions {names} need the timed plugin")
    if problems:
        raise PluginError("; ".join(problems))


def _check_conflicts(contract: Contract, plugins: PluginSet, extra: list[Variable]) -> None:
    declared = {v.name for v in contract.variables}
    clashes = sorted(v.name for v in extra if v.name in declared)
    if plugins.access_control:
        entry_points = {t.name for t in contract.transitions} | {t.name for t in contract.timed_transitions}
        clashes += sorted(n for n in (ADD_ADMIN, REMOVE_ADMIN) if n in entry_points)
    if plugins.transition_counter:
        clashes += sorted(
            f"{t.name}.{COUNTER_PARAMETER}"
            for t in contract.transitions
            if any(p.name == COUNTER_PARAMETER for p in (*t.input, *t.output))
        )
    if clashes:
        raise PluginError(f"plugin names collide with declarations: {', '.join(clashes)}", code="E_PLUGIN_CONFLICT")


# ── Public API ───────────────────────────────────────────────────────────────
def apply_plugins(contract: Contract, plugins: PluginSet) -> AugmentedContract:
    """Weave ``plugins`` into a validated contract."""
    if not isinstance(contract, Contract):
        raise TypeError(f"apply_plugins expects a Contract, got {type(contract).__name__}")
    diagnostics = validate(contract)
    if has_errors(diagnostics):
        raise InvalidContractError(
            f"contract {contract.name} has errors; refusing to weave",
            diagnostics=[d for d in diagnostics if d.is_error],
        )
    _check_requirements(contract, plugins)

    extra = _plugin_variables(plugins)
    _check_conflicts(contract, plugins, extra)
    generated = _admin_transitions() if plugins.access_control else []
    counter_input = (
        [Variable(name=COUNTER_PARAMETER, kind=VariableKind.INPUT_DATA, semantic_type=UINT)]
        if plugins.transition_counter else []
    )

    weaves = [
        TransitionWeave(transition=t.name, wrappers=_wrappers(plugins, t.is_admin), extra_inputs=counter_input)
        for t in contract.transitions
    ]
    weaves += [
        TransitionWeave(transition=g.name, wrappers=_wrappers(plugins, True), extra_inputs=counter_input, generated=True)
        for g in generated
    ]

    aug = AugmentedContract(
        base=contract,
        plugins=plugins,
        extra_variables=extra,
        weaves=weaves,
        generated_transitions=generated,
        inject_creation_time=not contract.declares_creation_time(),
    )
    log.debug(
        "wove %s with [%s]: %d extra variables, %d entry points",
        contract.name, plugins.slug, len(extra), len(weaves),
    )
    if not aug.inject_creation_time:
        log.debug("%s declares %s itself; injection skipped", contract.name, CREATION_TIME)
    return aug


def relax_for_plugins(contract: Contract, plugins: PluginSet) -> tuple[Contract, list[str]]:
    """
    Drop what ``plugins`` cannot support: ``admin`` tags without access
    control, timed transitions without the timed plugin. Returns the relaxed
    contract and the node paths of every stripped item.
    """
    stripped: list[str] = []
    transitions = list(contract.transitions)
    timed = list(contract.timed_transitions)

    if not plugins.access_control:
        relaxed = []
        for t in transitions:
            if t.is_admin:
                stripped.append(f"transitions/{t.name}/tags/{Tag.ADMIN.value}")
                t = t.model_copy(update={"tags": t.tags - {Tag.ADMIN}})
            relaxed.append(t)
        transitions = relaxed
    if not plugins.timed_transitions and timed:
        stripped += [f"timedTransitions/{t.name}" for t in timed]
        timed = []

    for path in stripped:
        log.warning("plugin set [%s] cannot honour %s; stripped", plugins.slug, path)
    if not stripped:
        return contract, []
    return contract.model_copy(update={"transitions": transitions, "timed_transitions": timed}), stripped
