# models/errors.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Exception hierarchy for the toolchain.

Every tooling failure is an ``FsmsolcError`` (a ``RuntimeError``) with a
stable ``code``. Modeled contract behaviour (a guard failing, a lock being
held …) is NOT an exception: the interpreter reports it as a ``Rejected``
outcome.
"""

from __future__ import annotations

from typing import Sequence

from .diagnostic import Diagnostic

__all__ = [
    "FsmsolcError",
    "ContractParseError",
    "InvalidContractError",
    "PluginError",
    "EmitError",
    "InterpretationError",
    "GasModelError",
]


class FsmsolcError(RuntimeError):
    code: str = "E_INTERNAL"

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        diagnostics: Sequence[Diagnostic] = (),
    ) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code
        self.diagnostics: list[Diagnostic] = list(diagnostics)

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class ContractParseError(FsmsolcError):
    """Source text could not be turned into a Contract; see ``diagnostics``."""

    code = "E_PARSE"


class InvalidContractError(FsmsolcError):
    """Operation refused because the contract has Error diagnostics."""

    code = "E_INVALID_CONTRACT"


class PluginError(FsmsolcError):
    code = "E_PLUGIN_REQUIRED"


class EmitError(FsmsolcError):
    code = "E_EMIT_UNSUPPORTED"


class InterpretationError(FsmsolcError):
    """The interpreter cannot execute a construct (tool limitation, not a rejection)."""

    code = "E_UNINTERPRETABLE"


class GasModelError(FsmsolcError):
    code = "E_UNCALIBRATED"
