# models/diagnostic.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Validation findings.

A Diagnostic points at a node of the contract tree through a slash-separated
``node_path`` (``states``, ``transitions/close/to``,
``transitions/close/guards/0`` …) so tooling can link back to the offending
element. Parse errors use ``source/<line>:<column>``.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable

from pydantic import BaseModel, ConfigDict


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"


class Diagnostic(BaseModel):
    severity: Severity
    code: str          # e.g. E_INITIAL_COUNT
    message: str
    node_path: str

    model_config = ConfigDict(frozen=True)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def __str__(self) -> str:
        return f"{self.severity.value} {self.code} at {self.node_path}: {self.message}"


def error(code: str, message: str, node_path: str) -> Diagnostic:
    return Diagnostic(severity=Severity.ERROR, code=code, message=message, node_path=node_path)


def warning(code: str, message: str, node_path: str) -> Diagnostic:
    return Diagnostic(severity=Severity.WARNING, code=code, message=message, node_path=node_path)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    """Stable ordering used by every producer: node path, then code, then message."""
    return sorted(diagnostics, key=lambda d: (d.node_path, d.code, d.message))
