# schemas/schedule.py
# ─────────────────────────────────────────────────────────────────────────────
"""
Schedule files: a JSON array of invocation records.

    [
      {"transition": "bid", "now": 1000, "sender": "alice", "value": 10,
       "args": {"blindedBid": "0xab…"}, "counterArg": 0},
      {"transition": "withdraw", "now": 433000, "sender": "alice",
       "reentry": {"transition": "withdraw", "now": 433000, "sender": "alice"}}
    ]

``now`` is absolute (seconds); ``value`` defaults to 0, ``args`` to ``{}``.
A ``reentry`` record's ``sender`` and ``now`` are replaced at run time by the
Send recipient and the outer call's ``now``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, TypeAdapter

from models.runtime import Env, Invocation


class ScheduleRecord(BaseModel):
    transition: str
    now: NonNegativeInt
    sender: str
    value: NonNegativeInt = 0
    args: dict[str, Any] = Field(default_factory=dict)
    counter_arg: Optional[NonNegativeInt] = Field(default=None, alias="counterArg")
    reentry: Optional["ScheduleRecord"] = None

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    def to_invocation(self) -> Invocation:
        return Invocation(
            transition=self.transition,
            env=Env(now=self.now, sender=self.sender, value=self.value),
            args=self.args,
            counter_arg=self.counter_arg,
            reentry=self.reentry.to_invocation() if self.reentry else None,
        )


ScheduleRecord.model_rebuild()

_SCHEDULE = TypeAdapter(list[ScheduleRecord])


def parse_schedule(text: str) -> list[Invocation]:
    return [r.to_invocation() for r in _SCHEDULE.validate_json(text)]


def load_schedule(path: str | Path) -> list[Invocation]:
    return parse_schedule(Path(path).read_text(encoding="utf-8"))


def invocation_record(call: Invocation) -> dict[str, Any]:
    """Inverse of ``to_invocation`` (reentry dropped), used in JSON reports."""
    record: dict[str, Any] = {
        "transition": call.transition,
        "now": call.env.now,
        "sender": call.env.sender,
        "value": call.env.value,
        "args": call.args,
    }
    if call.counter_arg is not None:
        record["counterArg"] = call.counter_arg
    return record
