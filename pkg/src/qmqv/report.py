"""Verdict records shared by every verification routine."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive_at_bound"

_RANK = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}


@dataclass
class CheckReport:
    check_name: str
    status: str
    parameters: dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.status not in _RANK:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failing report must carry a witness")
        if self.status == INCONCLUSIVE and "bound" not in self.parameters:
            raise ValueError("an inconclusive report must record the bound used")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, deterministic: bool = False) -> dict[str, Any]:
        d = {
            "check": self.check_name,
            "status": self.status,
            "parameters": self.parameters,
            "witness": self.witness,
            "details": self.details,
        }
        if not deterministic:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def worst(statuses) -> str:
    out = PASS
    for s in statuses:
        if _RANK[s] > _RANK[out]:
            out = s
    return out


@contextmanager
def timed():
    box = {"ms": 0.0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = (time.perf_counter() - t0) * 1000.0
