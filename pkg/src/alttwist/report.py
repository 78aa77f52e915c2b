"""Structured verdicts returned by every checker."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .scalars import render_scalar


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return render_scalar(x)


@dataclass(frozen=True)
class CheckReport:
    property: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""
    elements: tuple | None = None  # element-level witness, coordinate tuples

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failing report {self.property!r} needs a witness")

    @classmethod
    def ok(cls, prop: str, detail: str = "") -> "CheckReport":
        return cls(prop, True, None, detail)

    @classmethod
    def fail(cls, prop: str, witness, detail: str = "", elements=None) -> "CheckReport":
        return cls(prop, False, tuple(witness), detail, None if elements is None else tuple(elements))

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        s = f"{self.property}: {self.verdict}"
        if self.witness is not None:
            s += f" witness={list(_jsonable(self.witness))}"
        if self.detail:
            s += f" ({self.detail})"
        return s

    def to_json(self) -> dict:
        doc = {
            "property": self.property,
            "verdict": self.verdict,
            "witness": _jsonable(self.witness) if self.witness is not None else [],
            "detail": self.detail,
        }
        if self.elements is not None:
            doc["elements"] = _jsonable(self.elements)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def combine(prop: str, reports, detail: str = "") -> CheckReport:
    """First failing report wins (re-tagged); otherwise a pass."""
    for r in reports:
        if not r.passed:
            return CheckReport(prop, False, (r.property,) + tuple(r.witness), r.detail, r.elements)
    return CheckReport.ok(prop, detail)
