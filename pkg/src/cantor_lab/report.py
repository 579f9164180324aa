"""Tri-state check reports and deterministic JSON emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

PASS = "pass"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {PASS: 0, REFUTED: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3

REPORT_SCHEMA = "cantor-lab/report/v1"
CERT_SCHEMA = "cantor-lab/cert/v1"
TABLE_SCHEMA = "cantor-lab/table/v1"


@dataclass
class Report:
    check: str
    status: str
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in EXIT_CODES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status, "params": self.params, "details": self.details}

    @classmethod
    def from_json(cls, obj: dict) -> "Report":
        return cls(obj["check"], obj["status"], dict(obj.get("params", {})), dict(obj.get("details", {})))


def worst(statuses: Iterable[str]) -> str:
    """Refuted beats inconclusive beats pass."""
    statuses = list(statuses)
    if REFUTED in statuses:
        return REFUTED
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(obj), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def suite_document(reports: list[Report], config: dict) -> dict:
    ordered = sorted(reports, key=lambda r: (r.check, json.dumps(r.params, sort_keys=True)))
    return {
        "schema": REPORT_SCHEMA,
        "config": config,
        "status": worst(r.status for r in ordered),
        "checks": [r.to_json() for r in ordered],
    }
