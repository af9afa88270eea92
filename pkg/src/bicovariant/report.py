"""Verification reports: JSON (versioned schema) and markdown rendering.

JSON schema, version 1::

    {
      "schema": "bicovariant-report",
      "version": 1,
      "config": {...},            # group, suites, mode, seeds, q_samples, ...
      "summary": {"total": n, "gating": k, "by_status": {status: count}},
      "records": [                # sorted by (group, id)
        {"id", "suite", "tag", "group", "expected", "status",
         "detail", "data", "provenance", ["seconds"]}
      ]
    }

``status`` is one of ``pass``, ``fail``, ``fail-as-expected``,
``unexpected-pass``, ``finding``, ``error``.  Timings appear only when asked
for, so that identical runs give byte-identical documents.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field

from .checks import GATING, Record

SCHEMA = "bicovariant-report"
VERSION = 1
_FIELDS = ("id", "suite", "tag", "group", "expected", "status", "detail", "data", "provenance")


@dataclass
class VerificationReport:
    config: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    def sorted(self) -> "VerificationReport":
        return VerificationReport(self.config, sorted(self.records, key=lambda r: (r.group, r.id)))

    @property
    def gating(self) -> list[Record]:
        return [r for r in self.records if r.status in GATING]

    @property
    def ok(self) -> bool:
        return not self.gating

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary(self) -> dict:
        return {
            "total": len(self.records),
            "gating": len(self.gating),
            "by_status": dict(sorted(Counter(r.status for r in self.records).items())),
        }


def to_dict(rep: VerificationReport) -> dict:
    rep = rep.sorted()
    recs = []
    for r in rep.records:
        d = {k: getattr(r, k) for k in _FIELDS}
        if r.seconds is not None:
            d["seconds"] = r.seconds
        recs.append(d)
    return {"schema": SCHEMA, "version": VERSION, "config": rep.config, "summary": rep.summary(), "records": recs}


def render_json(rep: VerificationReport) -> str:
    return json.dumps(to_dict(rep), indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> VerificationReport:
    d = json.loads(text)
    if d.get("schema") != SCHEMA:
        raise ValueError("not a bicovariant report")
    if d.get("version") != VERSION:
        raise ValueError(f"unsupported report version {d.get('version')!r}")
    recs = [Record(**{k: r[k] for k in _FIELDS}, seconds=r.get("seconds")) for r in d["records"]]
    return VerificationReport(d.get("config", {}), recs)


def _cell(s) -> str:
    return str(s).replace("|", "\\|").replace("\n", " ")


def render_markdown(rep: VerificationReport) -> str:
    rep = rep.sorted()
    lines = ["# Verification report", ""]
    if rep.config:
        cfg = ", ".join(f"{k}={v}" for k, v in sorted(rep.config.items()))
        lines += [f"Configuration: {_cell(cfg)}", ""]
    s = rep.summary()
    counts = ", ".join(f"{k} {v}" for k, v in s["by_status"].items()) or "none"
    lines += [f"{s['total']} checks ({counts}); {'OK' if rep.ok else 'FAILED'}", ""]
    if not rep.records:
        return "\n".join(lines) + "\n"
    timed = any(r.seconds is not None for r in rep.records)
    head = ["tag", "check", "group", "expected", "status", "detail"] + (["s"] if timed else [])
    lines += ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rep.records:
        row = [r.tag, r.id, r.group, r.expected, r.status, r.detail]
        if timed:
            row.append("" if r.seconds is None else f"{r.seconds:.2f}")
        lines.append("| " + " | ".join(_cell(x) for x in row) + " |")
    return "\n".join(lines) + "\n"


def render(rep: VerificationReport, fmt: str = "json") -> str:
    if fmt == "json":
        return render_json(rep)
    if fmt == "markdown":
        return render_markdown(rep)
    raise ValueError(f"unknown format {fmt!r}")


def record_dict(r: Record) -> dict:
    return asdict(r)
