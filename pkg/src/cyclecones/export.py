"""Deterministic renderings of a :class:`~cyclecones.tables.DiffReport`."""

from __future__ import annotations

import csv
import io

from .fixture import Fixture, canonical_json, load_fixture
from .tables import DiffReport, _jsonable, run_table

FORMATS = ("json", "csv", "markdown")


def _coord_rows(report: DiffReport) -> list[tuple[str, str, list]]:
    out = []
    for r in report.rows:
        if isinstance(r.computed, list) and len(r.computed) == len(report.columns) and report.columns:
            out.append((r.label, r.status, r.computed))
    return out


def computed_fixture(report: DiffReport, fx: Fixture) -> dict:
    """The recomputed table as a fixture document (plus the full report)."""
    doc = {k: v for k, v in fx.raw.items() if k not in ("rows", "numbers")}
    if report.columns:
        doc["rows"] = [{"label": lab, "coords": _jsonable(c)} for lab, _, c in _coord_rows(report)]
    else:
        doc["rows"] = [{"label": r.label, "value": _jsonable(r.computed)} for r in report.rows]
    doc["report"] = report.to_json()
    return doc


def to_json(report: DiffReport) -> str:
    return canonical_json(computed_fixture(report, load_fixture(report.table_id)))


def to_csv(report: DiffReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.expanded is not None:
        w.writerow(report.columns)
        for v in report.expanded:
            w.writerow(v)
        return buf.getvalue()
    if report.columns:
        w.writerow(["label", "status", *report.columns])
        for lab, status, c in _coord_rows(report):
            w.writerow([lab, status, *_jsonable(c)])
    else:
        w.writerow(["label", "status", "expected", "computed"])
        for r in report.rows:
            w.writerow([r.label, r.status, _jsonable(r.fixture), _jsonable(r.computed)])
    return buf.getvalue()


def _md_table(header: list[str], rows: list[list]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(x) for x in row) + " |" for row in rows]
    return lines


def to_markdown(report: DiffReport) -> str:
    out = [f"## {report.table_id}: {report.title}", "", f"status: **{report.status}**", ""]
    if report.expanded is not None:
        out += _md_table(report.columns, [list(v) for v in report.expanded]) + [""]
    elif report.columns:
        rows = {lab: (status, c) for lab, status, c in _coord_rows(report)}
        groups = [g for g in report.groups if any(lab in rows for lab in g)]
        grouped = {lab for g in groups for lab in g}
        rest = [lab for lab in rows if lab not in grouped]
        if rest:
            groups.append(rest)
        header = ["", *report.columns, "status"]
        for gi, g in enumerate(groups):
            if gi:
                out += ["---", ""]
            body = [[lab, *_jsonable(rows[lab][1]), rows[lab][0]] for lab in g if lab in rows]
            out += _md_table(header, body) + [""]
        missing = [r for r in report.rows if r.label not in rows]
        if missing:
            out += ["Rows without a computed counterpart:", ""]
            out += [f"- {r.label}: {_jsonable(r.fixture)} ({r.note})" for r in missing] + [""]
    else:
        body = [[r.label, _jsonable(r.fixture), _jsonable(r.computed), r.status] for r in report.rows]
        out += _md_table(["", "expected", "computed", "status"], body) + [""]
    if report.checks:
        out += ["Checks:", ""]
        out += [f"- [{'x' if c.ok else ' '}] {c.name}" + (f": {c.detail}" if c.detail else "") for c in report.checks]
        out.append("")
    if report.diffs:
        out += ["Differences:", ""]
        for d in report.diffs:
            tag = "known" if d["registered"] and d["certificateVerified"] else "UNEXPECTED"
            out.append(f"- `{d['key']}` ({tag}): {d.get('reason', d['detail'])}")
        out.append("")
    return "\n".join(out)


def render(report: DiffReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "markdown":
        return to_markdown(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def export(table_id: str, fmt: str, expand_orbits: bool = False) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return render(run_table(table_id, expand_orbits), fmt)
