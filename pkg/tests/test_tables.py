import csv
import io
import json

import pytest

from cyclecones import export, tables
from cyclecones.fixture import (
    TABLE_IDS,
    Fixture,
    UnknownTableError,
    canonical_json,
    fixture_text,
    load_fixture,
)
from cyclecones.tables import ARITHMETIC, ASSERTED, KNOWN, MATCH, MISMATCH, run_all, run_table

KNOWN_IDS = {"appendix-x423", "curves-p4", "curves-p5", "decomp-alpha9", "divisors-p4", "lin2-x55"}


@pytest.fixture(scope="module")
def summary():
    return run_all()


@pytest.mark.parametrize("table_id", TABLE_IDS)
def test_table_status(summary, table_id):
    rep = summary.reports[table_id]
    assert rep.status == (KNOWN if table_id in KNOWN_IDS else MATCH)
    assert all(c.ok for c in rep.checks), [c for c in rep.checks if not c.ok]


@pytest.mark.parametrize("table_id", TABLE_IDS)
def test_fixture_file_is_canonical(table_id):
    fx = load_fixture(table_id)
    assert canonical_json(fx.to_json()) == fixture_text(table_id)
    assert fx.round_trips()


def test_unknown_table():
    with pytest.raises(UnknownTableError):
        run_table("no-such-table")
    with pytest.raises(UnknownTableError):
        load_fixture("no-such-table")


def test_reports_are_deterministic():
    a = export.export("dual2-x44", "json")
    b = export.export("dual2-x44", "json")
    assert a == b


def test_removing_register_entry_gives_mismatch(monkeypatch):
    reg = dict(tables.KNOWN_DIFFS)
    reg["decomp-alpha9"] = {}
    monkeypatch.setattr(tables, "KNOWN_DIFFS", reg)
    rep = run_table("decomp-alpha9")
    assert rep.status == MISMATCH
    assert any(not d["registered"] for d in rep.diffs)


def test_stale_register_entry_gives_mismatch(monkeypatch):
    reg = dict(tables.KNOWN_DIFFS)
    reg["decomp-delta"] = {"target": "should not occur"}
    monkeypatch.setattr(tables, "KNOWN_DIFFS", reg)
    rep = run_table("decomp-delta")
    assert rep.status == MISMATCH
    assert any("no longer occurs" in c.detail for c in rep.checks)


def test_known_diffs_carry_verified_certificates(summary):
    for tid in KNOWN_IDS:
        diffs = summary.reports[tid].diffs
        assert diffs and all(d["registered"] and d["certificateVerified"] for d in diffs)


def test_verdict_cells(summary):
    v = summary.verdicts
    c = v.cell(5, 1, "6")
    assert (c.value, c.channel, c.backing) == ("no", ARITHMETIC, "selfint-p5")
    assert v.cell(4, 1, "10").channel == ARITHMETIC
    assert v.cell(5, 3, "4").channel == ARITHMETIC
    assert v.cell(4, 2, "4") == tables.VerdictCell("yes", ASSERTED)
    assert v.cell(4, 1, "8").value == "unknown"
    assert v.cell(4, 1, "9").value == "unknown"
    text = summary.render()
    assert "21 match, 6 known-diff, 0 mismatch" in text
    assert "Dimension 5" in text


def test_markdown_has_group_tables():
    md = export.export("dual2-x44", "markdown")
    fx = load_fixture("dual2-x44")
    assert len(fx.groups) > 1
    assert md.count("\n---\n") >= len(fx.groups) - 1


def test_csv_expanded_rows():
    text = export.export("dual2-x44", "csv", expand_orbits=True)
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 36  # header + 35 rays


def test_json_export_is_fixture_shaped():
    doc = json.loads(export.export("lin2-x44", "json"))
    fx = Fixture.from_json(doc)
    assert fx.table_id == "lin2-x44"
    assert {r.coords for r in fx.coordinate_rows()} == {r.coords for r in load_fixture("lin2-x44").coordinate_rows()}
    assert doc["report"]["status"] == MATCH


def test_unknown_format():
    with pytest.raises(ValueError):
        export.export("lin2-x44", "yaml")
