"""Read-only access to the transcribed tables under ``fixtures/``.

Each table is one canonical JSON file (sorted keys, two-space indent,
UTF-8) named after its table id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping

from .ring import GradedClass, SpaceSignature, from_signed, to_signed

TABLE_IDS = (
    "appendix-x322",
    "appendix-x331",
    "appendix-x423",
    "curves-p4",
    "curves-p5",
    "decomp-alpha8",
    "decomp-alpha9",
    "decomp-delta",
    "decomp-lambda",
    "decomp-xi",
    "divisors-p4",
    "divisors-p5",
    "dual2-x44",
    "dual2-x55-maxinc",
    "expected-codim",
    "int-matrix-3",
    "int-matrix-4",
    "int-matrix-5",
    "lin2-x44",
    "lin2-x55",
    "schubert-anchors",
    "selfint-antican-x45",
    "selfint-p4",
    "selfint-p5",
    "witness-cubic-divisor",
    "witness-quadric",
    "witness-segre",
)


class UnknownTableError(KeyError):
    pass


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class FixtureRow:
    label: str
    coords: tuple[int, ...]


@dataclass(frozen=True)
class Fixture:
    table_id: str
    kind: str
    title: str
    source: str
    raw: Mapping[str, Any] = field(repr=False)

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "Fixture":
        for key in ("tableId", "kind"):
            if key not in doc:
                raise ValueError(f"fixture document lacks {key!r}")
        return cls(doc["tableId"], doc["kind"], doc.get("title", ""), doc.get("source", ""), dict(doc))

    def to_json(self) -> dict:
        return dict(self.raw)

    @property
    def space(self) -> SpaceSignature | None:
        sp = self.raw.get("space")
        return SpaceSignature.from_json(sp) if sp else None

    @property
    def degree(self) -> int | None:
        return self.raw.get("degree")

    @property
    def columns(self) -> list[str]:
        return list(self.raw.get("columns", []))

    @property
    def groups(self) -> list[list[str]]:
        return [list(g) for g in self.raw.get("groups", [])]

    def coordinate_rows(self) -> list[FixtureRow]:
        return [FixtureRow(r["label"], tuple(int(x) for x in r["coords"])) for r in self.raw.get("rows", []) if "coords" in r]

    def row(self, label: str) -> Mapping[str, Any]:
        for r in self.raw.get("rows", []):
            if r.get("label") == label:
                return r
        raise KeyError(f"{self.table_id} has no row {label!r}")

    def classes(self) -> list[GradedClass]:
        """Rows as classes of ``N^degree`` (signed display coordinates)."""
        if self.space is None or self.degree is None:
            return []
        return [from_signed(self.space, self.degree, r.coords) for r in self.coordinate_rows()]

    def round_trips(self) -> bool:
        for row, cls in zip(self.coordinate_rows(), self.classes()):
            if tuple(int(x) for x in to_signed(cls).coords) != row.coords:
                return False
        return True


def _read(name: str) -> str:
    return resources.files("cyclecones").joinpath("fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")


def load_fixture(table_id: str) -> Fixture:
    if table_id not in TABLE_IDS:
        raise UnknownTableError(table_id)
    return Fixture.from_json(json.loads(_read(table_id)))


def load_verdict_grids() -> dict:
    return json.loads(_read("verdict-grids"))


def fixture_text(table_id: str) -> str:
    if table_id not in TABLE_IDS:
        raise UnknownTableError(table_id)
    return _read(table_id)
