"""``cyclecones`` command line.

Exit codes: 0 when every requested table matches or differs only in a
registered way, 1 on any mismatch, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import schubert as sch
from .cone import RayCone, dual_cone, membership
from .export import FORMATS, render
from .fixture import TABLE_IDS, canonical_json
from .ring import GradedClass, SpaceSignature, from_signed, pairing_matrix, self_intersection, to_signed
from .tables import _jsonable, linear_cone, run_all, run_table


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_cone(doc: dict) -> RayCone:
    """A cone file holds one of: a serialised ``RayCone``; ``{"space",
    "cycleDim"}`` for the derived linear cone; or ``{"space", "degree",
    "rows"}`` with signed coordinates in ``N^degree``."""
    try:
        if "ambientDim" in doc:
            return RayCone.from_json(doc)
        space = SpaceSignature.from_json(doc["space"])
        if "cycleDim" in doc:
            return linear_cone(space, int(doc["cycleDim"]))[0]
        k = int(doc["degree"])
        rows = [tuple(int(x) for x in r) for r in doc["rows"]]
        M = pairing_matrix(space, space.n - k, signed=True)
        return RayCone(len(M), tuple(rows), None, M)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"unrecognised cone file: {exc}") from None


def load_vector(doc) -> tuple:
    if isinstance(doc, list):
        return tuple(doc)
    if "coords" in doc and isinstance(doc["coords"], list):
        return tuple(doc["coords"])
    try:
        cls = GradedClass.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"unrecognised class file: {exc}") from None
    return tuple(to_signed(cls).coords)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_table(args) -> int:
    if args.table_id not in TABLE_IDS:
        raise UsageError(f"unknown table id {args.table_id!r}; known ids: {', '.join(TABLE_IDS)}")
    report = run_table(args.table_id, args.expand_orbits)
    _emit(render(report, args.format), args.out)
    return 0 if report.ok else 1


def _cmd_all(args) -> int:
    summary = run_all()
    text = canonical_json(summary.to_json()) if args.format == "json" else summary.render()
    _emit(text, args.out)
    return 0 if summary.ok else 1


def _cmd_dual(args) -> int:
    cone = load_cone(_load_json(args.conefile))
    _emit(canonical_json(dual_cone(cone).to_json()), args.out)
    return 0


def _cmd_member(args) -> int:
    v = load_vector(_load_json(args.classfile))
    cone = load_cone(_load_json(args.conefile))
    if len(v) != cone.ambient_dim:
        raise UsageError(f"class has {len(v)} coordinates, cone lives in dimension {cone.ambient_dim}")
    res = membership(v, cone)
    doc = res.to_json()
    doc["verified"] = res.verify(v, cone)
    _emit(canonical_json(doc), args.out)
    return 0


def _cmd_selfint(args) -> int:
    doc = _load_json(args.classfile)
    try:
        cls = GradedClass.from_json(doc) if "space" in doc and "coords" in doc and isinstance(doc["coords"], dict) \
            else from_signed(SpaceSignature.from_json(doc["space"]), 1, doc["coords"])
        value = self_intersection(cls)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"unrecognised divisor file: {exc}") from None
    _emit(canonical_json({"class": str(cls), "space": str(cls.space), "selfIntersection": _jsonable(value)}), args.out)
    return 0


def _cmd_schubert(args) -> int:
    a, n = args.grassmannian
    try:
        e = sch.parse_expression(args.expr, a, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [f"G({a},{n}): {e}", f"degree: {e.evaluate()}"]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclecones", description="Exact cones of cycles on blowups of P^n.")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", help="write the report to this file instead of stdout")

    t = sub.add_parser("table", help="recompute one table and diff it against its fixture")
    t.add_argument("table_id", metavar="TABLE_ID")
    t.add_argument("--format", choices=FORMATS, default="markdown")
    t.add_argument("--expand-orbits", action="store_true", help="list every ray instead of orbit representatives")
    out(t)
    t.set_defaults(func=_cmd_table)

    a = sub.add_parser("all", help="run every table and print the verdict grids")
    a.add_argument("--format", choices=("text", "json"), default="text")
    out(a)
    a.set_defaults(func=_cmd_all)

    d = sub.add_parser("dual", help="dual cone of a cone file")
    d.add_argument("conefile")
    out(d)
    d.set_defaults(func=_cmd_dual)

    m = sub.add_parser("member", help="Farkas membership test with certificate")
    m.add_argument("classfile")
    m.add_argument("conefile")
    out(m)
    m.set_defaults(func=_cmd_member)

    s = sub.add_parser("selfint", help="top self-intersection of a divisor class")
    s.add_argument("classfile")
    out(s)
    s.set_defaults(func=_cmd_selfint)

    g = sub.add_parser("schubert", help="evaluate a Schubert expression, e.g. 's{2}*s{1}^4'")
    g.add_argument("expr")
    g.add_argument("--grassmannian", "-G", nargs=2, type=int, metavar=("A", "N"), required=True,
                   help="work on G(A, N), the A-planes in P^N")
    out(g)
    g.set_defaults(func=_cmd_schubert)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"cyclecones: error: {exc}\n")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
