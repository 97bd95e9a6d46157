"""Acceptance gate: ten criteria, all checked with exact arithmetic.

Each criterion is a function returning ``(ok, detail)``. Under pytest the
results are also collected and printed as one PASS/FAIL line apiece at
the end of the session; run this file directly to print just those lines.
"""

import itertools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE  # noqa: E402
from test_cone import brute_force_member  # noqa: E402

from cyclecones import linalg, schubert as sch  # noqa: E402
from cyclecones.classes import witness  # noqa: E402
from cyclecones.cone import (  # noqa: E402
    OrbitSpec,
    RayCone,
    dual_cone,
    membership,
    orbit_compress,
    orbit_expand,
    same_cone,
)
from cyclecones.fixture import load_fixture  # noqa: E402
from cyclecones.ring import (  # noqa: E402
    GradedClass,
    SpaceSignature,
    canonical_basis,
    multiply,
    pairing_matrix,
    power,
    self_intersection,
)
from cyclecones.tables import (  # noqa: E402
    KNOWN,
    MATCH,
    _recipe_cone,
    linear_cone,
    linear_dual,
    orbit_spec,
    run_table,
    signed,
)


def _top(space, key, a, b):
    out = power(GradedClass.monomial(space, "H"), a) if a else GradedClass.monomial(space, "1")
    if b:
        out = multiply(out, power(GradedClass.monomial(space, key), b))
    return out.coords[0]


def criterion_1():
    bad = []
    for n in (3, 4, 5, 6):
        sp = SpaceSignature(n, 1, 1)
        got = (_top(sp, "H", n, 0), _top(sp, "E1", 0, n), _top(sp, "e1", 0, n), _top(sp, "E1", 1, n - 1))
        want = (1, (-1) ** n * (n - 1), (-1) ** (n - 1), (-1) ** n)
        if got != want:
            bad.append(f"n={n}: {got} != {want}")
    for tid in ("int-matrix-3", "int-matrix-4", "int-matrix-5"):
        rep = run_table(tid)
        if rep.status != MATCH:
            bad.append(f"{tid}: {rep.status}")
    return not bad, "; ".join(bad) or "top numbers n=3..6 and pairing matrices for n=3,4,5 reproduced"


def criterion_2():
    singular, count = [], 0
    for n in range(3, 7):
        for r in range(6):
            for s in range(6):
                sp = SpaceSignature(n, r, s)
                for k in range(n + 1):
                    m = pairing_matrix(sp, k)
                    count += 1
                    if len(m) != len(m[0]) or linalg.rank(m, len(m[0])) != len(m):
                        singular.append((n, r, s, k))
    return not singular, f"{count} pairing matrices, {len(singular)} singular {singular[:3]}"


def _dual_orbit_check(tid):
    fx = load_fixture(tid)
    spec = orbit_spec(fx.space, fx.degree)
    got = set(orbit_compress(linear_dual(fx.space, fx.raw["cycleDim"]).rays, spec))
    want = {spec.canonical(r.coords) for r in fx.coordinate_rows()}
    return got == want, len(got), len(want)


def criterion_3():
    parts, ok = [], True
    fx = load_fixture("lin2-x44")
    spec = orbit_spec(fx.space, fx.degree)
    rays = orbit_expand([r.coords for r in fx.coordinate_rows()], spec)
    dual = dual_cone(RayCone(len(rays[0]), tuple(rays), None, pairing_matrix(fx.space, 2, signed=True)))
    table = load_fixture("dual2-x44")
    want = {spec.canonical(r.coords) for r in table.coordinate_rows()}
    got = set(orbit_compress(dual.rays, spec))
    ok &= got == want and len(got) == 10
    parts.append(f"X^4_4 from fixture: {len(got)} orbits {'==' if got == want else '!='} table")
    for tid, n_expected in (("appendix-x322", 6), ("appendix-x331", 5), ("appendix-x423", 10)):
        same, n_got, n_want = _dual_orbit_check(tid)
        good = same and n_got == n_expected
        ok &= good
        parts.append(f"{tid}: {n_got} computed vs {n_want} tabulated{'' if good else ' MISMATCH'}")
    return ok, "; ".join(parts)


def criterion_4():
    parts, ok = [], True
    for tid in ("decomp-lambda", "decomp-xi", "decomp-delta", "decomp-alpha8", "decomp-alpha9"):
        fx = load_fixture(tid)
        target_fx = load_fixture(fx.raw["target"]["ref"])
        target = target_fx.row(fx.raw["target"]["label"])["coords"]
        total = [sum(col) for col in zip(*(r.coords for r in fx.coordinate_rows()))]
        rep = run_table(tid)
        parts_ok = all(r.status == MATCH for r in rep.rows if r.label != fx.raw["target"]["label"])
        good = list(target) == total and parts_ok
        ok &= good
        parts.append(f"{fx.raw['target']['label']}: {'holds' if good else f'{list(target)} != sum {total}'}")
    return ok, "; ".join(parts)


def criterion_5():
    parts, ok = [], True
    for name in ("quadric-surface-x45", "segre-cubic-x54", "cubic-divisor-x54"):
        w = witness(name)
        cone, _ = linear_cone(w.cls.space, w.cycle_dim)
        v = signed(w.cls)
        res = membership(v, cone)
        good = not res.inside and res.verify(v, cone)
        ok &= good
        parts.append(f"{name}: {'outside, separator verified' if good else 'FAILED'}")
    return ok, "; ".join(parts)


def criterion_6():
    bad = []
    for r in range(11):
        sp = SpaceSignature(4, r)
        v = self_intersection(GradedClass.from_dict(sp, 1, {"H": 3, **{f"E{i}": -1 for i in range(1, r + 1)}}))
        if v != 81 - 9 * r or (v < 0) != (r >= 10):
            bad.append(f"X^4_{r}: {v}")
    for r in range(7):
        sp = SpaceSignature(5, r)
        v = self_intersection(GradedClass.from_dict(sp, 1, {"H": 2, **{f"E{i}": -1 for i in range(1, r + 1)}}))
        if v != 32 - 6 * r or (v < 0) != (r >= 6):
            bad.append(f"X^5_{r}: {v}")
    sp = SpaceSignature(4, 5)
    v = self_intersection(GradedClass.from_dict(sp, 1, {"H": 5, **{f"E{i}": -2 for i in range(1, 6)}}))
    if v != 65:
        bad.append(f"anticanonical: {v}")
    sp = SpaceSignature(5, 5)
    eps = signed(power(GradedClass.from_dict(sp, 1, {"H": 2, **{f"E{i}": -1 for i in range(1, 6)}}), 2))
    if list(eps) != [4] + [-4] * 5 + [-1] * 5:
        bad.append(f"epsilon row: {eps}")
    return not bad, "; ".join(bad) or "81-9r, 32-6r, 65 and the epsilon row reproduced"


def criterion_7():
    maxinc = run_table("dual2-x55-maxinc")
    lin = run_table("lin2-x55")
    checks = {c.name: c for c in maxinc.checks}
    nonneg = all(checks[f"{g} nonnegative on derived generators"].ok for g in ("alpha", "beta", "gamma", "delta", "epsilon"))
    minus_one = checks["alpha paired with tabulated f_1+g_1"].ok
    reduce_exact = maxinc.status == MATCH and all(r.status == MATCH for r in maxinc.rows) and len(maxinc.rows) == 5
    known = lin.status == KNOWN and any(d["key"] == "row:row2" and d["certificateVerified"] for d in lin.diffs)
    ok = nonneg and minus_one and reduce_exact and known
    return ok, (f"alpha..epsilon nonnegative: {nonneg}; alpha.(f_1+g_1) = -1: {minus_one}; "
                f"lin2-x55 {lin.status}; reduce returns exactly alpha..epsilon: {reduce_exact}")


def criterion_8():
    got = {
        "s1^4 on G(1,3)": sch.parse_expression("s{1}^4", 1, 3).evaluate() == 2,
        "s2 s1^4 on G(2,4)": sch.parse_expression("s{2}*s{1}^4", 2, 4).evaluate() == 2,
        "deg G(2,4)": sch.grassmannian_degree(2, 4) == 5,
        "point cycle n=4": sch.schubert_degree((2,), 2, 4) < sch.grassmannian_degree(2, 4),
        "point cycle n=5": sch.schubert_degree((2,), 3, 5) < sch.grassmannian_degree(3, 5),
        "Lambda_v(2,4,5)": sch.vertex_locus_dimension(2, 4, 5) == 2,
        "discrepancy report": not sch.consistency_report().consistent,
    }
    bad = [k for k, v in got.items() if not v]
    return not bad, "failed: " + ", ".join(bad) if bad else "all Schubert anchors reproduced"


def criterion_9():
    parts, ok, literal = [], True, {}
    for tid in ("curves-p4", "curves-p5"):
        fx = load_fixture(tid)
        n, (lo, hi), top, m = fx.raw["n"], fx.raw["rRange"], fx.raw["dualTop"], fx.raw["incidence"]
        fails = []
        for r in range(lo, hi + 1):
            space = SpaceSignature(n, r)
            cone, _ = linear_cone(space, 1)
            basis = canonical_basis(space, n - 1)
            gens = [tuple(int(b.index == i) for b in basis) for i in range(1, r + 1)]
            for S in itertools.combinations(range(1, r + 1), min(m, r)):
                gens.append(tuple(1 if k == 0 else -int(basis[k].index in S) for k in range(len(basis))))
            generated = same_cone(RayCone(cone.ambient_dim, tuple(gens)), cone)
            dual = linear_dual(space, 1)
            closed = same_cone(_recipe_cone(r, top, True), dual)
            if not same_cone(_recipe_cone(r, top, False), dual):
                fails.append(r)
            ok &= generated and closed
            if not (generated and closed):
                parts.append(f"{tid} r={r}: generated={generated} dual={closed}")
        literal[tid] = fails
        parts.append(f"{tid} r={lo}..{hi} generated, dual spanned by H, H-E_i, {top}H-sum_I E_i")
    parts.append("full-sum-only reading fails at " + ", ".join(f"{t} r={v}" for t, v in literal.items()))
    return ok, "; ".join(parts)


def criterion_10(seed=20261017):
    rng = random.Random(seed)
    fails = []

    def rand_cone(max_dim, max_rays, e):
        d = rng.randint(1, max_dim)
        return RayCone(d, tuple(tuple(rng.randint(-e, e) for _ in range(d)) for _ in range(rng.randint(1, max_rays))))

    for _ in range(100):
        c = rand_cone(8, 14, 3)
        if not same_cone(dual_cone(dual_cone(c)), c):
            fails.append(f"dual-dual {c.rays}")
    for _ in range(150):
        c = rand_cone(4, 7, 2)
        v = tuple(rng.randint(-3, 3) for _ in range(c.ambient_dim))
        res = membership(v, c)
        gens = list(c.rays) + [g for ln in c.lineality for g in (ln, tuple(-x for x in ln))]
        if not (res.verify(v, c) and res.inside == c.contains(v) == brute_force_member(v, gens)):
            fails.append(f"membership {v} in {c.rays}")
        if not res.inside:
            w = res.separator
            if sum(a * b for a, b in zip(w, v)) >= 0 or any(sum(a * b for a, b in zip(w, g)) < 0 for g in c.rays):
                fails.append(f"separator {w}")
    spec = OrbitSpec(7, ((1, 2), (3, 4), (5, 6)))
    for _ in range(50):
        vs = [tuple(rng.randint(-2, 2) for _ in range(7)) for _ in range(rng.randint(1, 6))]
        full = set().union(*(spec.orbit(v) for v in vs))
        reps = orbit_compress(vs, spec)
        if set(orbit_expand(reps, spec)) != full or orbit_compress(orbit_expand(reps, spec), spec) != reps:
            fails.append(f"orbit {vs}")
    for _ in range(200):
        sp = SpaceSignature(rng.randint(3, 6), rng.randint(0, 3), rng.randint(0, 3))
        xs = []
        for _ in range(3):
            k = rng.randint(0, sp.n)
            xs.append(GradedClass(sp, k, tuple(rng.randint(-5, 5) for _ in canonical_basis(sp, k))))
        a, b, c = xs
        if a * b != b * a or (a * b) * c != a * (b * c):
            fails.append(f"ring {sp}")
    return not fails, f"seed {seed}: {len(fails)} failures {fails[:2]}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = CRITERIA[number]()
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
