import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclecones.cone import (
    ConeError,
    OrbitSpec,
    RayCone,
    ShiftOrder,
    decomposition_check,
    double_description,
    dual_cone,
    extreme_rays,
    maximally_incident_reduce,
    membership,
    orbit_compress,
    orbit_expand,
    primitive,
    same_cone,
    shift_certificate,
    shift_reachable,
)
from cyclecones.ring import SpaceSignature, canonical_basis


# -- independent oracle: Caratheodory over all independent subsets --------------


def _solve_exact(cols, v):
    """Solve sum(x_i cols_i) = v exactly; None if inconsistent."""
    d, k = len(v), len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(d)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, d) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][-1] for i in range(r, d)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][-1]
    return x


def brute_force_member(v, gens):
    if not any(v):
        return True
    d = len(v)
    for size in range(1, min(d, len(gens)) + 1):
        for sub in itertools.combinations(gens, size):
            x = _solve_exact(sub, v)
            if x is not None and all(t >= 0 for t in x):
                return True
    return False


# -- strategies ---------------------------------------------------------------------


@st.composite
def cones(draw, max_dim=8, max_rays=14, entries=3):
    d = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_rays))
    rays = draw(st.lists(st.lists(st.integers(-entries, entries), min_size=d, max_size=d), min_size=m, max_size=m))
    return RayCone(d, tuple(tuple(r) for r in rays))


@st.composite
def cone_and_vector(draw):
    c = draw(cones(max_dim=4, max_rays=7, entries=2))
    v = draw(st.lists(st.integers(-3, 3), min_size=c.ambient_dim, max_size=c.ambient_dim))
    return c, tuple(v)


# -- basic behaviour ------------------------------------------------------------------


def test_primitive():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((-4, 6), oriented=True) == (2, -3)


def test_cube_cone():
    # cone over a square: 4 rays, 4 facets
    rays = [(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)]
    facets, lin = double_description(rays, 3)
    assert lin == []
    assert sorted(facets) == sorted([(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])


def test_half_space_has_lineality():
    rays, lin = double_description([(1, 0, 0)], 3)
    assert rays == [(1, 0, 0)]
    assert len(lin) == 2


def test_dual_of_orthant_is_orthant():
    c = RayCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert sorted(dual_cone(c).rays) == sorted(c.rays)


def test_pairing_dual():
    # pairing x^T M y with M swapping coordinates
    c = RayCone(2, ((1, 0), (1, 1)), None, ((0, 1), (1, 0)))
    dual = dual_cone(c)
    for x in dual.rays:
        for g in c.rays:
            assert x[1] * g[0] + x[0] * g[1] >= 0
    assert dual.pairing == ((0, 1), (1, 0))


def test_facets_are_validated():
    with pytest.raises(ConeError):
        RayCone(2, ((1, 0), (0, 1)), facets=((1, -1),))
    with pytest.raises(ConeError):
        RayCone(2, ((1, 0, 0),))


def test_membership_certificates():
    c = RayCone(2, ((1, 0), (1, 2)))
    inside = membership((3, 2), c)
    assert inside and inside.verify((3, 2), c)
    outside = membership((0, 1), c)
    assert not outside and outside.verify((0, 1), c)
    with pytest.raises(ConeError):
        membership((1, 2, 3), c)


def test_extreme_rays_drop_redundant():
    c = RayCone(2, ((1, 0), (0, 1), (1, 1), (2, 1)))
    assert sorted(extreme_rays(c).rays) == [(0, 1), (1, 0)]


def test_json_roundtrip():
    c = RayCone(2, ((1, 0), (1, 2)), None, ((Fraction(1, 2), 0), (0, 1)), ()).with_facets()
    assert RayCone.from_json(c.to_json()) == c


# -- orbits ---------------------------------------------------------------------------


def test_orbit_spec_from_basis():
    spec = OrbitSpec.for_basis(canonical_basis(SpaceSignature(4, 4), 2))
    assert spec.line_blocks == ((1, 5), (2, 6), (3, 7), (4, 8))
    reps = orbit_compress([(1, -2, 0, 0, 0, -1, 0, 0, 0)], spec)
    assert len(orbit_expand(reps, spec)) == 4


def test_malformed_block_spec():
    with pytest.raises(ValueError, match="malformed block spec"):
        OrbitSpec(4, ((0, 1), (1, 2)))
    with pytest.raises(ValueError, match="malformed block spec"):
        OrbitSpec(4, ((0, 1), (2,)))


@given(st.lists(st.lists(st.integers(-2, 2), min_size=7, max_size=7), min_size=1, max_size=6))
def test_orbit_roundtrip(vectors):
    # 3 lines with 2 coordinates each, interleaved (not the sortable layout)
    spec = OrbitSpec(7, ((1, 2), (3, 4), (5, 6)))
    fast = OrbitSpec(7, ((1, 4), (2, 5), (3, 6)))
    full = set()
    for v in vectors:
        full |= spec.orbit(v)
    reps = orbit_compress(vectors, spec)
    assert set(orbit_expand(reps, spec)) == full
    assert orbit_compress(orbit_expand(reps, spec), spec) == reps
    for v in vectors:
        assert fast.canonical(v) == min(fast.orbit(v))


# -- shift order ----------------------------------------------------------------------


def test_maximally_incident_reduce():
    shifts = [(0, 1, 0), (0, 0, 1)]
    rays = [(1, 0, 0), (1, 1, 0), (1, 2, 3), (2, 0, 0)]
    assert maximally_incident_reduce(rays, shifts) == [(1, 0, 0), (2, 0, 0)]
    assert shift_reachable((1, 2, 3), (1, 0, 0), shifts)
    assert not shift_reachable((1, 0, 0), (1, 2, 3), shifts)
    with pytest.raises(ValueError):
        ShiftOrder([(1, 0), (2, 0)], 2)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=2, max_size=8))
def test_shift_order_matches_exact_solve(vectors):
    shifts = [(1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 2, 1)]
    order = ShiftOrder(shifts, 4)
    for v, w in itertools.product(vectors, repeat=2):
        diff = [a - b for a, b in zip(v, w)]
        x = _solve_exact(shifts, diff)
        want = x is not None and all(t >= 0 and t.denominator == 1 for t in x)
        assert order.below(w, v) == want


def test_decomposition_and_shift_certificate():
    assert decomposition_check((3, -2), [(1, -1), (2, -1)])
    bad = decomposition_check((3, -2), [(1, -1), (2, 0)])
    assert not bad and bad.residual == (0, -1)
    dual = RayCone(2, ((1, 0), (0, 1)))
    assert shift_certificate((2, 1), (1, 1), [(1, 0)], dual)
    assert not shift_certificate((1, 2), (1, 1), [(1, 0)], dual)


# -- property suites ------------------------------------------------------------------


@settings(max_examples=100)
@given(cones())
def test_dual_dual_is_identity(c):
    assert same_cone(dual_cone(dual_cone(c)), c)


@settings(max_examples=60)
@given(cones(max_dim=6, max_rays=10))
def test_extreme_rays_span_same_cone(c):
    e = extreme_rays(c)
    assert same_cone(e, c)
    assert len(e.rays) <= len(c.rays)


@settings(max_examples=150)
@given(cone_and_vector())
def test_membership_facet_and_oracle_agree(cv):
    c, v = cv
    res = membership(v, c)
    assert res.verify(v, c)
    gens = list(c.rays) + [g for l in c.lineality for g in (l, tuple(-x for x in l))]
    assert res.inside == c.contains(v) == brute_force_member(v, gens)


@settings(max_examples=60)
@given(cone_and_vector())
def test_separator_substitution(cv):
    c, v = cv
    res = membership(v, c)
    if not res.inside:
        w = res.separator
        assert sum(a * b for a, b in zip(w, v)) < 0
        assert all(sum(a * b for a, b in zip(w, g)) >= 0 for g in c.rays)
