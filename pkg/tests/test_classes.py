import pytest

from cyclecones.classes import (
    ConstraintError,
    IncidenceProfile,
    LabeledClass,
    WITNESS_NAMES,
    divisor_with_multiplicities,
    exceptional_line_cycle,
    exceptional_point_cycle,
    feasible_profile,
    feasible_quadric_profile,
    generators_from_json,
    generators_to_json,
    linear_cone_generators,
    proper_transform_linear,
    proper_transform_quadric,
    witness,
)
from cyclecones.ring import GradedClass, SpaceSignature, pair, to_signed


def signed(cls):
    return [int(x) for x in to_signed(cls).coords]


def prof(space, d, c=(), t=(), p=()):
    return IncidenceProfile(space, d, frozenset(c), frozenset(t), frozenset(p))


X44 = SpaceSignature(4, 4)
X55 = SpaceSignature(5, 5)
X423 = SpaceSignature(4, 2, 3)


def test_plane_classes_in_p4():
    assert signed(proper_transform_linear(prof(X44, 2))) == [1, 0, 0, 0, 0, 0, 0, 0, 0]
    assert signed(proper_transform_linear(prof(X44, 2, t=(1, 2, 3, 4)))) == [1, -1, -1, -1, -1, 0, 0, 0, 0]
    assert signed(proper_transform_linear(prof(X44, 2, c=(1,), t=(4,)))) == [1, -2, 0, 0, -1, -1, 0, 0, 0]


def test_threefold_and_quadric_in_p5():
    lam = proper_transform_linear(prof(X55, 3, c=(1,), t=(4, 5)))
    assert signed(lam) == [1, -2, 0, 0, -1, -1, -1, 0, 0, 0, 0]
    q = proper_transform_quadric(prof(X55, 3, c=(2, 3), t=(1, 4, 5)))
    assert signed(q) == [2, -1, -3, -3, -1, -1, 0, -1, -1, 0, 0]


def test_point_incidences():
    beta1 = proper_transform_linear(prof(X423, 2, t=(2,), p=(3,)))
    assert signed(beta1) == [1, 0, -1, 0, 0, 0, 0, -1]
    beta2 = proper_transform_quadric(prof(X423, 2, c=(1,), t=(2,), p=(1, 2)))
    assert signed(beta2) == [2, -3, -1, -1, 0, -1, -1, 0]


def test_divisor_transforms():
    sp = SpaceSignature(5, 3, 1)
    h = proper_transform_linear(prof(sp, 4, c=(1, 2), t=(3,), p=(1,)))
    assert h.as_dict() == {"H": 1, "E1": -1, "E2": -1, "e1": -1}


def test_feasibility_counts():
    # planes in P^4: containing a line costs 4, meeting one costs 1
    assert feasible_profile(prof(X44, 2, c=(1,), t=(2,))).expected_dim == 1
    assert feasible_profile(prof(X44, 2, t=(1, 2, 3, 4))).expected_dim == 2
    assert not feasible_profile(prof(X44, 2, c=(1, 2)))  # spans P^3
    # planes in P^5 containing a line and meeting two others do not exist
    f = feasible_profile(prof(X55, 2, c=(1,), t=(2, 3)))
    assert not f and f.expected_dim == -1


def test_infeasible_profile_raises():
    with pytest.raises(ConstraintError) as err:
        proper_transform_linear(prof(X55, 2, c=(1,), t=(2, 3)))
    assert err.value.expected_dim == -1


def test_quadric_feasibility():
    assert feasible_quadric_profile(prof(SpaceSignature(4, 5), 2, c=(1, 2), t=(3, 4, 5))).expected_dim == 0
    assert feasible_quadric_profile(prof(X55, 3, c=(2, 3), t=(1, 4, 5)))


def test_profile_validation():
    with pytest.raises(ValueError):
        prof(X44, 2, c=(1,), t=(1,))
    with pytest.raises(ValueError):
        prof(X44, 2, c=(7,))
    with pytest.raises(ValueError):
        prof(X44, 4)


def test_exceptional_cycles_pair_as_expected():
    sp = SpaceSignature(4, 1, 1)
    e1 = GradedClass.monomial(sp, "E1")
    h = GradedClass.monomial(sp, "H")
    fib = exceptional_line_cycle(sp, 1, "fiber", 1)  # a line in a fibre of E_1
    assert pair(e1, fib) == -1 and pair(h, fib) == 0
    pt_line = exceptional_point_cycle(sp, 1, 1)
    assert pair(GradedClass.monomial(sp, "e1"), pt_line) == -1
    assert signed(exceptional_line_cycle(SpaceSignature(5, 5), 1, "sweep", 2)) == [0, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0]


def test_exceptional_shape_guard():
    with pytest.raises(ValueError):
        exceptional_line_cycle(X44, 1, "diagonal", 2)


def test_linear_generators_x44():
    gens = linear_cone_generators(X44, 2)
    rows = {tuple(signed(g.cls)) for g in gens}
    assert (0, 1, 0, 0, 0, 0, 0, 0, 0) in rows
    assert (0, 1, 0, 0, 0, 1, 0, 0, 0) in rows
    assert (1, -2, -1, -1, 0, -1, 0, 0, 0) in rows
    assert len(rows) == len(gens)


def test_generator_json_roundtrip():
    sp = SpaceSignature(3, 1, 2)
    gens = linear_cone_generators(sp, 1)
    sp2, k, back = generators_from_json(generators_to_json(sp, 1, gens))
    assert (sp2, k) == (sp, 1) and back == gens
    assert LabeledClass.from_json(gens[0].to_json()) == gens[0]


def test_witnesses():
    assert set(WITNESS_NAMES) == {"segre-cubic-x54", "quadric-surface-x45", "cubic-divisor-x54"}
    q = witness("quadric-surface-x45")
    assert signed(q.cls) == [2, -3, -3, -1, -1, -1, -1, -1, 0, 0, 0]
    assert signed(witness("segre-cubic-x54").cls) == [3, -4, -4, -4, -4, -1, -1, -1, -1]
    assert witness("cubic-divisor-x54").cls.as_dict() == {"H": 3, "E1": -2, "E2": -2, "E3": -2, "E4": -1}
    with pytest.raises(KeyError):
        witness("nope")


def test_multiplicity_divisor():
    d = divisor_with_multiplicities(SpaceSignature(4, 2, 1), 2, {1: 1}, {1: 2})
    assert d.as_dict() == {"H": 2, "E1": -1, "e1": -2}
