from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclecones.schubert import (
    SchubertExpression,
    consistency_report,
    expected_codim,
    expected_codim_vertex,
    grassmannian_degree,
    incidence_codim,
    parse_expression,
    pieri,
    schubert_degree,
    vertex_locus_dimension,
)


def plucker_degree(k, m):
    """Degree of Gr(k, m) from the hook length formula."""
    kk = k * (m - k)
    return factorial(kk) * prod(factorial(i) for i in range(k)) // prod(factorial(m - k + i) for i in range(k))


def test_lines_meeting_four_lines():
    assert parse_expression("s{1}^4", 1, 3).evaluate() == 2
    assert str(parse_expression("σ{1}^4", 1, 3)) == "2σ{2,2}"


def test_planes_through_a_point_in_p4():
    assert parse_expression("s{2}*s{1}^4", 2, 4).evaluate() == 2


def test_degrees():
    assert grassmannian_degree(2, 4) == 5
    assert schubert_degree((2,), 2, 4) == 2
    assert grassmannian_degree(3, 5) == 14
    assert schubert_degree((2,), 3, 5) == 5


@pytest.mark.parametrize("a,n", [(a, n) for n in range(1, 8) for a in range(0, n)])
def test_grassmannian_degree_hook_length(a, n):
    assert grassmannian_degree(a, n) == plucker_degree(a + 1, n + 1)


def test_pieri_rule():
    one = SchubertExpression.single(1, 3, (1,))
    assert str(pieri(one, 1)) == "σ{2} + σ{1,1}"
    assert pieri(SchubertExpression.single(1, 3, (2,)), 1).terms == {(2, 1): 1}
    assert pieri(SchubertExpression.single(1, 3, (2, 2)), 1).is_zero()
    with pytest.raises(ValueError):
        pieri(one, 0)


def test_expression_validation():
    with pytest.raises(ValueError):
        SchubertExpression.single(1, 3, (3,))
    with pytest.raises(ValueError):
        SchubertExpression.single(1, 3, (1, 2))
    with pytest.raises(ValueError):
        SchubertExpression(1, 3) + SchubertExpression(2, 4)
    with pytest.raises(ValueError):
        parse_expression("s{1,1}*s{2,1}", 2, 5)
    with pytest.raises(ValueError):
        parse_expression("t{1}", 1, 3)


def test_parse_sums_and_coefficients():
    e = parse_expression("σ{2,1} + 2σ{1,1,1}", 2, 4)
    assert e.terms == {(2, 1): 1, (1, 1, 1): 2}
    assert parse_expression("3", 1, 3).terms == {(): 3}


@given(st.integers(1, 3), st.integers(1, 3))
def test_special_classes_commute(p, q):
    a, n = 2, 5
    x = SchubertExpression.single(a, n, (p,))
    y = SchubertExpression.single(a, n, (q,))
    assert x * y == y * x


def test_incidence_codimensions():
    for n in (4, 5):
        assert incidence_codim("containsPoint", n - 2, n) == 2
        assert n * incidence_codim("meetsLine", n - 2, n) == n
    assert incidence_codim("containsLine", 2, 4) == 4
    with pytest.raises(ValueError):
        incidence_codim("touches", 2, 4)


def test_expected_codim_readings():
    assert expected_codim(0, 1, 5) == 3
    assert expected_codim(2, 4, 5, "literal") == 21
    assert expected_codim(2, 4, 5, "corrected") == 15
    assert expected_codim_vertex(2, 4, 5, "corrected", "stated") == 17
    assert expected_codim_vertex(2, 4, 5, "corrected", "worked") == 18
    assert vertex_locus_dimension(2, 4, 5) == 2
    with pytest.raises(ValueError):
        expected_codim(2, 4, 5, "other")


def test_consistency_report_flags_vertex_term():
    rep = consistency_report()
    assert not rep.consistent
    assert rep.to_json()["dimWorked"] == 2 and rep.to_json()["dimStated"] == 3
    assert any("DISAGREE" in line for line in rep.lines())
