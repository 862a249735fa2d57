from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgraph.regular import (
    RegularVertex,
    adjacency,
    check_identity,
    check_pair,
    compute_Cn,
    det_sum,
    embed,
    in_alternative_form,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=20)


def test_embed_examples():
    assert embed(0, 0) == RegularVertex(1, 0, 0, 1)
    v = embed(1, 1)
    assert v.rows() == ((-3, -2), (2, 1)) and v.det == 1


def test_det_sum_examples():
    assert det_sum((0, 0), (1, 1)) == 0
    assert det_sum((0, 0), (1, 2)) == -4


def test_adjacency_examples():
    assert adjacency(0, 0, 1, 1)
    assert adjacency(0, 0, 2, Fraction(1, 2))
    assert not adjacency(0, 0, 1, 2)


def test_compute_Cn():
    assert [compute_Cn(n) for n in (1, 2, 3)] == [2, 7, 34]
    values = [compute_Cn(n) for n in range(1, 12)]
    assert all(a < b for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        compute_Cn(0)


@given(small, small, small, small)
def test_embedding_properties(x1, y1, x2, y2):
    rec = check_pair(x1, y1, x2, y2)
    assert rec["ok"]
    assert in_alternative_form(embed(x1, y1))
    if (x1, y1) != (x2, y2):
        assert embed(x1, y1) != embed(x2, y2)


def test_check_identity_report():
    rep = check_identity(2000, seed=4)
    assert rep.failures == 0 and rep.samples == 2000
    # every fourth quadruple is an edge by construction
    assert rep.adjacent_pairs >= 500
    assert set(rep.to_json(1)["records"][0]) == {"x1", "y1", "x2", "y2", "det", "adjacent", "ok"}
    assert check_identity(50, seed=4).to_json() == check_identity(50, seed=4).to_json()
