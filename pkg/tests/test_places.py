from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius as sympy_mobius

from genusbound.errors import InconsistentFieldSize
from genusbound.places import LinearSystem, inequality_system, mobius, mobius_sum, place_counts
from genusbound.weil import (DecompositionVector, admissible_elliptic_traces,
                             make_elliptic_class, make_weil_class, point_count)

from conftest import elliptic_system

PLACES8_A = [
    [-2, -1, 0, 1, 2],
    [1, -1, -2, -2, -1],
    [2, 2, 0, -2, -2],
    [-2, 1, 3, 1, -2],
    [2, -2, 0, 2, -2],
    [-1, 1, -2, 3, 1],
    [-2, 2, 0, -2, 2],
    [5, -4, 3, -4, 5],
]
PLACES8_B = [3, 1, 2, 3, 6, 9, 18, 30]


@st.composite
def decompositions(draw):
    q = draw(st.sampled_from([2, 3, 4, 5, 7]))
    traces = draw(st.lists(st.sampled_from(admissible_elliptic_traces(q)),
                           min_size=1, max_size=4, unique=True))
    e = draw(st.lists(st.integers(0, 6), min_size=len(traces), max_size=len(traces)))
    return DecompositionVector(tuple(make_elliptic_class(q, t) for t in traces), tuple(e))


@pytest.mark.parametrize("n", range(1, 60))
def test_mobius_matches_sympy(n):
    assert mobius(n) == int(sympy_mobius(n))


def test_places8_table(f2_system):
    assert [[int(x) for x in row] for row in f2_system.A] == PLACES8_A
    assert [int(x) for x in f2_system.b] == PLACES8_B
    assert f2_system.labels == ("t=-2", "t=-1", "t=0", "t=1", "t=2")


def test_place_counts_examples():
    dec = DecompositionVector((make_elliptic_class(2, 1),), (1,))
    assert place_counts(dec, 2).values == (2, 3)
    empty = DecompositionVector((), (), field_size=2)
    assert place_counts(empty, 3).values == (3, 1, 2)   # the projective line


@given(decompositions(), st.integers(1, 12))
def test_moebius_round_trip(dec, D):
    pc = place_counts(dec, D)
    for n in range(1, D + 1):
        assert sum(d * pc.values[d - 1] for d in divisors(n)) == point_count(dec, n)


@given(decompositions(), st.integers(1, 10))
def test_rows_reproduce_place_counts(dec, D):
    sys = inequality_system(dec.q, list(dec.classes), D)
    pc = place_counts(dec, D)
    for n in range(D):
        lhs = sum(a * x for a, x in zip(sys.A[n], dec.e))
        assert sys.b[n] - lhs == pc.values[n]


def test_mobius_sum_gauss():
    vals = [None] + [2 ** d + 1 for d in range(1, 13)]
    assert all(mobius_sum(vals, n).denominator == 1 for n in range(1, 13))


def test_general_class_system():
    c = make_weil_class(2, [1, 0, 3, 0, 4])
    sys = inequality_system(2, [c], 4)
    assert sys.dims == (2,)
    assert all(x.denominator == 1 for row in sys.A for x in row)


def test_inconsistent_field_size():
    with pytest.raises(InconsistentFieldSize):
        inequality_system(2, [make_elliptic_class(3, 0)], 4)


def test_linear_system_json_round_trip(f2_system):
    text = json.dumps(f2_system.to_json())
    back = LinearSystem.from_json(json.loads(text))
    assert back == f2_system
    assert back.classes == f2_system.classes


def test_linear_system_json_accepts_plain_integers():
    obj = {"q": 2, "labels": ["a", "b"], "D": 1, "A": [[1, "1/2"]], "b": [3], "dims": [1, 1]}
    sys = LinearSystem.from_json(obj)
    assert sys.A == ((1, Fraction(1, 2)),) and sys.classes == ()


def test_truncation_and_feasibility(f2_system):
    sys7 = f2_system.truncated(7)
    assert sys7.n_rows == 7
    assert sys7.is_feasible((50, 0, 0, 0, 50))
    assert not f2_system.is_feasible((50, 0, 0, 0, 50))
    assert not f2_system.is_feasible((-1, 0, 0, 0, 0))
