from __future__ import annotations

import itertools
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from genusbound import lpsolve
from genusbound.errors import InvalidCertificate, UnboundedSystem
from genusbound.lpsolve import (INFEASIBLE, OPTIMAL, UNBOUNDED, auto_degree, enumerate_decompositions,
                                enumerate_points, ilp_maximize, lp_maximize, verify_certificate)
from genusbound.places import LinearSystem, inequality_system
from genusbound.weil import make_elliptic_class

from conftest import elliptic_system


def system(A, b, dims):
    A = tuple(tuple(Fraction(x) for x in row) for row in A)
    return LinearSystem(0, tuple(f"x{j}" for j in range(len(dims))), len(b), A,
                        tuple(Fraction(x) for x in b), tuple(dims))


@st.composite
def bounded_systems(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    A = [draw(st.lists(st.integers(-4, 6), min_size=n, max_size=n)) for _ in range(m)]
    b = draw(st.lists(st.integers(-3, 20), min_size=m, max_size=m))
    A.append([1] * n)          # keeps the feasible region bounded
    b.append(draw(st.integers(0, 12)))
    dims = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    return system(A, b, dims)


def test_lp_f2(f2_system):
    res = lp_maximize(f2_system)
    assert res.status == OPTIMAL and res.value == 26
    assert verify_certificate(f2_system, res.dual).genus_cap == 26


def test_lp_f2_degree7(f2_system):
    assert lp_maximize(f2_system.truncated(7)).status == UNBOUNDED


def test_lp_f3(f3_system):
    assert lp_maximize(f3_system).value == 2091


def test_paper_multipliers(f2_system):
    cert = verify_certificate(f2_system, [0, 0, 39, 44, 0, 78, 0, 32])
    assert cert.combined == (72,) * 5 and cert.rhs == 1872 and cert.scale == 72
    assert cert.genus_cap == 26
    out = cert.to_json()
    assert out["multipliers"] == ["0", "0", "39", "44", "0", "78", "0", "32"]
    assert out["rhs"] == "1872" and out["genus_cap"] == 26


def test_certificate_errors(f2_system):
    with pytest.raises(InvalidCertificate, match="does not dominate"):
        verify_certificate(f2_system, [0] * 8)
    with pytest.raises(InvalidCertificate, match="negative multiplier"):
        verify_certificate(f2_system, [0, 0, 39, 44, 0, 78, -1, 32])
    with pytest.raises(InvalidCertificate):
        verify_certificate(f2_system, [1, 2])


@given(bounded_systems())
def test_lp_matches_scipy(sys):
    res = lp_maximize(sys)
    ref = linprog([-d for d in sys.dims], A_ub=[[float(x) for x in r] for r in sys.A],
                  b_ub=[float(x) for x in sys.b], bounds=[(0, None)] * sys.n_cols,
                  method="highs")
    if ref.status == 2:
        assert res.status == INFEASIBLE
    else:
        assert res.status == OPTIMAL
        assert abs(float(res.value) + ref.fun) < 1e-6
        # strong duality and certificate
        assert sum(y * bi for y, bi in zip(res.dual, sys.b)) == res.value
        if res.value > 0:
            cert = verify_certificate(sys, res.dual)
            assert cert.genus_cap == int(res.value // 1)


def brute_force_max(sys, limit):
    best = None
    for e in itertools.product(range(limit + 1), repeat=sys.n_cols):
        if sys.is_feasible(e):
            v = sum(d * x for d, x in zip(sys.dims, e))
            best = v if best is None else max(best, v)
    return best


@given(bounded_systems())
def test_ilp_matches_brute_force(sys):
    limit = int(sys.b[-1])
    expected = brute_force_max(sys, limit)
    res = ilp_maximize(sys)
    if expected is None:
        assert res.status == INFEASIBLE
    else:
        assert res.status == OPTIMAL and res.value == expected
        assert sys.is_feasible(res.primal)
        assert lp_maximize(sys).value >= res.value


def test_bland_terminates_on_beale_cycling_example():
    # the classical example on which the largest-coefficient rule cycles
    A = [[Fraction(1, 4), -8, -1, 9], [Fraction(1, 2), -12, Fraction(-1, 2), 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    res = lpsolve._solve(A, b, [3, -80, 2, -24])     # 4 x (3/4, -20, 1/2, -6)
    assert res.status == OPTIMAL and res.value == 5
    assert res.primal == (1, 0, 1, 0)


def test_phase_one_with_negative_rhs():
    sys = system([[-1, -1], [1, 0], [0, 1]], [-3, 2, 2], [1, 1])
    res = lp_maximize(sys)
    assert res.value == 4
    sys = system([[-1, -1], [1, 1]], [-3, 2], [1, 1])
    assert lp_maximize(sys).status == INFEASIBLE


def test_ilp_f2(f2_system):
    res = ilp_maximize(f2_system)
    assert res.value == 26 and f2_system.is_feasible(res.primal)


def test_ilp_unbounded_raises(f2_system):
    with pytest.raises(UnboundedSystem, match="increase D"):
        ilp_maximize(f2_system.truncated(7))


@pytest.mark.slow
def test_ilp_f3(f3_system):
    t0 = time.perf_counter()
    res = ilp_maximize(f3_system)
    assert res.value == 2085
    assert time.perf_counter() - t0 < 30
    assert f3_system.is_feasible(res.primal)


@pytest.mark.parametrize("q,traces,cap", [(2, (-1, 1), 3), (3, (-2, -1, 1, 2), 26)])
def test_ordinary_auto_degree(q, traces, cap):
    classes = [make_elliptic_class(q, t) for t in traces]
    sys, lp = auto_degree(lambda D: inequality_system(q, classes, D), 12)
    assert lp.status == OPTIMAL
    assert lp_maximize(sys.truncated(sys.D - 1)).status == UNBOUNDED
    assert ilp_maximize(sys).value == cap


def test_auto_degree_gives_up():
    with pytest.raises(UnboundedSystem):
        auto_degree(lambda D: elliptic_system(2, range(-2, 3), D), 7)


def test_enumeration_f2(f2_system):
    assert enumerate_points(f2_system, 26) == [(4, 7, 5, 3, 7), (5, 6, 5, 4, 6), (6, 5, 5, 5, 5)]
    assert enumerate_points(f2_system, 27) == []
    assert enumerate_points(f2_system, 0) == [(0, 0, 0, 0, 0)]
    decs = enumerate_decompositions(f2_system, 26)
    assert decs[0].render() == "E_{-2}^4 × E_{-1}^7 × E_0^5 × E_1^3 × E_2^7"


def test_enumeration_parallel_matches_serial(f2_system):
    assert enumerate_points(f2_system, 24, jobs=3) == enumerate_points(f2_system, 24)


def test_enumeration_brackets_ilp(f2_system):
    ilp = ilp_maximize(f2_system).value
    assert enumerate_points(f2_system, int(ilp))
    assert not enumerate_points(f2_system, int(ilp) + 1)


def brute_force_points(sys, g):
    out = []
    for e in itertools.product(*(range(g // d + 1) for d in sys.dims)):
        if sum(d * x for d, x in zip(sys.dims, e)) == g and sys.is_feasible(e):
            out.append(e)
    return sorted(out)


@given(bounded_systems(), st.integers(0, 10))
def test_enumeration_matches_brute_force(sys, g):
    assert enumerate_points(sys, g) == brute_force_points(sys, g)


@pytest.mark.parametrize("g", range(0, 11))
def test_enumeration_f2_small_genus_brute_force(f2_system, g):
    assert enumerate_points(f2_system, g) == brute_force_points(f2_system, g)


def test_lp_result_json(f2_system):
    out = lp_maximize(f2_system).to_json()
    assert out["status"] == "optimal" and out["value"] == "26" and out["D"] == 8
