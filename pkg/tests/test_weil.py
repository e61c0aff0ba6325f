from __future__ import annotations

import random

import mpmath
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from genusbound import oracles
from genusbound.errors import (InadmissibleTrace, InconsistentFieldSize, InvalidFieldSize,
                               InvalidWeilPolynomial, WeilBoundViolation)
from genusbound.weil import (DecompositionVector, admissible_elliptic_traces, angle_indices,
                             class_from_json, class_from_label, isolate_real_roots,
                             make_elliptic_class, make_weil_class, point_count, power_sums,
                             prime_power, product_class, validate)

from conftest import BACKENDS

FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9)
x = sp.symbols("x")


@st.composite
def product_classes(draw, max_d=3):
    q = draw(st.sampled_from(FIELD_SIZES))
    traces = admissible_elliptic_traces(q)
    ts = draw(st.lists(st.sampled_from(traces), min_size=1, max_size=max_d))
    return product_class([make_elliptic_class(q, t) for t in ts])


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12, 0):
        with pytest.raises(InvalidFieldSize):
            prime_power(bad)


def test_elliptic_power_sums():
    assert power_sums(make_elliptic_class(2, -2), 8).values == (-2, 0, 4, -8, 8, 0, -16, 32)
    assert power_sums(make_elliptic_class(2, 0), 2)[0] == 2


def test_general_power_sums_example():
    assert power_sums(make_weil_class(2, [1, 0, 3, 0, 4]), 2).values == (0, -6)


@given(product_classes())
def test_power_sums_match_sympy_roots(c):
    n = 2 * c.dim + 4   # past the degree, where the recurrence changes form
    roots = sp.Poly(list(c.coeffs), x).all_roots()
    for k in range(1, n + 1):
        ref = sum(r ** k for r in roots)
        assert power_sums(c, n)[k] == int(sp.N(ref, 60).round())


@given(product_classes())
def test_weil_magnitude(c):
    ps = power_sums(c, 30)
    for n in range(1, 31):
        assert ps[n] ** 2 <= 4 * c.dim ** 2 * c.q ** n


def test_admissible_traces_q2():
    assert admissible_elliptic_traces(2) == [-2, -1, 0, 1, 2]


@pytest.mark.parametrize("q", FIELD_SIZES)
@pytest.mark.parametrize("be", BACKENDS)
def test_admissible_traces_match_weierstrass(q, be):
    assert oracles.weierstrass_traces(q, be) == admissible_elliptic_traces(q)


def test_waterhouse_supersingular_cases():
    assert admissible_elliptic_traces(9) == list(range(-6, 7))
    # p = 2 with odd exponent also admits t = +-sqrt(2q)
    assert admissible_elliptic_traces(8) == [-5, -4, -3, -1, 0, 1, 3, 4, 5]
    assert admissible_elliptic_traces(4) == [-4, -3, -2, -1, 0, 1, 2, 3, 4]


def test_make_elliptic_class_errors():
    with pytest.raises(WeilBoundViolation):
        make_elliptic_class(2, 3)
    with pytest.raises(InadmissibleTrace):
        make_elliptic_class(8, 2, enforce_admissible=True)
    assert make_elliptic_class(8, 2).trace == 2


def test_make_weil_class_errors():
    with pytest.raises(InvalidWeilPolynomial):
        make_weil_class(2, [1, 0, 5, 0, 4])
    with pytest.raises(InvalidWeilPolynomial):
        make_weil_class(2, [1, 0, 3, 0, 5])


def test_class_json_round_trip():
    for c in (make_elliptic_class(2, -2), make_weil_class(2, [1, 0, 3, 0, 4])):
        assert class_from_json(c.to_json()) == c
        assert class_from_label(c.q, c.label) == c
    assert make_elliptic_class(2, -2).to_json() == {"kind": "elliptic", "q": 2, "trace": -2}


def test_validate_report():
    rep = validate(make_weil_class(2, [1, 0, 3, 0, 4]))
    assert rep["honda_tate"] == "not checked"


def test_real_roots_and_angle_indices():
    c = make_weil_class(2, [1, 0, 3, 0, 4])
    roots = isolate_real_roots(c)
    assert len(roots) == 2
    assert [r.sign_of((-1, 1)) * r.sign_of((1, 1)) for r in roots] == [0, 0]
    assert sorted(a.m for a in angle_indices(c)) == [1, 2]


def test_angle_index_by_trace_q2():
    ms = [angle_indices(make_elliptic_class(2, t))[0].m for t in range(-2, 3)]
    assert ms == [1, 1, 1, 2, 2]


def test_edge_angles():
    assert angle_indices(make_elliptic_class(4, -4))[0].classification == "pi"
    assert angle_indices(make_elliptic_class(4, 4))[0].classification == "zero"
    # (x^2 - 2)^2 has real Weil polynomial y^2 - 8: irrational edge angles
    c = make_weil_class(2, [1, 0, -4, 0, 4])
    assert sorted(a.classification for a in angle_indices(c)) == ["pi", "zero"]


@given(product_classes(max_d=2))
def test_angle_index_matches_mpmath(c):
    mpmath.mp.dps = 40
    for idx in angle_indices(c):
        if idx.classification != "interior":
            continue
        y = idx.root.enclosure().mid
        theta = mpmath.acos(mpmath.mpf(y.numerator) / y.denominator / (2 * mpmath.sqrt(c.q)))
        ratio = mpmath.pi / (2 * theta)
        nearest = int(mpmath.nint(ratio))
        if abs(ratio - nearest) < mpmath.mpf(10) ** -12:
            assert idx.m == nearest     # boundary angle: cos(m theta) = 0
        else:
            assert idx.m == int(mpmath.ceil(ratio))


def test_point_count_and_decomposition():
    classes = tuple(make_elliptic_class(2, t) for t in range(-2, 3))
    for e, n in [((4, 7, 5, 3, 7), 1), ((5, 6, 5, 4, 6), 3), ((6, 5, 5, 5, 5), 5)]:
        assert point_count(DecompositionVector(classes, e), 1) == n
    d = DecompositionVector(classes, (4, 7, 5, 3, 7))
    assert d.genus == 26
    assert d.render() == "E_{-2}^4 × E_{-1}^7 × E_0^5 × E_1^3 × E_2^7"


def test_decomposition_errors():
    with pytest.raises(InconsistentFieldSize):
        DecompositionVector((make_elliptic_class(2, 0), make_elliptic_class(3, 0)), (1, 1))
    with pytest.raises(ValueError):
        DecompositionVector((make_elliptic_class(2, 0),), (-1,))


def _discriminant_zero(q, coeffs):
    p, add, mul = oracles.gf_tables(q)
    a1, a2, a3, a4, a6 = coeffs
    # over F_2 (entries 0/1) the integer formula reduced mod 2 is exact
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return disc % p == 0


def _count_points(q, coeffs):
    """Affine + infinity points of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q."""
    p, add, mul = oracles.gf_tables(q)

    def a(u, v):
        return add[u * q + v]

    def m(u, v):
        return mul[u * q + v]

    a1, a2, a3, a4, a6 = coeffs
    n = 1
    for X in range(q):
        rhs = a(a(a(m(m(X, X), X), m(a2, m(X, X))), m(a4, X)), a6)
        for Y in range(q):
            if a(a(m(Y, Y), m(a1, m(X, Y))), m(a3, Y)) == rhs:
                n += 1
    return n


def test_point_count_matches_actual_curve():
    # find a trace-1 curve over F_2, then count it over F_4
    rng = random.Random(3)
    while True:
        coeffs = [rng.randrange(2) for _ in range(5)]
        if _discriminant_zero(2, coeffs):
            continue
        if 2 + 1 - _count_points(2, coeffs) == 1:
            break
    dec = DecompositionVector((make_elliptic_class(2, 1),), (1,))
    assert point_count(dec, 1) == _count_points(2, coeffs)
    assert point_count(dec, 2) == _count_points(4, coeffs)
