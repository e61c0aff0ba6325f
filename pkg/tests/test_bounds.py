from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from genusbound import bounds
from genusbound.bounds import (AngleSet, BoundReport, angle_bound_r, bound_b1, bound_b2,
                               canonical_t_coefficients, genus_cap, lemma_bound_canonical,
                               lemma_bound_custom, serre_factor_bound, split_corollary_bound,
                               theorem_bounds, variety_corollary_bound, x0_level_filter)
from genusbound.errors import HypothesisViolated, NoConstraint, VerificationInconclusive
from genusbound.exactnum import QuadValue, RatInterval, quad_sign
from genusbound.weil import admissible_elliptic_traces, make_elliptic_class, make_weil_class, product_class

mpmath.mp.dps = 50


def mp(x):
    if isinstance(x, QuadValue):
        return mp(x.a) + mp(x.b) * mpmath.sqrt(x.rad)
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def elliptic_set(q, traces):
    return AngleSet.from_classes([make_elliptic_class(q, t) for t in traces])


def numeric_canonical(q, thetas):
    """Canonical-T bound from floating angles, independent of the exact code path."""
    sq = mpmath.sqrt(q)
    nonzero = [t for t in thetas if t > mpmath.mpf(10) ** -30]
    if not nonzero:
        return (sq + 1 / sq) / 2

    def P(x):
        out = mpmath.mpf(1)
        for th in nonzero:
            if abs(th - mpmath.pi) < mpmath.mpf(10) ** -30:
                out *= 1 + x
            else:
                m = int(mpmath.ceil(mpmath.pi / (2 * th) - mpmath.mpf(10) ** -25))
                out *= 1 - 2 * mpmath.cos(m * th) * x ** m + x ** (2 * m)
        return out

    return ((P(sq) - 1) ** 2 + (P(1 / sq) - 1) ** 2) / 2


def theta_of_trace(q, t):
    return mpmath.acos(mpmath.mpf(t) / (2 * mpmath.sqrt(q)))


def test_f2_angle_data():
    S = elliptic_set(2, range(-2, 3))
    assert S.s == 5
    assert angle_bound_r(S) == 14
    assert [a["m"] for a in S.describe()] == [1, 1, 1, 2, 2]


def test_b1_f2():
    rep = bound_b1(2, 5)
    exact = 23 * 25 * 2 ** 10 * mpmath.log(2)
    assert mp(rep.value) >= exact
    assert mp(rep.value) - exact < mpmath.mpf(10) ** -15
    assert 408120 <= float(rep.value) <= 408135
    assert rep.genus_cap == 408125 and not rep.strict


def test_b2_f2():
    rep = theorem_bounds(elliptic_set(2, range(-2, 3)))[1]
    expected = sp.expand((sp.sqrt(2) + 1) ** 28 * (1 + sp.Rational(1, 2 ** 14)) / 2)
    assert sp.simplify(sp.Rational(rep.value.a.numerator, rep.value.a.denominator)
                       + sp.Rational(rep.value.b.numerator, rep.value.b.denominator) * sp.sqrt(2)
                       - expected) == 0
    assert 2.5e10 <= float(rep.value) <= 2.7e10
    assert rep.strict


def test_b2_trace_zero():
    rep = bound_b2(2, 2)
    assert rep.value == QuadValue(Fraction(85, 8), Fraction(60, 8), 2)
    assert rep.genus_cap == 21
    assert rep.to_json()["value"] == {"a": "85/8", "b": "15/2", "rad": 2}


def test_strict_integral_value_caps_below():
    assert genus_cap(Fraction(21), True) == 20
    assert genus_cap(Fraction(21), False) == 21
    assert genus_cap(QuadValue(21), True) == 20
    assert genus_cap(Fraction(43, 2), True) == 21
    assert bound_b2(4, 1).genus_cap == 5       # (2 + 1)^2 (1 + 1/4) / 2 = 45/8


def test_b2_half_integral_r():
    rep = bound_b2(3, Fraction(1, 2))
    sq = QuadValue.sqrt(3)
    assert rep.value == (sq + 1) * (1 + 1 / sq) / 2
    with pytest.raises(ValueError):
        bound_b2(3, Fraction(1, 3))


def test_zero_angle_only():
    S = AngleSet.from_pi_fractions(4, [0])
    assert angle_bound_r(S) == Fraction(1, 2)
    rep, _ = lemma_bound_canonical(S)
    assert rep.value == Fraction(5, 4)
    S = elliptic_set(4, [4])
    assert lemma_bound_canonical(S)[0].value == Fraction(5, 4)


def test_empty_set():
    S = AngleSet(2, [])
    with pytest.raises(NoConstraint):
        lemma_bound_canonical(S)
    with pytest.raises(NoConstraint):
        theorem_bounds(S)
    assert angle_bound_r(S) == 0


def test_canonical_f2_exact_and_symbolic():
    S = elliptic_set(2, range(-2, 3))
    rep, poly = lemma_bound_canonical(S)
    assert rep.value == Fraction(92088257, 32)
    assert poly.p_sqrt == 2400 and poly.p_invsqrt == Fraction(75, 4)
    # independent symbolic oracle
    x = sp.symbols("x")
    P = sp.Integer(1)
    for t in range(-2, 3):
        c = sp.Rational(t) / (2 * sp.sqrt(2))
        m = next(k for k in range(1, 10) if sp.chebyshevt(k, c) <= 0)
        P *= 1 - 2 * sp.chebyshevt(m, c) * x ** m + x ** (2 * m)
    T = sp.expand((P - 1) ** 2)
    val = sp.nsimplify(sp.expand((T.subs(x, sp.sqrt(2)) + T.subs(x, 1 / sp.sqrt(2))) / 2))
    assert val == sp.Rational(92088257, 32)


@pytest.mark.parametrize("q", [2, 3])
def test_canonical_below_b2_all_subsets(q):
    traces = admissible_elliptic_traces(q)
    for k in range(1, len(traces) + 1):
        for sub in combinations(traces, k):
            S = elliptic_set(q, sub)
            canon = QuadValue(lemma_bound_canonical(S)[0].value) \
                if not isinstance(lemma_bound_canonical(S)[0].value, QuadValue) \
                else lemma_bound_canonical(S)[0].value
            b2 = bound_b2(q, angle_bound_r(S)).value
            assert quad_sign(QuadValue(b2) - canon if not isinstance(b2, QuadValue)
                             else b2 - canon) > 0, sub


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_canonical_matches_numeric_oracle(q):
    traces = admissible_elliptic_traces(q)
    for k in (1, 2, 3):
        for sub in combinations(traces, k):
            rep = lemma_bound_canonical(elliptic_set(q, sub))[0]
            ref = numeric_canonical(q, [theta_of_trace(q, t) for t in sub])
            assert abs(mp(rep.value) - ref) <= mpmath.mpf(10) ** -20 * max(1, ref)


@pytest.mark.parametrize("q", [2, 3])
def test_canonical_T_expansion_passes_custom_check(q):
    traces = admissible_elliptic_traces(q)
    for k in (1, 2, 3, len(traces)):
        for sub in list(combinations(traces, k))[:12]:
            S = elliptic_set(q, sub)
            coeffs = canonical_t_coefficients(S)
            assert all(quad_sign(c) >= 0 for c in coeffs)
            custom = lemma_bound_custom(S, coeffs)
            canon = lemma_bound_canonical(S)[0]
            assert custom.value == canon.value


def test_irrational_angles_enclosure():
    c = make_weil_class(2, [1, 0, 1, 0, 4])       # real roots +-sqrt(3)
    S = AngleSet.from_classes([c])
    rep = lemma_bound_canonical(S)[0]
    assert not rep.exact
    enc = RatInterval.from_json(rep.details["enclosure"])
    thetas = [mpmath.acos(s * mpmath.sqrt(3) / (2 * mpmath.sqrt(2))) for s in (1, -1)]
    ref = numeric_canonical(2, thetas)
    assert mp(enc.lo) <= ref <= mp(enc.hi)
    assert mp(enc.hi) - mp(enc.lo) < mpmath.mpf(10) ** -12
    assert rep.value == enc.hi


def test_pi_fraction_angles():
    S = AngleSet.from_pi_fractions(3, [Fraction(1, 5), Fraction(1, 2), 1, Fraction(1, 2)])
    assert S.s == 3
    assert [a["m"] for a in S.describe()] == [3, 1, None]
    rep = lemma_bound_canonical(S)[0]
    ref = numeric_canonical(3, [mpmath.pi / 5, mpmath.pi / 2, mpmath.pi])
    enc = RatInterval.from_json(rep.details["enclosure"])
    assert mp(enc.lo) <= ref <= mp(enc.hi)
    assert angle_bound_r(S) == 1 + 2 * (3 + 1)


def test_custom_T_hypothesis_checks():
    S = elliptic_set(2, [0])                      # theta = pi/2
    with pytest.raises(HypothesisViolated, match="Re T"):
        lemma_bound_custom(S, [1])
    assert lemma_bound_custom(S, [0, 0, 0, 1]).value == Fraction(17, 8)
    with pytest.raises(ValueError):
        lemma_bound_custom(S, [-1, 0, 0, 2])


def test_custom_T_algebraic_angle_exact_sign():
    c = make_weil_class(2, [1, 0, 1, 0, 4])       # y = +-sqrt(3): cos(theta) = +-sqrt(6)/4
    S = AngleSet.from_classes([c])
    with pytest.raises(HypothesisViolated):
        lemma_bound_custom(S, [1])
    # Re T = 2 cos^2 theta * ... use T = x^2 + x^4: cos 2t = 2c^2 - 1 = -1/4; cos 4t = -7/8
    with pytest.raises(HypothesisViolated):
        lemma_bound_custom(S, [0, 1, 0, 1])


def test_custom_T_inconclusive_at_precision_ceiling():
    # Re T(e(pi/4)) = sqrt(2) cos(pi/4) = 1 exactly, but cos(pi/4) is only known by intervals
    S = AngleSet.from_pi_fractions(2, [Fraction(1, 4)])
    with pytest.raises(VerificationInconclusive):
        lemma_bound_custom(S, [QuadValue.sqrt(2)])


def test_duplicate_angles_are_merged():
    c = product_class([make_elliptic_class(2, 1), make_elliptic_class(2, -1)])
    S = AngleSet.from_classes([make_elliptic_class(2, 1), c, make_elliptic_class(2, 1)])
    assert S.s == 2
    assert bound_b1(2, S.s).value == theorem_bounds(S)[0].value


def test_serre_factor():
    assert serre_factor_bound(2, 2) == 0
    for g, q in [(3, 2), (16, 2), (10 ** 6, 3)]:
        ref = mpmath.sqrt(mpmath.log(mpmath.log(g)) / (6 * mpmath.log(q)))
        v = mp(serre_factor_bound(q, g))
        assert v <= ref and ref - v < mpmath.mpf(10) ** -15
    assert abs(float(serre_factor_bound(2, 3)) - 0.1504) < 1e-4
    assert abs(float(serre_factor_bound(2, 16)) - 0.4952) < 1e-4


def test_variety_corollary_matches_b1():
    assert variety_corollary_bound(3, 4).value == bound_b1(3, 4).value


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_split_corollary(q):
    rep = split_corollary_bound(q)
    ref = 510 * mpmath.mpf(q) ** (8 * mpmath.sqrt(q) + 3) * mpmath.log(q)
    assert mp(rep.value) >= ref
    assert (mp(rep.value) - ref) / ref < mpmath.mpf(10) ** -15


def x0_oracle(G):
    n = 1
    best = None
    while n < 20 * G + 400:
        if n - 5 * mpmath.sqrt(n) - 8 <= 12 * G:
            best = n
        n += 1
    return best


@pytest.mark.parametrize("G", [0, 1, 2, 5, 26, 100])
def test_x0_filter_matches_real_arithmetic(G):
    assert x0_level_filter(G) == x0_oracle(G)


def test_x0_filter_known():
    assert x0_level_filter(26) == 422
    assert x0_level_filter(0) == 39


@given(st.integers(0, 10 ** 9))
def test_x0_filter_is_maximal(G):
    N = x0_level_filter(G)

    def ok(n):
        L = n - 8 - 12 * G
        return L <= 0 or L * L <= 25 * n

    assert ok(N) and not ok(N + 1) and not ok(N + 2)


def test_report_json_round_trip():
    S = elliptic_set(2, range(-2, 3))
    reps = [bound_b1(2, 5), bound_b2(2, 2), lemma_bound_canonical(S)[0],
            lemma_bound_canonical(AngleSet.from_pi_fractions(3, [Fraction(1, 5)]))[0]]
    for rep in reps:
        text = json.dumps(rep.to_json())
        back = BoundReport.from_json(json.loads(text))
        assert back == rep
        assert back.to_json()["format"] == 1
