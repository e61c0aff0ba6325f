"""Closed-form and trigonometric-polynomial genus bounds.

Given a finite set S of Frobenius angles in [0, pi], every curve over F_q
whose nonnegative Frobenius angles lie in S has genus bounded by

* ``B1 = 23 s^2 q^(2s) log q``                     (g <= B1),
* ``B2 = (sqrt(q) + 1)^(2r) (1 + q^(-r)) / 2``     (g <  B2),
* ``(T(sqrt q) + T(1/sqrt q)) / 2`` for any polynomial T with nonnegative
  coefficients, T(0) = 0 and Re T(e^(i theta)) >= 1 on S          (g <= value).

Values are exact in Q(sqrt(q)) wherever possible; otherwise a rigorous
rational upper endpoint of an enclosing interval is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import poly as P
from .errors import HypothesisViolated, NoConstraint, VerificationInconclusive
from .exactnum import (QuadValue, RatInterval, ceil_rat, cos_interval, exp_interval,
                       floor_rat, ln_interval, ln_upper, pi_interval, quad_floor, quad_sign,
                       rat, rat_to_str, sqrt_interval, to_interval)
from .weil import (RealRoot, WeilClass, angle_index_for_root, chebyshev_like,
                   isolate_real_roots, real_weil_polynomial)

Value = Union[Fraction, QuadValue, RatInterval]

PRECISION_BITS = 96
PRECISION_CEILING = 4096
OUTPUT_BITS = 64


# ---------------------------------------------------------------------------
# Angles
# ---------------------------------------------------------------------------

class Angle:
    """One distinct nonnegative Frobenius angle theta in [0, pi] for a fixed q.

    ``classification`` is "zero", "pi" or "interior"; interior angles carry
    ``m``, the least k >= 1 with cos(k theta) <= 0.
    """

    classification: str
    m: int | None
    label: str

    def __init__(self, q: int):
        self.q = q

    def scaled_cos(self, k: int, bits: int = PRECISION_BITS) -> QuadValue | RatInterval:
        """v_k = 2 q^(k/2) cos(k theta), exactly if possible."""
        raise NotImplementedError

    def cos_multiple(self, k: int, bits: int = PRECISION_BITS) -> QuadValue | RatInterval:
        """cos(k theta), exactly if possible."""
        v = self.scaled_cos(k, bits)
        half = QuadValue.sqrt(self.q) ** k * 2
        if isinstance(v, QuadValue):
            return v / half
        return v / to_interval(half, bits + 8)

    def __repr__(self):
        return f"<Angle {self.label} {self.classification} m={self.m}>"


class RootAngle(Angle):
    """Angle of a root y = 2 sqrt(q) cos(theta) of a real Weil polynomial."""

    def __init__(self, q: int, root: RealRoot, label: str, integer_trace: int | None = None):
        super().__init__(q)
        self.root = root
        self.label = label
        idx = angle_index_for_root(root, q, integer_trace)
        self.classification = idx.classification
        self.m = idx.m

    @property
    def rational_y(self) -> Fraction | None:
        return self.root.exact

    def scaled_cos(self, k: int, bits: int = PRECISION_BITS):
        q = self.q
        if self.classification in ("zero", "pi"):
            sign = 1 if self.classification == "zero" or k % 2 == 0 else -1
            return QuadValue.sqrt(q) ** k * (2 * sign)
        y = self.rational_y
        if y is not None:
            return QuadValue(P.evaluate(chebyshev_like(q, k), y))
        vk = chebyshev_like(q, k)
        target = Fraction(1, 1 << bits)
        width = Fraction(1, 1 << (bits + 8 * k + 16))
        while True:
            iv = P.evaluate_interval(vk, self.root.refine_to(width))
            if iv.width <= target:
                return iv
            width /= 1 << 32

    def sign_of_trig_poly(self, coeffs: Sequence[QuadValue]) -> int | None:
        """Exact sign of sum_k coeffs[k-1] cos(k theta) - 1 when it is a rational polynomial in y.

        Returns None when the combination leaves Q[y].
        """
        q = self.q
        total = P.poly([-2])   # 2 * (sum a_k cos(k theta) - 1) as a polynomial in y
        for k, a in enumerate(coeffs, start=1):
            a = QuadValue(a) if not isinstance(a, QuadValue) else a
            if a.is_zero():
                continue
            # a_k v_k(y) / q^(k/2)
            inv = QuadValue.sqrt(q) ** (-k) * a
            if not inv.is_rational:
                return None
            total = P.add(total, P.scale(chebyshev_like(q, k), inv.to_rational()))
        return self.root.sign_of(total)


class PiFractionAngle(Angle):
    """Angle theta = x * pi for a rational x in [0, 1]."""

    def __init__(self, q: int, x: Fraction):
        super().__init__(q)
        x = rat(x)
        if not 0 <= x <= 1:
            raise ValueError("angle must lie in [0, pi]")
        self.x = x
        self.label = f"{rat_to_str(x)}*pi"
        if x == 0:
            self.classification, self.m = "zero", None
        elif x == 1:
            self.classification, self.m = "pi", None
        else:
            self.classification = "interior"
            self.m = ceil_rat(1 / (2 * x))

    def exact_cos(self, k: int) -> Fraction | None:
        r = (k * self.x) % 2
        if r.denominator == 1:
            return Fraction(1 if r == 0 else -1)
        if r.denominator == 2:
            return Fraction(0)
        if r.denominator == 3:
            return Fraction(1, 2) if r.numerator in (1, 5) else Fraction(-1, 2)
        return None

    def cos_multiple(self, k: int, bits: int = PRECISION_BITS):
        c = self.exact_cos(k)
        if c is not None:
            return QuadValue(c)
        pi = pi_interval(bits + 16)
        return cos_interval(pi.scale(k * self.x), bits)

    def scaled_cos(self, k: int, bits: int = PRECISION_BITS):
        c = self.cos_multiple(k, bits)
        half = QuadValue.sqrt(self.q) ** k * 2
        if isinstance(c, QuadValue):
            return c * half
        return c * to_interval(half, bits + 8)


@dataclass
class AngleSet:
    q: int
    angles: list[Angle]

    @property
    def s(self) -> int:
        return len(self.angles)

    @classmethod
    def from_classes(cls, classes: Iterable[WeilClass]) -> AngleSet:
        """Distinct nonnegative Frobenius angles of the given classes (duplicates merged)."""
        classes = list(classes)
        if not classes:
            raise ValueError("need at least one class (or use AngleSet(q, []))")
        q = classes[0].q
        if any(c.q != q for c in classes):
            from .errors import InconsistentFieldSize
            raise InconsistentFieldSize("inconsistent field size")
        angles: list[Angle] = []
        seen_traces: set[int] = set()
        general = []
        for c in classes:
            if c.kind == "elliptic":
                if c.trace in seen_traces:
                    continue
                seen_traces.add(c.trace)
                root = isolate_real_roots(c)[0]
                angles.append(RootAngle(q, root, c.label, integer_trace=c.trace))
            else:
                isolate_real_roots(c)   # validates
                general.append(c)
        if general:
            h = P.poly([1])
            for c in general:
                h = P.mul(h, real_weil_polynomial(c))
            # a trace already present as an elliptic class is the same angle
            for t in seen_traces:
                lin = P.poly([-t, 1])
                while P.degree(h) > 0 and not P.rem(h, lin):
                    h = P.divmod_poly(h, lin)[0]
            sqf = P.squarefree_part(h)
            if P.degree(sqf) > 0:
                bound = Fraction(math.isqrt(4 * q) + 2)
                for f, _ in _rational_split(sqf, q):
                    for iv in P.isolate_roots(f, -bound, bound):
                        root = RealRoot(f, iv, 1)
                        y = root.exact
                        lab = f"y={rat_to_str(y)}" if y is not None else \
                            f"root of {_poly_str(f)} in [{rat_to_str(iv.lo)}, {rat_to_str(iv.hi)}]"
                        t = int(y) if y is not None and y.denominator == 1 else None
                        angles.append(RootAngle(q, root, lab, integer_trace=t))
        return cls(q, angles)

    @classmethod
    def from_pi_fractions(cls, q: int, xs: Iterable) -> AngleSet:
        uniq = sorted({rat(x) for x in xs})
        return cls(q, [PiFractionAngle(q, x) for x in uniq])

    def describe(self) -> list[dict]:
        return [{"angle": a.label, "classification": a.classification, "m": a.m}
                for a in self.angles]


def _rational_split(f: P.Poly, q: int):
    """Split a squarefree f into linear factors for integer roots and the remainder."""
    out = []
    rest = f
    bound = math.isqrt(4 * q)
    for t in range(-bound, bound + 1):
        lin = P.poly([-t, 1])
        if P.degree(rest) > 0 and not P.rem(rest, lin):
            out.append((lin, 1))
            rest = P.divmod_poly(rest, lin)[0]
    if P.degree(rest) > 0:
        out.append((rest, 1))
    return out


def _poly_str(f: P.Poly) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c:
            terms.append(f"{rat_to_str(c)}*y^{i}" if i else rat_to_str(c))
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def genus_cap(value: Value, strict: bool) -> int:
    """Largest integer genus consistent with g <= value (or g < value when strict)."""
    if isinstance(value, RatInterval):
        value = value.hi
    if isinstance(value, QuadValue):
        fl = quad_floor(value)
        integral = value.is_rational and value.a.denominator == 1
    else:
        value = rat(value)
        fl = floor_rat(value)
        integral = value.denominator == 1
    return fl - 1 if strict and integral else fl


def value_to_json(v: Value):
    if isinstance(v, QuadValue):
        return v.to_json() if not v.is_rational else rat_to_str(v.a)
    if isinstance(v, RatInterval):
        return v.rounded(OUTPUT_BITS).to_json()
    return rat_to_str(v)


def value_from_json(obj) -> Value:
    if isinstance(obj, dict):
        if "rad" in obj:
            return QuadValue.from_json(obj)
        return RatInterval.from_json(obj)
    return rat(obj) if isinstance(obj, str) else Fraction(obj)


def value_float(v: Value) -> float:
    if isinstance(v, RatInterval):
        return float(v.hi)
    return float(v)


@dataclass
class BoundReport:
    method: str
    value: Value
    strict: bool
    genus_cap: int
    exact: bool = True
    details: dict = field(default_factory=dict)

    @classmethod
    def make(cls, method: str, value: Value, strict: bool, exact: bool = True,
             **details) -> BoundReport:
        if isinstance(value, RatInterval):
            value = value.rounded(OUTPUT_BITS)
            details.setdefault("enclosure", value.to_json())
            value = value.hi
            exact = False
        if isinstance(value, QuadValue) and value.is_rational:
            value = value.a
        return cls(method, value, strict, genus_cap(value, strict), exact, details)

    def to_json(self) -> dict:
        return {"format": 1, "method": self.method, "value": value_to_json(self.value),
                "strict": self.strict, "exact": self.exact, "genus_cap": self.genus_cap,
                "details": self.details}

    @classmethod
    def from_json(cls, obj: dict) -> BoundReport:
        return cls(obj["method"], value_from_json(obj["value"]), bool(obj["strict"]),
                   int(obj["genus_cap"]), bool(obj.get("exact", True)),
                   dict(obj.get("details", {})))


# ---------------------------------------------------------------------------
# Theorem-style bounds
# ---------------------------------------------------------------------------

def angle_bound_r(S: AngleSet) -> Fraction:
    """r = #(S n {pi}) + 2 sum_{interior} m(theta); r = 1/2 when S = {0}."""
    if S.s == 1 and S.angles[0].classification == "zero":
        return Fraction(1, 2)
    r = 0
    for a in S.angles:
        if a.classification == "pi":
            r += 1
        elif a.classification == "interior":
            r += 2 * a.m
    return Fraction(r)


def bound_b1(q: int, s: int, bits: int = PRECISION_BITS) -> BoundReport:
    if s < 1:
        raise ValueError("s must be at least 1")
    ln = ln_upper(q, bits)
    value = 23 * s * s * q ** (2 * s) * ln.hi
    return BoundReport.make("b1", value, False, exact=False, s=s, q=q,
                            ln_q_upper=rat_to_str(ln.hi))


def bound_b2(q: int, r: Fraction | int) -> BoundReport:
    r = rat(r)
    if (2 * r).denominator != 1 or r < 0:
        raise ValueError("2r must be a nonnegative integer")
    two_r = int(2 * r)
    sq = QuadValue.sqrt(q)
    value = (sq + 1) ** two_r * (1 + sq ** (-two_r)) / 2
    return BoundReport.make("b2", value, True, r=rat_to_str(r), q=q)


def theorem_bounds(S: AngleSet) -> tuple[BoundReport, BoundReport]:
    """(B1, B2) for an angle set."""
    if S.s == 0:
        raise NoConstraint("no constraint: empty angle set")
    return bound_b1(S.q, S.s), bound_b2(S.q, angle_bound_r(S))


# ---------------------------------------------------------------------------
# Lemma: T-polynomial bounds
# ---------------------------------------------------------------------------

@dataclass
class BoundPolynomial:
    """Factor values of P = prod P_theta at sqrt(q) and 1/sqrt(q); T = (P - 1)^2."""
    factors: list[dict]
    p_sqrt: Value
    p_invsqrt: Value
    t_sqrt: Value
    t_invsqrt: Value


def _to_common(values: Sequence[Value], bits: int) -> list[Value]:
    if any(isinstance(v, RatInterval) for v in values):
        return [to_interval(v, bits) for v in values]
    return list(values)


def _factor_values(a: Angle, q: int, bits: int):
    sq = QuadValue.sqrt(q)
    if a.classification == "pi":
        return 1 + sq, 1 + 1 / sq
    v = a.scaled_cos(a.m, bits)
    qm = Fraction(q) ** a.m
    if isinstance(v, RatInterval):
        return 1 + qm - v, (1 - v).scale(1 / qm) + 1
    return 1 - v + qm, 1 + (1 - v) / qm


def lemma_bound_canonical(S: AngleSet, bits: int = PRECISION_BITS
                          ) -> tuple[BoundReport, BoundPolynomial]:
    """Lemma bound with T = (P - 1)^2, P = prod_{theta != 0} P_theta.

    P_pi = 1 + x and P_theta = 1 - 2 cos(m theta) x^m + x^(2m) otherwise.
    For S = {0}, T = x.
    """
    q = S.q
    if S.s == 0:
        raise NoConstraint("no constraint: empty angle set")
    sq = QuadValue.sqrt(q)
    nonzero = [a for a in S.angles if a.classification != "zero"]
    if not nonzero:
        value = (sq + 1 / sq) / 2
        poly_info = BoundPolynomial([], QuadValue(1), QuadValue(1), sq, 1 / sq)
        return BoundReport.make("lemma_canonical", value, False, T="x"), poly_info
    factors, ps, pis = [], [], []
    for a in nonzero:
        f_s, f_i = _factor_values(a, q, bits)
        factors.append({"angle": a.label, "m": a.m, "at_sqrt_q": f_s, "at_inv_sqrt_q": f_i})
        ps.append(f_s)
        pis.append(f_i)
    vals = _to_common(ps + pis, bits)
    p_s, p_i = vals[0], vals[len(ps)]
    for v in vals[1:len(ps)]:
        p_s = p_s * v
    for v in vals[len(ps) + 1:]:
        p_i = p_i * v
    t_s = (p_s - 1) ** 2
    t_i = (p_i - 1) ** 2
    value = (t_s + t_i) / 2
    details = {"T": "(P-1)^2", "r": rat_to_str(angle_bound_r(S)),
               "factors": [{"angle": f["angle"], "m": f["m"],
                            "at_sqrt_q": value_to_json(f["at_sqrt_q"]),
                            "at_inv_sqrt_q": value_to_json(f["at_inv_sqrt_q"])}
                           for f in factors]}
    report = BoundReport.make("lemma_canonical", value, False, **details)
    return report, BoundPolynomial(factors, p_s, p_i, t_s, t_i)


def canonical_t_coefficients(S: AngleSet) -> list[QuadValue]:
    """Coefficients a_1..a_n of the canonical T when they lie in Q(sqrt(q)).

    Raises ValueError for angles whose cos(m theta) is not known exactly.
    """
    q = S.q
    nonzero = [a for a in S.angles if a.classification != "zero"]
    if not nonzero:
        return [QuadValue(1)]
    Pc: list[QuadValue] = [QuadValue(1)]
    for a in nonzero:
        if a.classification == "pi":
            fac = [QuadValue(1), QuadValue(1)]
        else:
            c = a.cos_multiple(a.m)
            if not isinstance(c, QuadValue):
                raise ValueError(f"cos(m theta) is not exact for {a.label}")
            fac = [QuadValue(0)] * (2 * a.m + 1)
            fac[0] = QuadValue(1)
            fac[a.m] = c * -2
            fac[2 * a.m] = QuadValue(1)
        out = [QuadValue(0)] * (len(Pc) + len(fac) - 1)
        for i, x in enumerate(Pc):
            for j, y in enumerate(fac):
                out[i + j] = out[i + j] + x * y
        Pc = out
    Pm1 = [QuadValue(0)] + Pc[1:]
    T = [QuadValue(0)] * (2 * len(Pm1) - 1)
    for i, x in enumerate(Pm1):
        for j, y in enumerate(Pm1):
            T[i + j] = T[i + j] + x * y
    while len(T) > 1 and T[-1].is_zero():
        T.pop()
    return T[1:]


def _check_angle(a: Angle, coeffs: list[QuadValue]) -> None:
    # exact route: every cos(k theta) needed is in Q(sqrt q)
    algebraic = (isinstance(a, RootAngle) and a.rational_y is None
                 and a.classification == "interior")
    exact_terms = []
    for k, c in enumerate(coeffs, start=1):
        if c.is_zero():
            continue
        cv = None if algebraic else a.cos_multiple(k)
        if not isinstance(cv, QuadValue):
            exact_terms = None
            break
        exact_terms.append(c * cv)
    if exact_terms is not None:
        total = sum(exact_terms, QuadValue(0))
        if quad_sign(total - 1) < 0:
            raise HypothesisViolated(
                f"hypothesis Re T(e(θ)) ≥ 1 violated at θ={a.label}")
        return
    if isinstance(a, RootAngle):
        s = a.sign_of_trig_poly(coeffs)
        if s is not None:
            if s < 0:
                raise HypothesisViolated(
                    f"hypothesis Re T(e(θ)) ≥ 1 violated at θ={a.label}")
            return
    bits = 64
    while bits <= PRECISION_CEILING:
        total = RatInterval(0, 0)
        for k, c in enumerate(coeffs, start=1):
            if not c.is_zero():
                total = total + to_interval(a.cos_multiple(k, bits), bits) * to_interval(c, bits)
        if total.lo >= 1:
            return
        if total.hi < 1:
            raise HypothesisViolated(
                f"hypothesis Re T(e(θ)) ≥ 1 violated at θ={a.label}")
        bits *= 2
    raise VerificationInconclusive(
        f"verification inconclusive at θ={a.label} (precision ceiling reached)")


def lemma_bound_custom(S: AngleSet, T_coeffs: Sequence) -> BoundReport:
    """Lemma bound for a caller-supplied T = a_1 x + ... + a_n x^n.

    Coefficients may be rationals or elements of Q(sqrt(q)); all must be
    nonnegative.  The hypothesis Re T(e(theta)) >= 1 is verified on every
    angle of S before the bound is returned.
    """
    q = S.q
    coeffs = [c if isinstance(c, QuadValue) else QuadValue(rat(c)) for c in T_coeffs]
    for k, c in enumerate(coeffs, start=1):
        if quad_sign(c) < 0:
            raise ValueError(f"coefficient of x^{k} is negative")
    if not any(not c.is_zero() for c in coeffs):
        raise HypothesisViolated("hypothesis Re T(e(θ)) ≥ 1 violated: T is zero")
    for a in S.angles:
        _check_angle(a, coeffs)
    sq = QuadValue.sqrt(q)
    value = QuadValue(0)
    for k, c in enumerate(coeffs, start=1):
        value = value + c * (sq ** k + sq ** (-k))
    value = value / 2
    return BoundReport.make("lemma_custom", value, False,
                            T=[value_to_json(c) for c in coeffs])


# ---------------------------------------------------------------------------
# Corollaries
# ---------------------------------------------------------------------------

def serre_factor_bound(q: int, g: int, bits: int = PRECISION_BITS) -> Fraction:
    """Rational lower approximation of sqrt(log log g / (6 log q)); 0 when g < 3."""
    if g < 3:
        return Fraction(0)
    lng = ln_interval(Fraction(g), bits)
    if lng.lo <= 1:
        return Fraction(0)
    lnln_lo = ln_interval(lng.lo, bits).lo
    if lnln_lo <= 0:
        return Fraction(0)
    ratio = lnln_lo / (6 * ln_upper(q, bits).hi)
    return sqrt_interval(ratio, bits).lo


def variety_corollary_bound(q: int, d: int) -> BoundReport:
    rep = bound_b1(q, d)
    rep.details["corollary"] = "varieties"
    return rep


def split_corollary_bound(q: int, bits: int = PRECISION_BITS) -> BoundReport:
    """Rigorous upper bound on 510 q^(8 sqrt(q) + 3) log q."""
    ln = ln_upper(q, bits)
    root = math.isqrt(q)
    if root * root == q:
        power = Fraction(q) ** (8 * root + 3)
    else:
        e_hi = 8 * sqrt_interval(q, bits).hi + 3
        k = floor_rat(e_hi)
        power = Fraction(q) ** k * exp_interval((e_hi - k) * ln.hi, bits).hi
    value = 510 * power * ln.hi
    return BoundReport.make("b1", value, False, exact=False, corollary="split", q=q)


def x0_level_filter(G: int) -> int:
    """Largest N with (N - 5 sqrt(N) - 8) / 12 <= G, decided in integers."""
    if G < 0:
        raise ValueError("G must be nonnegative")

    def ok(N: int) -> bool:
        L = N - 8 - 12 * G
        return L <= 0 or L * L <= 25 * N

    c = 8 + 12 * G
    N = c + 12 + math.isqrt(25 * c + 157)
    while not ok(N):
        N -= 1
    while ok(N + 1):
        N += 1
    return N
