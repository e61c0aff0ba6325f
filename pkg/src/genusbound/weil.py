"""Isogeny classes over F_q described by their Weil polynomials.

The monic Weil polynomial of a d-dimensional class is stored as its 2d+1
integer coefficients ``c_0 = 1, c_1, ..., c_2d`` (descending powers of x).
Frobenius power sums are integers and drive both point counts and the exact
classification of Frobenius angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sympy import factorint

from . import poly as P
from .errors import (InadmissibleTrace, InvalidFieldSize, InvalidWeilPolynomial,
                     WeilBoundViolation, InconsistentFieldSize)
from .exactnum import RatInterval

M_SEARCH_CAP = 10 ** 6


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, a) with q = p**a, or raise InvalidFieldSize."""
    if not isinstance(q, int) or q < 2:
        raise InvalidFieldSize(f"invalid field size: {q!r}")
    f = factorint(q)
    if len(f) != 1:
        raise InvalidFieldSize(f"invalid field size: {q} is not a prime power")
    (p, a), = f.items()
    return int(p), int(a)


@dataclass(frozen=True)
class WeilClass:
    q: int
    coeffs: tuple[int, ...]
    kind: str = "general"          # "elliptic" or "general"
    trace: int | None = None

    @property
    def dim(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def a(self) -> int:
        return prime_power(self.q)[1]

    @property
    def label(self) -> str:
        if self.kind == "elliptic":
            return f"t={self.trace}"
        return "weil[" + ",".join(str(c) for c in self.coeffs) + "]"

    def to_json(self) -> dict:
        if self.kind == "elliptic":
            return {"kind": "elliptic", "q": self.q, "trace": self.trace}
        return {"kind": "weil", "q": self.q, "coeffs": list(self.coeffs)}


def class_from_json(obj: dict, enforce_admissible: bool = False) -> WeilClass:
    kind = obj.get("kind")
    if kind == "elliptic":
        return make_elliptic_class(int(obj["q"]), int(obj["trace"]), enforce_admissible)
    if kind == "weil":
        return make_weil_class(int(obj["q"]), [int(c) for c in obj["coeffs"]])
    raise ValueError(f"unknown class kind {kind!r}")


def class_from_label(q: int, label: str) -> WeilClass:
    """Inverse of ``WeilClass.label``: "t=-2" or "weil[1,0,3,0,4]"."""
    label = label.strip()
    if label.startswith("t="):
        return make_elliptic_class(q, int(label[2:]))
    if label.startswith("weil[") and label.endswith("]"):
        return make_weil_class(q, [int(c) for c in label[5:-1].split(",")])
    raise ValueError(f"unrecognized class label {label!r}")


def admissible_elliptic_traces(q: int) -> list[int]:
    """Traces of Frobenius of elliptic curves over F_q (Waterhouse's classification)."""
    p, a = prime_power(q)
    traces = set()
    bound = math.isqrt(4 * q)
    for t in range(-bound, bound + 1):
        if t % p != 0:
            traces.add(t)
    if a % 2 == 0:
        s = math.isqrt(q)
        traces.update((2 * s, -2 * s))
        if p % 3 != 1:
            traces.update((s, -s))
        if p % 4 != 1:
            traces.add(0)
    else:
        traces.add(0)
        if p in (2, 3):
            s = p ** ((a + 1) // 2)
            traces.update((s, -s))
    return sorted(traces)


def make_elliptic_class(q: int, t: int, enforce_admissible: bool = False) -> WeilClass:
    prime_power(q)
    if t * t > 4 * q:
        raise WeilBoundViolation(f"trace violates Weil bound: {t}^2 > 4*{q}")
    if enforce_admissible and t not in admissible_elliptic_traces(q):
        raise InadmissibleTrace(f"trace does not occur over F_{q}: t={t}")
    return WeilClass(q=q, coeffs=(1, -t, q), kind="elliptic", trace=t)


def make_weil_class(q: int, coeffs: Sequence[int]) -> WeilClass:
    """Build a general class and check it is a plausible Weil polynomial.

    Checks the functional equation and that the real Weil polynomial has all
    its roots in [-2 sqrt(q), 2 sqrt(q)].  Honda-Tate occurrence is not checked.
    """
    prime_power(q)
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) < 3 or len(coeffs) % 2 == 0 or coeffs[0] != 1:
        raise InvalidWeilPolynomial(
            "not a valid Weil polynomial: need a monic polynomial of even positive degree")
    c = WeilClass(q=q, coeffs=coeffs)
    validate(c)
    return c


def validate(c: WeilClass) -> dict:
    """Validation report; raises InvalidWeilPolynomial on failure."""
    d = c.dim
    for j in range(d + 1):
        if c.coeffs[2 * d - j] != c.q ** (d - j) * c.coeffs[j]:
            raise InvalidWeilPolynomial(
                f"not a valid Weil polynomial: functional equation fails at index {j}")
    isolate_real_roots(c)
    return {"functional_equation": True, "real_roots_in_weil_range": True,
            "honda_tate": "not checked"}


# ---------------------------------------------------------------------------
# Real Weil polynomial, roots, angles
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def chebyshev_like(q: int, k: int) -> P.Poly:
    """v_k(y) with v_0 = 2, v_1 = y, v_k = y v_{k-1} - q v_{k-2}.

    At y = 2 sqrt(q) cos(theta), v_k(y) = 2 q^(k/2) cos(k theta).
    """
    if k == 0:
        return P.poly([2])
    if k == 1:
        return P.poly([0, 1])
    return P.sub(P.mul(P.poly([0, 1]), chebyshev_like(q, k - 1)),
                 P.scale(chebyshev_like(q, k - 2), q))


def real_weil_polynomial(c: WeilClass) -> P.Poly:
    """h(y) of degree d with x^d h(x + q/x) equal to the Weil polynomial."""
    d = c.dim
    h = P.poly([c.coeffs[d]])
    for j in range(d):
        h = P.add(h, P.scale(chebyshev_like(c.q, d - j), c.coeffs[j]))
    return h


@dataclass
class RealRoot:
    """One distinct real root y, known as the unique root of ``factor`` in ``interval``."""
    factor: P.Poly
    interval: RatInterval
    multiplicity: int = 1
    _seq: list = field(default=None, repr=False, compare=False)

    @property
    def exact(self) -> Fraction | None:
        if self.interval.lo == self.interval.hi:
            return self.interval.lo
        if P.degree(self.factor) == 1:
            return -self.factor[0] / self.factor[1]
        return None

    def sturm(self) -> list:
        if self._seq is None:
            self._seq = P.sturm_sequence(self.factor)
        return self._seq

    def refine(self) -> RatInterval:
        x = self.exact
        if x is not None:
            self.interval = RatInterval(x, x)
        else:
            self.interval = P.refine_root(self.factor, self.interval, self.sturm())
        return self.interval

    def refine_to(self, width: Fraction) -> RatInterval:
        while self.interval.width > width:
            self.refine()
        return self.interval

    def sign_of(self, g: P.Poly) -> int:
        """Exact sign of g at this root."""
        x = self.exact
        if x is not None:
            v = P.evaluate(g, x)
            return (v > 0) - (v < 0)
        if not g:
            return 0
        common = P.gcd(self.factor, g)
        iv = self.interval
        if P.degree(common) > 0 and P.count_roots_in(P.sturm_sequence(common), iv.lo, iv.hi) > 0:
            return 0
        gs = P.squarefree_part(g)
        seq = P.sturm_sequence(gs) if P.degree(gs) > 0 else None
        while True:
            iv = self.interval
            hv = P.evaluate(g, iv.hi)
            if hv != 0 and (seq is None or P.count_roots_in(seq, iv.lo, iv.hi) == 0):
                return (hv > 0) - (hv < 0)
            self.refine()

    def enclosure(self, width: Fraction = Fraction(1, 2 ** 64)) -> RatInterval:
        return self.refine_to(width)


def isolate_real_roots(c: WeilClass) -> list[RealRoot]:
    """Distinct real roots of the real Weil polynomial with multiplicities.

    Raises InvalidWeilPolynomial unless all d roots are real and lie in
    [-2 sqrt(q), 2 sqrt(q)].
    """
    h = real_weil_polynomial(c)
    if c.kind == "elliptic":
        roots = [RealRoot(h, RatInterval(c.trace, c.trace), 1)]
    else:
        roots = _isolate_with_multiplicity(h, c.q)
    if sum(r.multiplicity for r in roots) != c.dim:
        raise InvalidWeilPolynomial(
            "not a valid Weil polynomial: real Weil polynomial has non-real roots")
    edge = P.poly([-4 * c.q, 0, 1])
    for r in roots:
        if r.sign_of(edge) > 0:
            raise InvalidWeilPolynomial(
                "not a valid Weil polynomial: a root lies outside [-2 sqrt(q), 2 sqrt(q)]")
    return roots


def _isolate_with_multiplicity(h: P.Poly, q: int) -> list[RealRoot]:
    bound = Fraction(math.isqrt(4 * q) + 2)
    roots: list[RealRoot] = []
    for factor, mult in P.squarefree_decomposition(h):
        seq = P.sturm_sequence(factor)
        n_real = P.count_real_roots(seq)
        found = P.isolate_roots(factor, -bound, bound)
        if len(found) != n_real:
            raise InvalidWeilPolynomial(
                "not a valid Weil polynomial: a root lies outside [-2 sqrt(q), 2 sqrt(q)]")
        roots.extend(RealRoot(factor, iv, mult, seq) for iv in found)
    # roots of different squarefree factors are distinct; separate their intervals
    roots.sort(key=lambda r: r.interval.lo)
    changed = True
    while changed:
        changed = False
        for r1, r2 in zip(roots, roots[1:]):
            if r1.interval.hi >= r2.interval.lo:
                wider = r1 if r1.interval.width >= r2.interval.width else r2
                wider.refine()
                changed = True
        roots.sort(key=lambda r: r.interval.lo)
    return roots


@dataclass
class AngleIndex:
    classification: str                 # "zero", "pi" or "interior"
    m: int | None
    multiplicity: int
    root: RealRoot = field(repr=False, compare=False)


def _classify(root: RealRoot, q: int) -> str | None:
    edge = P.poly([-4 * q, 0, 1])
    if root.sign_of(edge) != 0:
        return None
    return "zero" if root.sign_of(P.poly([0, 1])) > 0 else "pi"


def angle_index_for_root(root: RealRoot, q: int, integer_trace: int | None = None) -> AngleIndex:
    """Classify one root y = 2 sqrt(q) cos(theta) and find m = ceil(pi / (2 theta))."""
    cls = _classify(root, q)
    if cls is not None:
        return AngleIndex(cls, None, root.multiplicity, root)
    if integer_trace is not None:
        # a(k) = 2 q^(k/2) cos(k theta) by the integer recurrence
        prev, cur = 2, integer_trace
        for k in range(1, M_SEARCH_CAP + 1):
            if cur <= 0:
                return AngleIndex("interior", k, root.multiplicity, root)
            prev, cur = cur, integer_trace * cur - q * prev
    else:
        for k in range(1, M_SEARCH_CAP + 1):
            if root.sign_of(chebyshev_like(q, k)) <= 0:
                return AngleIndex("interior", k, root.multiplicity, root)
    raise RuntimeError("m-search exceeded its cap; input is not a genuine Weil class")


def angle_indices(c: WeilClass) -> list[AngleIndex]:
    roots = isolate_real_roots(c)
    if c.kind == "elliptic":
        return [angle_index_for_root(roots[0], c.q, integer_trace=c.trace)]
    return [angle_index_for_root(r, c.q) for r in roots]


# ---------------------------------------------------------------------------
# Power sums and point counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSums:
    cls: WeilClass
    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        """p(k) for k >= 1 (p(0) = 2d)."""
        if k == 0:
            return 2 * self.cls.dim
        return self.values[k - 1]

    def __len__(self):
        return len(self.values)


@lru_cache(maxsize=4096)
def _power_sums(coeffs: tuple[int, ...], n_max: int) -> tuple[int, ...]:
    n = len(coeffs) - 1
    p = [0] * (n_max + 1)
    for k in range(1, n_max + 1):
        s = sum(coeffs[i] * p[k - i] for i in range(1, min(k - 1, n) + 1))
        p[k] = -s - k * coeffs[k] if k <= n else -s
    return tuple(p[1:])


def power_sums(c: WeilClass, n_max: int) -> PowerSums:
    """Integer power sums of the 2d Frobenius eigenvalues, p(1) .. p(n_max)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if c.kind == "elliptic":
        vals, prev, cur = [], 2, c.trace
        for _ in range(n_max):
            vals.append(cur)
            prev, cur = cur, c.trace * cur - c.q * prev
        return PowerSums(c, tuple(vals))
    return PowerSums(c, _power_sums(c.coeffs, n_max))


@dataclass(frozen=True)
class DecompositionVector:
    classes: tuple[WeilClass, ...]
    e: tuple[int, ...]
    field_size: int | None = None   # needed only when ``classes`` is empty

    def __post_init__(self):
        if len(self.classes) != len(self.e):
            raise ValueError("one multiplicity per class is required")
        if any(x < 0 for x in self.e):
            raise ValueError("multiplicities must be nonnegative")
        qs = {c.q for c in self.classes}
        if self.field_size is not None:
            qs.add(self.field_size)
        if len(qs) > 1:
            raise InconsistentFieldSize("inconsistent field size")

    @property
    def q(self) -> int | None:
        return self.classes[0].q if self.classes else self.field_size

    @property
    def genus(self) -> int:
        return sum(x * c.dim for x, c in zip(self.e, self.classes))

    def render(self) -> str:
        parts = []
        for c, x in zip(self.classes, self.e):
            name = (f"E_{{{c.trace}}}" if c.trace < 0 else f"E_{c.trace}") if c.kind == "elliptic" else f"A[{','.join(map(str, c.coeffs))}]"
            parts.append(f"{name}^{x}")
        return " × ".join(parts) if parts else "(trivial)"


def point_count(dec: DecompositionVector, m: int, q: int | None = None) -> int:
    """#C(F_{q^m}) = q^m + 1 - sum_j e_j p_j(m) for a curve with this Jacobian decomposition."""
    if m < 1:
        raise ValueError("m must be at least 1")
    q = dec.q if dec.q is not None else q
    if q is None:
        raise ValueError("field size unknown for an empty decomposition")
    total = q ** m + 1
    for c, x in zip(dec.classes, dec.e):
        if x:
            total -= x * power_sums(c, m)[m]
    return total


def product_class(classes: Sequence[WeilClass]) -> WeilClass:
    """The class of a product, with the multiplied Weil polynomial (kind general)."""
    if not classes:
        raise ValueError("empty product")
    q = classes[0].q
    if any(c.q != q for c in classes):
        raise InconsistentFieldSize("inconsistent field size")
    f = P.poly([1])
    for c in classes:
        f = P.mul(f, P.poly(reversed(c.coeffs)))
    return WeilClass(q=q, coeffs=tuple(int(x) for x in reversed(f)))


