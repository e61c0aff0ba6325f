"""Place counts by Moebius inversion, and the inequality system N_n >= 0."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sympy import divisors, factorint

from .errors import GenusBoundError, InconsistentFieldSize
from .exactnum import rat, rat_to_str
from .weil import DecompositionVector, WeilClass, class_from_label, point_count, power_sums


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def mobius_sum(values: Sequence, n: int) -> Fraction:
    """(1/n) * sum_{d | n} mu(n/d) * values[d], with ``values`` indexed from 1."""
    s = sum(mobius(n // d) * values[d] for d in divisors(n))
    return Fraction(s, n) if isinstance(s, int) else rat(s) / n


@dataclass(frozen=True)
class PlaceCounts:
    q: int
    dec: DecompositionVector
    values: tuple[Fraction, ...]


def place_counts(dec: DecompositionVector, D: int, q: int | None = None) -> PlaceCounts:
    """N_1 .. N_D for a curve whose Jacobian has decomposition ``dec``.

    Values may be negative (the decomposition is then not realizable).
    """
    if D < 1:
        raise ValueError("D must be at least 1")
    q = dec.q if dec.q is not None else q
    counts = [None] + [point_count(dec, m, q) for m in range(1, D + 1)]
    vals = tuple(mobius_sum(counts, n) for n in range(1, D + 1))
    for v in vals:
        assert v.denominator == 1, "Gauss congruence violated"
    return PlaceCounts(q, dec, vals)


@dataclass(frozen=True)
class LinearSystem:
    """A e <= b with e >= 0; objective sum_j dims[j] * e[j]."""
    q: int
    labels: tuple[str, ...]
    D: int
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    dims: tuple[int, ...]
    classes: tuple[WeilClass, ...] = ()

    @property
    def n_rows(self) -> int:
        return len(self.b)

    @property
    def n_cols(self) -> int:
        return len(self.dims)

    def truncated(self, D: int) -> LinearSystem:
        return LinearSystem(self.q, self.labels, D, self.A[:D], self.b[:D],
                            self.dims, self.classes)

    def is_feasible(self, e: Sequence) -> bool:
        if any(x < 0 for x in e):
            return False
        return all(sum(a * x for a, x in zip(row, e)) <= bi for row, bi in zip(self.A, self.b))

    def to_json(self) -> dict:
        return {
            "format": 1,
            "q": self.q,
            "labels": list(self.labels),
            "D": self.D,
            "A": [[rat_to_str(x) for x in row] for row in self.A],
            "b": [rat_to_str(x) for x in self.b],
            "dims": list(self.dims),
        }

    @classmethod
    def from_json(cls, obj: dict) -> LinearSystem:
        def parse(x):
            return Fraction(x) if isinstance(x, int) else rat(x)

        A = tuple(tuple(parse(x) for x in row) for row in obj["A"])
        b = tuple(parse(x) for x in obj["b"])
        dims = tuple(int(x) for x in obj["dims"])
        if len(A) != len(b) or any(len(row) != len(dims) for row in A):
            raise ValueError("inconsistent LinearSystem shape")
        q = int(obj["q"])
        labels = tuple(obj["labels"])
        try:
            classes = tuple(class_from_label(q, lab) for lab in labels)
        except (ValueError, GenusBoundError):
            classes = ()
        return cls(q, labels, int(obj["D"]), A, b, dims, classes)


def inequality_system(q: int, classes: Sequence[WeilClass], D: int) -> LinearSystem:
    """Row n (1-based) encodes N_n >= 0 as sum_j c_{n,j} e_j <= b_n."""
    if D < 1:
        raise ValueError("D must be at least 1")
    if any(c.q != q for c in classes):
        raise InconsistentFieldSize("inconsistent field size")
    sums = [[None] + list(power_sums(c, D).values) for c in classes]
    rhs_counts = [None] + [q ** d + 1 for d in range(1, D + 1)]
    A, b = [], []
    for n in range(1, D + 1):
        row = tuple(mobius_sum(s, n) for s in sums)
        A.append(row)
        b.append(mobius_sum(rhs_counts, n))
        assert all(x.denominator == 1 for x in row) and b[-1].denominator == 1
    return LinearSystem(q=q, labels=tuple(c.label for c in classes), D=D,
                        A=tuple(A), b=tuple(b), dims=tuple(c.dim for c in classes),
                        classes=tuple(classes))
