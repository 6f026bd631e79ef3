"""Exact subspaces of Vect_{<=d} in reduced row-echelon form.

Vectors are sparse dicts {column: Fraction}.  A ``SpanBasis`` keeps its rows
in reduced echelon form with leading ones, pivots chosen as the leftmost
nonzero column.  Inserting returns a new value; rows that do not change are
shared between the old and new basis, and are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fields import (
    SparseVector,
    VectorField,
    column_degree,
    sparse_coordinates,
    vect_dimension,
    vf_from_coordinates,
)


def axpy(y: Mapping[int, Fraction], a: Fraction, x: Mapping[int, Fraction]) -> SparseVector:
    """Return y + a*x as a new dict without zero entries."""
    out = dict(y)
    for k, v in x.items():
        s = out.get(k, 0) + a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def reduce_against(rows: Sequence[Mapping[int, Fraction]], pivots: Sequence[int],
                   vec: Mapping[int, Fraction]) -> SparseVector:
    """Residual of vec modulo a reduced echelon basis (one pass suffices)."""
    out = dict(vec)
    for row, p in zip(rows, pivots):
        c = out.get(p)
        if c:
            out = axpy(out, -c, row)
    return out


@dataclass(frozen=True)
class SpanBasis:
    n: int
    degree_cap: int
    rows: tuple[Mapping[int, Fraction], ...] = ()
    pivots: tuple[int, ...] = ()

    @classmethod
    def empty(cls, n: int, degree_cap: int) -> "SpanBasis":
        if n < 1 or degree_cap < 0:
            raise ValueError(f"invalid span parameters n={n}, cap={degree_cap}")
        return cls(n, degree_cap)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def full_dimension(self) -> int:
        return vect_dimension(self.n, self.degree_cap)

    @property
    def pivot_index(self) -> dict[int, int]:
        return {p: r for r, p in enumerate(self.pivots)}

    def _coords(self, X: VectorField) -> SparseVector:
        if X.n != self.n:
            raise ValueError(f"dimension mismatch: span on R^{self.n}, field on R^{X.n}")
        if X.degree > self.degree_cap:
            raise ValueError(f"field of degree {X.degree} exceeds cap {self.degree_cap}")
        return sparse_coordinates(X)

    def residual(self, X: VectorField) -> SparseVector:
        return reduce_against(self.rows, self.pivots, self._coords(X))

    def contains(self, X: VectorField) -> bool:
        return not self.residual(X)

    def insert_vector(self, vec: Mapping[int, Fraction]) -> tuple["SpanBasis", bool]:
        r = reduce_against(self.rows, self.pivots, vec)
        if not r:
            return self, False
        p = min(r)
        lead = r[p]
        r = {k: v / lead for k, v in r.items()}
        rows = []
        for row in self.rows:
            c = row.get(p)
            rows.append(axpy(row, -c, r) if c else row)
        at = sum(1 for q in self.pivots if q < p)
        rows.insert(at, r)
        pivots = self.pivots[:at] + (p,) + self.pivots[at:]
        return SpanBasis(self.n, self.degree_cap, tuple(rows), pivots), True

    def insert(self, X: VectorField) -> tuple["SpanBasis", bool]:
        return self.insert_vector(self._coords(X))

    def extend(self, fields: Iterable[VectorField]) -> "SpanBasis":
        s = self
        for X in fields:
            s, _ = s.insert(X)
        return s

    def is_full(self) -> bool:
        return self.dimension == self.full_dimension

    def fields(self) -> list[VectorField]:
        """Rows decoded back into vector fields."""
        return [vf_from_coordinates(r, self.n, self.degree_cap) for r in self.rows]

    def contains_span(self, other: "SpanBasis") -> bool:
        return all(not reduce_against(self.rows, self.pivots, r) for r in other.rows)

    def same_space(self, other: "SpanBasis") -> bool:
        return (self.n == other.n and self.pivots == other.pivots
                and tuple(dict(r) for r in self.rows) == tuple(dict(r) for r in other.rows))

    def dimension_up_to(self, k: int) -> int:
        """dim(span intersected with Vect_{<=k})."""
        high = [{c: v for c, v in r.items() if column_degree(self.n, c) > k} for r in self.rows]
        return self.dimension - rank(high)

    def check_echelon(self) -> None:
        """Raise AssertionError unless rows are in reduced echelon form."""
        assert len(self.rows) == len(self.pivots)
        assert list(self.pivots) == sorted(set(self.pivots))
        for row, p in zip(self.rows, self.pivots):
            assert row and min(row) == p and row[p] == 1
            assert all(v != 0 for v in row.values())
            for other, q in zip(self.rows, self.pivots):
                if other is not row:
                    assert p not in other
        assert self.dimension <= self.full_dimension


def span_of(fields: Iterable[VectorField], n: int, degree_cap: int) -> SpanBasis:
    return SpanBasis.empty(n, degree_cap).extend(fields)


def span_insert(s: SpanBasis, X: VectorField) -> tuple[SpanBasis, bool]:
    return s.insert(X)


def span_contains(s: SpanBasis, X: VectorField) -> bool:
    return s.contains(X)


def span_equals_full(s: SpanBasis) -> bool:
    return s.is_full()


# -- generic sparse elimination -------------------------------------------

class _TaggedEchelon:
    """Echelon rows remembering which input combination produced them."""

    def __init__(self):
        self.rows: list[SparseVector] = []
        self.tags: list[SparseVector] = []
        self.pivots: list[int] = []

    def reduce(self, vec: Mapping[int, Fraction], tag: Mapping[int, Fraction]):
        vec, tag = dict(vec), dict(tag)
        for row, rtag, p in zip(self.rows, self.tags, self.pivots):
            c = vec.get(p)
            if c:
                vec = axpy(vec, -c, row)
                tag = axpy(tag, -c, rtag)
        return vec, tag

    def add(self, vec: Mapping[int, Fraction], tag: Mapping[int, Fraction]):
        """Insert; return the residual tag when vec turns out dependent."""
        vec, tag = self.reduce(vec, tag)
        if not vec:
            return tag
        p = min(vec)
        lead = vec[p]
        vec = {k: v / lead for k, v in vec.items()}
        tag = {k: v / lead for k, v in tag.items()}
        # keep pivots reduced in older rows so a single reduction pass stays exact
        for r in range(len(self.rows)):
            c = self.rows[r].get(p)
            if c:
                self.rows[r] = axpy(self.rows[r], -c, vec)
                self.tags[r] = axpy(self.tags[r], -c, tag)
        self.rows.append(vec)
        self.tags.append(tag)
        self.pivots.append(p)
        return None


def rank(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    ech = _TaggedEchelon()
    for v in vectors:
        ech.add(v, {})
    return len(ech.rows)


def express(vectors: Sequence[Mapping[int, Fraction]],
            target: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
    """Coefficients c with sum c[k] vectors[k] == target, or None if impossible."""
    ech = _TaggedEchelon()
    for k, v in enumerate(vectors):
        ech.add(v, {k: Fraction(1)})
    residual, tag = ech.reduce(target, {})
    if residual:
        return None
    # target - sum(rows used) == 0 and tag tracks -(combination)
    return {k: -c for k, c in sorted(tag.items()) if c}


def nullspace(images: Sequence[Mapping[int, Fraction]]) -> list[SparseVector]:
    """Kernel of the linear map sending basis vector k to images[k].

    Returned in reduced echelon form over the input index, so the result is
    canonical for a given map.
    """
    ech = _TaggedEchelon()
    kernel = []
    for k, img in enumerate(images):
        dep = ech.add(img, {k: Fraction(1)})
        if dep is not None:
            kernel.append(dep)
    canon = _TaggedEchelon()
    for v in kernel:
        canon.add(v, {})
    order = sorted(range(len(canon.rows)), key=lambda r: canon.pivots[r])
    return [canon.rows[r] for r in order]
