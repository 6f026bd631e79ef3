"""Polynomial vector fields on R^n.

A field X = sum_i X^i d_i is a tuple of n polynomials.  The bracket follows
the convention [X, Y] = X o Y - Y o X acting on functions, i.e.

    [X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i).

Coordinates: Vect_{<=d} is identified with Q^N, N = n * C(n+d, n), using the
basis x^m d_i ordered by (total degree, canonical monomial order, component).
Because degree comes first, the index of a basis field does not depend on the
cap d, so coefficient vectors of different caps are compatible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .poly import (
    Exponents,
    Polynomial,
    Scalar,
    count_monomials,
    format_coefficient,
    format_monomial,
    monomial_rank,
    monomials_of_degree,
    monomials_up_to,
)

SparseVector = dict[int, Fraction]


class VectorField:
    __slots__ = ("n", "components", "_hash")

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n = len(comps)
        for p in comps:
            if not isinstance(p, Polynomial):
                raise TypeError(f"components must be Polynomial, got {type(p).__name__}")
            if p.n != n:
                raise ValueError(f"component of dimension {p.n} in a field on R^{n}")
        self.n = n
        self.components = comps
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls([Polynomial.zero(n)] * n)

    @classmethod
    def basis_field(cls, exps: Sequence[int], i: int, c: Scalar = 1) -> "VectorField":
        """c * x^exps * d_i, i 1-based."""
        n = len(exps)
        if not 1 <= i <= n:
            raise IndexError(f"direction index {i} out of range 1..{n}")
        comps = [Polynomial.zero(n)] * n
        comps[i - 1] = Polynomial.monomial(exps, c)
        return cls(comps)

    @classmethod
    def euler(cls, n: int) -> "VectorField":
        return cls([Polynomial.var(n, i) for i in range(1, n + 1)])

    def __getitem__(self, i: int) -> Polynomial:
        """Component along d_i, 1-based."""
        if not 1 <= i <= self.n:
            raise IndexError(f"component index {i} out of range 1..{self.n}")
        return self.components[i - 1]

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check(self, other: "VectorField") -> None:
        if not isinstance(other, VectorField):
            raise TypeError(f"expected VectorField, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components])

    def scale(self, c: Scalar) -> "VectorField":
        return VectorField([a.scale(c) for a in self.components])

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def act(self, f: Polynomial) -> Polynomial:
        """Directional derivative X(f) = sum_i X^i d_i f."""
        if f.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {f.n}")
        out = Polynomial.zero(self.n)
        for i, xi in enumerate(self.components, start=1):
            if xi:
                out = out + xi * f.partial(i)
        return out

    def partial(self, i: int) -> "VectorField":
        """Componentwise d_i X, which equals [d_i, X]."""
        return VectorField([p.partial(i) for p in self.components])

    def bracket(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField([self.act(yi) - other.act(xi)
                            for xi, yi in zip(self.components, other.components)])

    def divergence(self) -> Polynomial:
        out = Polynomial.zero(self.n)
        for i, xi in enumerate(self.components, start=1):
            out = out + xi.partial(i)
        return out

    def homogeneous_part(self, k: int) -> "VectorField":
        return VectorField([p.homogeneous_part(k) for p in self.components])

    def is_homogeneous(self, k: int) -> bool:
        return all(p.is_homogeneous(k) for p in self.components)

    def substitute(self, images: Sequence[Polynomial]) -> "VectorField":
        return VectorField([p.substitute(images) for p in self.components])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.components)
        return self._hash

    def __str__(self) -> str:
        return format_field(self)

    def __repr__(self) -> str:
        return f"VectorField({self.n}, {format_field(self)!r})"


def format_field(X: VectorField) -> str:
    """Canonical text: `<coeff> <monomial> d<i>` terms, components in index order."""
    pieces = []
    for i, comp in enumerate(X.components, start=1):
        for m, c in comp.sorted_terms():
            mono = format_monomial(m)
            mag = abs(c)
            words = []
            if not mono or mag != 1:
                words.append(format_coefficient(mag))
            if mono:
                words.append(mono)
            words.append(f"d{i}")
            pieces.append((c < 0, " ".join(words)))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- operations under their contract names --------------------------------

def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    return X.bracket(Y)


def divergence(X: VectorField) -> Polynomial:
    return X.divergence()


def homogeneous_part(X: VectorField, k: int) -> VectorField:
    return X.homogeneous_part(k)


# -- coordinates on Vect_{<=d} --------------------------------------------

def vect_dimension(n: int, d: int) -> int:
    """dim Vect_{<=d}(R^n) = n * C(n+d, n)."""
    return n * count_monomials(n, d)


def stratum_dimension(n: int, k: int) -> int:
    """dim Vect_k(R^n), homogeneous fields of degree k."""
    return n * len(monomials_of_degree(n, k))


def basis_index(exps: Exponents, i: int) -> int:
    """Coordinate index of x^exps d_i (i 1-based)."""
    n = len(exps)
    return n * monomial_rank(exps) + (i - 1)


@lru_cache(maxsize=None)
def field_basis(n: int, d: int) -> tuple[tuple[Exponents, int], ...]:
    """(monomial, direction) pairs in coordinate order for Vect_{<=d}(R^n)."""
    return tuple((m, i) for m in monomials_up_to(n, d) for i in range(1, n + 1))


def column_degree(n: int, col: int) -> int:
    return sum(field_basis_entry(n, col)[0])


def field_basis_entry(n: int, col: int) -> tuple[Exponents, int]:
    d = 0
    while vect_dimension(n, d) <= col:
        d += 1
    return field_basis(n, d)[col]


def sparse_coordinates(X: VectorField) -> SparseVector:
    out: SparseVector = {}
    for i, comp in enumerate(X.components, start=1):
        for m, c in comp.terms.items():
            out[basis_index(m, i)] = c
    return out


def vf_coordinates(X: VectorField, d: int) -> list[Fraction]:
    """Dense coefficient vector of X in Vect_{<=d}."""
    if X.degree > d:
        raise ValueError(f"field of degree {X.degree} exceeds cap {d}")
    vec = [Fraction(0)] * vect_dimension(X.n, d)
    for k, c in sparse_coordinates(X).items():
        vec[k] = c
    return vec


def vf_from_coordinates(vec: Mapping[int, Scalar] | Sequence[Scalar], n: int, d: int | None = None) -> VectorField:
    """Inverse of vf_coordinates; accepts dense sequences or sparse dicts."""
    items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
    items = [(k, Fraction(c)) for k, c in items if c]
    if d is None:
        d = 0
        top = max((k for k, _ in items), default=-1)
        while vect_dimension(n, d) <= top:
            d += 1
    basis = field_basis(n, d)
    comps: list[dict[Exponents, Fraction]] = [{} for _ in range(n)]
    for k, c in items:
        if k >= len(basis):
            raise ValueError(f"coordinate {k} outside Vect_<={d}(R^{n})")
        m, i = basis[k]
        comps[i - 1][m] = c
    return VectorField([Polynomial._raw(n, t) for t in comps])


def monomial_fields(n: int, k: int) -> list[VectorField]:
    """Basis of Vect_k(R^n) in coordinate order."""
    return [VectorField.basis_field(m, i) for m in monomials_of_degree(n, k)
            for i in range(1, n + 1)]


def monomial_fields_up_to(n: int, d: int) -> list[VectorField]:
    return [X for k in range(d + 1) for X in monomial_fields(n, k)]
