"""Exact multivariate polynomials with rational coefficients.

A polynomial in n commuting variables x1..xn is stored as a map from exponent
tuples to ``Fraction`` coefficients.  Zero coefficients are never stored, so
the zero polynomial has an empty term map and degree -1.

Monomials are ordered graded-lexicographically: total degree first, then
lexicographically with x1 as the heaviest variable (x1^2 before x1*x2 before
x2^2).  Iteration and printing always follow this order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


def monomial_key(exps: Exponents) -> tuple:
    """Sort key realising the canonical graded-lex order."""
    return (sum(exps), tuple(-e for e in exps))


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, k: int) -> tuple[Exponents, ...]:
    """All exponent tuples of total degree k in n variables, canonical order."""
    out = []
    for picks in combinations_with_replacement(range(n), k):
        exps = [0] * n
        for v in picks:
            exps[v] += 1
        out.append(tuple(exps))
    return tuple(sorted(out, key=monomial_key))


@lru_cache(maxsize=None)
def monomials_up_to(n: int, d: int) -> tuple[Exponents, ...]:
    return tuple(m for k in range(d + 1) for m in monomials_of_degree(n, k))


def count_monomials(n: int, d: int) -> int:
    """Number of monomials of degree <= d in n variables, C(n+d, n)."""
    return comb(n + d, n) if d >= 0 else 0


@lru_cache(maxsize=None)
def monomial_rank(exps: Exponents) -> int:
    """Position of a monomial in the canonical order (independent of any cap)."""
    n = len(exps)
    k = sum(exps)
    return count_monomials(n, k - 1) + monomials_of_degree(n, k).index(exps)


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(exps: Exponents) -> str:
    """``x1^2*x2`` style text; empty string for the constant monomial."""
    parts = []
    for i, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial over Q in ``n`` variables."""

    __slots__ = ("n", "_terms", "_hash", "_degree")

    def __init__(self, n: int, terms: Mapping[Exponents, Scalar] | None = None):
        if n < 1:
            raise ValueError(f"polynomial dimension must be >= 1, got {n}")
        clean: dict[Exponents, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"monomial {exps} does not have length {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.n = n
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None
        self._degree = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Exponents, Fraction]) -> "Polynomial":
        # trusted constructor: terms already normalised and zero-free
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        p._degree = None
        return p

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        """The coordinate x_i (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        exps = [0] * n
        exps[i - 1] = 1
        return cls._raw(n, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Scalar = 1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]))

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        if self._degree is None:
            self._degree = max((sum(m) for m in self._terms), default=-1)
        return self._degree

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(m) for m in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def involves(self, i: int) -> bool:
        """True if x_i (1-based) occurs in some term."""
        return any(m[i - 1] for m in self._terms)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.n, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(self.n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[Exponents, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def partial(self, i: int) -> "Polynomial":
        """Formal derivative along x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"axis index {i} out of range 1..{self.n}")
        j = i - 1
        out = {}
        for m, c in self._terms.items():
            e = m[j]
            if e:
                out[m[:j] + (e - 1,) + m[j + 1:]] = c * e
        return Polynomial._raw(self.n, out)

    def homogeneous_part(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError(f"degree must be >= 0, got {k}")
        return Polynomial._raw(self.n, {m: c for m, c in self._terms.items() if sum(m) == k})

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose with x_i -> images[i-1]; images may live in another dimension."""
        if len(images) != self.n:
            raise ValueError(f"need {self.n} images, got {len(images)}")
        if not images:
            raise ValueError("no images")
        target = images[0].n
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(v: int, e: int) -> Polynomial:
            if (v, e) not in powers:
                powers[(v, e)] = images[v] ** e
            return powers[(v, e)]

        out = Polynomial.zero(target)
        for m, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for v, e in enumerate(m):
                if e:
                    term = term * power(v, e)
            out = out + term
        return out

    # -- comparison / text ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            mono = format_monomial(m)
            mag = format_coefficient(abs(c))
            if not mono:
                body = mag
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {str(self)!r})"


def _same_dim(a: Polynomial, b: Polynomial) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    _same_dim(a, b)
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _same_dim(a, b)
    return a * b


def poly_partial(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


def poly_homogeneous_part(p: Polynomial, k: int) -> Polynomial:
    return p.homogeneous_part(k)


def poly_sum(polys: Iterable[Polynomial], n: int) -> Polynomial:
    out = Polynomial.zero(n)
    for p in polys:
        out = out + p
    return out
