"""Conformal fields of the flat metric g = sum_i a_i (dx^i)^2 of signature (p, q).

Conformality is defined by L_X g = alpha_X g.  Written out for a diagonal
metric, (L_X g)_ij = a_j d_i X^j + a_i d_j X^i, so X is conformal iff

    a_j d_i X^j + a_i d_j X^i = 0   (i != j)
    d_i X^i = d_j X^j

and then alpha_X = 2 d_1 X^1.  The diagonal condition carries no a_i factors:
with them, the Euler field would fail in mixed signature.

Generators use the sign conventions

    h*     = -sum_i h^i d_i
    A*     = -sum_ij A^i_j x^j d_i
    alpha* = alpha(x) sum_i x^i d_i - 1/2 (sum_i a_i (x^i)^2) alpha#,
             alpha# = sum_i a_i alpha_i d_i

for which A -> A* is a Lie algebra homomorphism gl(n) -> Vect_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .fields import VectorField, monomial_fields, sparse_coordinates
from .poly import Polynomial, Scalar, monomial_rank
from .span import express, nullspace

Covector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Metric:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be non-negative, got ({self.p}, {self.q})")
        if self.p + self.q < 2:
            raise ValueError(f"need n = p + q >= 2, got ({self.p}, {self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def a(self) -> tuple[int, ...]:
        return (1,) * self.p + (-1,) * self.q

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class LinearMap:
    """Square rational matrix A with entries[i][j] = A^i_j (0-based storage)."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _frac_matrix(self.entries))
        n = len(self.entries)
        if n == 0 or any(len(r) != n for r in self.entries):
            raise ValueError("LinearMap must be a non-empty square matrix")

    @classmethod
    def zeros(cls, n: int) -> "LinearMap":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "LinearMap":
        """Matrix unit E_ij, 1-based."""
        return cls([[int((r, c) == (i - 1, j - 1)) for c in range(n)] for r in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def _check(self, other: "LinearMap") -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        return LinearMap([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "LinearMap":
        return LinearMap([[c * a for a in r] for r in self.entries])

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        cols = list(zip(*other.entries))
        return LinearMap([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries])

    def commutator(self, other: "LinearMap") -> "LinearMap":
        return self @ other - other @ self

    def transpose(self) -> "LinearMap":
        return LinearMap(list(zip(*self.entries)))

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.n)), Fraction(0))

    def g_conjugate(self, m: Metric) -> "LinearMap":
        """A^dagger = g^-1 A^T g; for diagonal g its (i,j) entry is a_i a_j A_ji."""
        a = m.a
        return LinearMap([[a[i] * a[j] * self.entries[j][i] for j in range(self.n)]
                          for i in range(self.n)])

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(v for r in self.entries for v in r)


@dataclass(frozen=True)
class ConformalVerdict:
    is_conformal: bool
    factor: Polynomial | None = None


def _check_dim(X: VectorField, m: Metric) -> None:
    if X.n != m.n:
        raise ValueError(f"field on R^{X.n} but metric {m} has n = {m.n}")


def lie_derivative_metric(X: VectorField, m: Metric) -> tuple[tuple[Polynomial, ...], ...]:
    _check_dim(X, m)
    a, n = m.a, m.n
    d = [[X[j].partial(i) for j in range(1, n + 1)] for i in range(1, n + 1)]  # d[i][j] = d_i X^j
    return tuple(tuple(d[i][j].scale(a[j]) + d[j][i].scale(a[i]) for j in range(n))
                 for i in range(n))


def conformal_check(X: VectorField, m: Metric) -> ConformalVerdict:
    L = lie_derivative_metric(X, m)
    a, n = m.a, m.n
    for i in range(n):
        for j in range(i + 1, n):
            if L[i][j]:
                return ConformalVerdict(False)
    # L_ii = 2 a_i d_i X^i must equal alpha * a_i for one alpha
    factor = L[0][0].scale(a[0])
    for i in range(1, n):
        if L[i][i].scale(a[i]) != factor:
            return ConformalVerdict(False)
    return ConformalVerdict(True, factor)


def is_conformal(X: VectorField, m: Metric) -> bool:
    return conformal_check(X, m).is_conformal


def conformal_equations(X: VectorField, m: Metric) -> list[Polynomial]:
    """Polynomials that vanish identically exactly when X is conformal."""
    _check_dim(X, m)
    a, n = m.a, m.n
    eqs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            eqs.append(X[j].partial(i).scale(a[j - 1]) + X[i].partial(j).scale(a[i - 1]))
    for i in range(1, n):
        eqs.append(X[i].partial(i) - X[i + 1].partial(i + 1))
    return eqs


# -- generators ------------------------------------------------------------

def h_star(h: Sequence[Scalar]) -> VectorField:
    n = len(h)
    return VectorField([Polynomial.constant(n, -Fraction(c)) for c in h])


def a_star(A: LinearMap) -> VectorField:
    n = A.n
    comps = []
    for i in range(n):
        comps.append(Polynomial(n, {tuple(int(k == j) for k in range(n)): -A.entries[i][j]
                                    for j in range(n)}))
    return VectorField(comps)


def linear_form(alpha: Sequence[Scalar]) -> Polynomial:
    n = len(alpha)
    return Polynomial(n, {tuple(int(k == j) for k in range(n)): alpha[j] for j in range(n)})


def sharp(alpha: Sequence[Scalar], m: Metric) -> VectorField:
    n = m.n
    return VectorField([Polynomial.constant(n, m.a[i] * Fraction(alpha[i])) for i in range(n)])


def alpha_star(alpha: Sequence[Scalar], m: Metric) -> VectorField:
    n = m.n
    if len(alpha) != n:
        raise ValueError(f"covector of length {len(alpha)} for n = {n}")
    ax = linear_form(alpha)
    quad = Polynomial(n, {tuple(2 * int(k == i) for k in range(n)): m.a[i] for i in range(n)})
    euler = VectorField.euler(n)
    return VectorField([ax * e - quad * s.scale(Fraction(1, 2))
                        for e, s in zip(euler.components, sharp(alpha, m).components)])


def unit_covector(n: int, i: int) -> Covector:
    return tuple(Fraction(int(k == i - 1)) for k in range(n))


def so_pq_basis(m: Metric) -> list[LinearMap]:
    """M_ij = a_j E_ij - a_i E_ji for i < j, lexicographic in (i, j)."""
    n, a = m.n, m.a
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(LinearMap.unit(n, i, j).scale(a[j - 1]) - LinearMap.unit(n, j, i).scale(a[i - 1]))
    return out


def so_conformal_basis(m: Metric) -> list[VectorField]:
    """Translations, rotations/boosts, dilation, special conformal fields."""
    n = m.n
    out = [h_star(unit_covector(n, i)) for i in range(1, n + 1)]
    out += [a_star(M) for M in so_pq_basis(m)]
    out.append(a_star(LinearMap.identity(n)))
    out += [alpha_star(unit_covector(n, i), m) for i in range(1, n + 1)]
    return out


def special_conformal_index(m: Metric, i: int) -> int:
    """Position of (dx^i)* inside so_conformal_basis(m)."""
    n = m.n
    return n + n * (n - 1) // 2 + 1 + (i - 1)


@lru_cache(maxsize=None)
def _conformal_kernel(m: Metric, k: int) -> tuple[VectorField, ...]:
    fields = monomial_fields(m.n, k)
    images = []
    for X in fields:
        img = {}
        for e, eq in enumerate(conformal_equations(X, m)):
            for mono, c in eq.terms.items():
                img[(e, monomial_rank(mono))] = c
        images.append(img)
    kernel = nullspace(images)
    return tuple(sum((fields[j].scale(c) for j, c in v.items()), VectorField.zero(m.n))
                 for v in kernel)


def conformal_stratum(m: Metric, k: int) -> list[VectorField]:
    """Canonical basis of the homogeneous degree-k conformal fields."""
    return list(_conformal_kernel(m, k))


def conformal_dimension(m: Metric, cap: int) -> int:
    """dim(conf(p,q) intersected with Vect_{<=cap}), from the linear equations."""
    # the equations map Vect_k into polynomials of degree k-1, so strata decouple
    return sum(len(_conformal_kernel(m, k)) for k in range(cap + 1))


def conformal_poly_basis(m: Metric, cap: int) -> list[VectorField]:
    """so_conformal_basis(m) followed by conformal fields of degree 3..cap.

    The second part is empty for n > 2.
    """
    out = so_conformal_basis(m) if cap >= 2 else [X for X in so_conformal_basis(m) if X.degree <= cap]
    for k in range(3, cap + 1):
        out += conformal_stratum(m, k)
    return out


def split_conformal_linear(X: VectorField, m: Metric) -> tuple[VectorField, VectorField] | None:
    """Solve X = C + L with C conformal and L homogeneous linear.

    Returns (C, L), or None when X is not in conf + Vect_1.
    """
    _check_dim(X, m)
    d = max(X.degree, 1)
    conf = conformal_poly_basis(m, d)
    lin = monomial_fields(m.n, 1)
    coeffs = express([sparse_coordinates(Y) for Y in conf + lin], sparse_coordinates(X))
    if coeffs is None:
        return None
    C = VectorField.zero(m.n)
    for k, c in coeffs.items():
        if k < len(conf):
            C = C + conf[k].scale(c)
    return C, X - C


# -- gl(n) decomposition and the quadratic splitting -----------------------

def decompose_gl(A: LinearMap, m: Metric) -> tuple[LinearMap, LinearMap, LinearMap]:
    """A = scalar part + g-skew part + traceless g-self-conjugate part."""
    if A.n != m.n:
        raise ValueError(f"matrix of size {A.n} for metric with n = {m.n}")
    n = A.n
    dag = A.g_conjugate(m)
    scalar = LinearMap.identity(n).scale(A.trace() / n)
    skew = (A - dag).scale(Fraction(1, 2))
    selfconj = (A + dag).scale(Fraction(1, 2)) - scalar
    return scalar, skew, selfconj


def divergence_covector(X: VectorField) -> Covector:
    """Coefficients of the linear form div X (X homogeneous quadratic)."""
    div = X.divergence()
    n = X.n
    return tuple(div.coefficient(tuple(int(k == j) for k in range(n))) for j in range(n))


def quadratic_split(X: VectorField, m: Metric) -> tuple[VectorField, VectorField]:
    _check_dim(X, m)
    if not X.is_homogeneous(2):
        raise ValueError("quadratic_split needs a homogeneous quadratic field")
    conf = alpha_star(divergence_covector(X), m).scale(Fraction(1, m.n))
    return conf, X - conf


# -- dimension two -----------------------------------------------------------

def _require_plane(X: VectorField) -> None:
    if X.n != 2:
        raise ValueError(f"expected a field on R^2, got R^{X.n}")


def holomorphic_check(X: VectorField) -> bool:
    """Cauchy-Riemann equations for X^1 + i X^2."""
    _require_plane(X)
    u, v = X[1], X[2]
    return u.partial(1) == v.partial(2) and u.partial(2) == -v.partial(1)


def lightcone_transform(X: VectorField, inverse: bool = False) -> VectorField:
    """Rewrite X in null coordinates x1 + x2 = 2u1, x1 - x2 = 2u2.

    The output polynomials use x1, x2 as names for u1, u2.  With
    ``inverse=True`` the map goes back from null to standard coordinates.
    """
    _require_plane(X)
    x1, x2 = Polynomial.var(2, 1), Polynomial.var(2, 2)
    if not inverse:
        # x = (u1 + u2, u1 - u2); components U = 1/2 (X1 + X2, X1 - X2)
        Y = X.substitute([x1 + x2, x1 - x2])
        half = Fraction(1, 2)
        return VectorField([(Y[1] + Y[2]).scale(half), (Y[1] - Y[2]).scale(half)])
    half = Fraction(1, 2)
    Y = X.substitute([(x1 + x2).scale(half), (x1 - x2).scale(half)])
    return VectorField([Y[1] + Y[2], Y[1] - Y[2]])


def product_form_check(X: VectorField) -> bool:
    """True iff X = U1(x1) d1 + U2(x2) d2."""
    _require_plane(X)
    return not X[1].involves(2) and not X[2].involves(1)


def holomorphic_basis(cap: int) -> list[VectorField]:
    """Real basis of fields X^1 + i X^2 = c z^k, k <= cap: z^k then i z^k."""
    x, y = Polynomial.var(2, 1), Polynomial.var(2, 2)
    i_unit = Polynomial.constant(2, 1)
    re, im = i_unit, Polynomial.zero(2)
    out = []
    for k in range(cap + 1):
        out.append(VectorField([re, im]))
        out.append(VectorField([-im, re]))
        re, im = re * x - im * y, re * y + im * x
    return out


def lightcone_product_basis(cap1: int, cap2: int) -> list[VectorField]:
    """Fields (u1)^k d_u1 (k <= cap1) and (u2)^k d_u2 (k <= cap2), in x coordinates."""
    out = []
    for k in range(cap1 + 1):
        out.append(lightcone_transform(VectorField.basis_field((k, 0), 1), inverse=True))
    for k in range(cap2 + 1):
        out.append(lightcone_transform(VectorField.basis_field((0, k), 2), inverse=True))
    return out
