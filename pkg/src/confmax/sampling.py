"""Seeded random polynomial fields for property checks and sweeps."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .conformal import Metric, conformal_poly_basis, is_conformal
from .fields import VectorField
from .poly import Polynomial, monomials_up_to


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, 3))


def random_field(rng: random.Random, n: int, degree: int, terms: int | None = None) -> VectorField:
    """Sum of `terms` random monomial fields of degree <= degree (may cancel to 0)."""
    monos = monomials_up_to(n, degree)
    terms = rng.randint(1, 4) if terms is None else terms
    comps: list[dict] = [{} for _ in range(n)]
    for _ in range(terms):
        m = rng.choice(monos)
        i = rng.randrange(n)
        comps[i][m] = comps[i].get(m, 0) + random_rational(rng)
    return VectorField([Polynomial(n, c) for c in comps])


def random_combination(rng: random.Random, fields: Sequence[VectorField]) -> VectorField:
    out = VectorField.zero(fields[0].n)
    for X in fields:
        if rng.random() < 0.6:
            out = out + X.scale(random_rational(rng))
    return out


def random_conformal(rng: random.Random, m: Metric, degree: int) -> VectorField:
    return random_combination(rng, conformal_poly_basis(m, degree))


def random_nonconformal(rng: random.Random, m: Metric, degree: int) -> VectorField:
    """Random field of degree in 1..degree that fails the conformal predicate."""
    while True:
        X = random_field(rng, m.n, degree)
        if X.degree >= 1 and not is_conformal(X, m):
            return X
