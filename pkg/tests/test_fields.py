from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given, strategies as st

import oracles
from confmax.conformal import Metric, alpha_star, linear_form
from confmax.fields import (
    VectorField,
    divergence,
    field_basis,
    homogeneous_part,
    lie_bracket,
    sparse_coordinates,
    vect_dimension,
    vf_coordinates,
    vf_from_coordinates,
)
from confmax.poly import Polynomial
from confmax.sampling import random_rational

from conftest import fields, rationals

import random

P = Polynomial
x1, x2 = P.var(2, 1), P.var(2, 2)
zero = P.zero(2)
d1 = VectorField([P.constant(2, 1), zero])


def test_bracket_affine_pair():
    assert lie_bracket(d1, VectorField([x1, zero])) == d1


def test_bracket_against_sympy_oracle():
    Y = VectorField([-x1, zero])
    Z = VectorField([x1 * x2, (x2 * x2 - x1 * x1).scale(Fraction(1, 2))])
    xs = oracles.coords(2)
    expected = oracles.bracket(oracles.to_sympy(Y), oracles.to_sympy(Z), xs)
    # frozen from the oracle: x1^2 d2
    assert expected == [0, xs[0] ** 2]
    assert lie_bracket(Y, Z) == VectorField([zero, x1 * x1])


@given(fields(2))
def test_self_bracket_vanishes(X):
    assert lie_bracket(X, X).is_zero()


def test_divergence_examples():
    assert divergence(VectorField.euler(2)) == P.constant(2, 2)
    assert divergence(VectorField([zero, x1 * x1])).is_zero()


@pytest.mark.parametrize("p,q", [(2, 0), (1, 1), (3, 0), (2, 1), (1, 2), (4, 0), (2, 2), (1, 3)])
def test_divergence_of_special_conformal(p, q):
    m = Metric(p, q)
    rng = random.Random(f"div-{p}-{q}")
    alpha = [random_rational(rng) for _ in range(m.n)]
    X = alpha_star(alpha, m)
    assert divergence(X) == linear_form(alpha).scale(m.n)
    # independent route: sympy divergence of the formula typed in by hand
    xs = oracles.coords(m.n)
    ref = oracles.alpha_star([sp.Rational(a.numerator, a.denominator) for a in alpha], m.a, xs)
    assert oracles.to_sympy(X) == ref
    assert sp.expand(sum(sp.diff(c, x) for c, x in zip(ref, xs)) - m.n * sum(
        sp.Rational(a.numerator, a.denominator) * x for a, x in zip(alpha, xs))) == 0


def test_homogeneous_part_examples():
    X = d1 + VectorField([x1, zero])
    assert homogeneous_part(X, 1) == VectorField([x1, zero])
    assert homogeneous_part(X, 0) == d1
    assert homogeneous_part(X, 5).is_zero()


def test_coordinate_lengths():
    assert vect_dimension(2, 1) == 6
    assert vect_dimension(2, 3) == 20 == 2 * comb(5, 2)
    assert len(vf_coordinates(VectorField.zero(2), 3)) == 20
    assert not any(vf_coordinates(VectorField.zero(2), 3))


def test_coordinate_order():
    assert field_basis(2, 1) == (((0, 0), 1), ((0, 0), 2), ((1, 0), 1), ((1, 0), 2), ((0, 1), 1), ((0, 1), 2))
    assert vf_coordinates(VectorField([zero, x2]), 1) == [0, 0, 0, 0, 0, 1]


def test_coordinates_reject_high_degree():
    with pytest.raises(ValueError):
        vf_coordinates(VectorField([x1 * x1, zero]), 1)


@given(fields(3))
def test_coordinates_round_trip(X):
    assert vf_from_coordinates(vf_coordinates(X, 3), 3, 3) == X
    assert vf_from_coordinates(sparse_coordinates(X), 3) == X


@given(fields(2), fields(2), rationals, rationals)
def test_coordinates_linear(X, Y, a, b):
    lhs = vf_coordinates(X.scale(a) + Y.scale(b), 3)
    rhs = [a * u + b * v for u, v in zip(vf_coordinates(X, 3), vf_coordinates(Y, 3))]
    assert lhs == rhs


@given(fields(2), fields(2), fields(2))
def test_jacobi(X, Y, Z):
    total = X.bracket(Y).bracket(Z) + Y.bracket(Z).bracket(X) + Z.bracket(X).bracket(Y)
    assert total.is_zero()


@given(fields(3, max_degree=2), fields(3, max_degree=2))
def test_bilinear_antisymmetric(X, Y):
    assert X.bracket(Y) == -Y.bracket(X)
    assert (X + Y).bracket(Y) == X.bracket(Y)


@given(st.integers(0, 3), st.integers(0, 3), fields(2, max_degree=3), fields(2, max_degree=3))
def test_bracket_degree_bound(k, l, X, Y):
    Xk, Yl = X.homogeneous_part(k), Y.homogeneous_part(l)
    W = Xk.bracket(Yl)
    if not Xk.is_zero() and not Yl.is_zero() and not W.is_zero():
        assert W.degree <= k + l - 1
        assert W.is_homogeneous(k + l - 1)


@given(fields(2), fields(2))
def test_divergence_of_bracket(X, Y):
    assert X.bracket(Y).divergence() == X.act(Y.divergence()) - Y.act(X.divergence())


def test_mixed_dimension_errors():
    with pytest.raises(ValueError):
        lie_bracket(d1, VectorField.euler(3))
    with pytest.raises(ValueError):
        VectorField([x1, P.var(3, 1)])
