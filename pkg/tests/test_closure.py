import json
import random

import pytest

import oracles
from confmax.closure import (
    InvariantBreach,
    generate_linear,
    generate_quadratic,
    lemma1_reduce,
    lemma2_ascend,
    lie_closure,
    replay_trace,
    scenario_n2_chain,
    verify_maximality,
)
from confmax.conformal import (
    LinearMap,
    Metric,
    a_star,
    alpha_star,
    conformal_check,
    conformal_poly_basis,
    lightcone_transform,
    so_conformal_basis,
    unit_covector,
)
from confmax.fields import VectorField, monomial_fields, monomial_fields_up_to
from confmax.poly import Polynomial
from confmax.sampling import random_nonconformal
from confmax.span import SpanBasis, span_of

P = Polynomial
x1, x2 = P.var(2, 1), P.var(2, 2)
zero = P.zero(2)
d1 = VectorField([P.constant(2, 1), zero])
d2 = VectorField([zero, P.constant(2, 1)])
E2 = Metric(2, 0)
M11 = Metric(1, 1)


def vf(*comps):
    return VectorField(list(comps))


# -- lie_closure ----------------------------------------------------------------

def test_closure_of_so31_is_stable():
    rep = lie_closure(so_conformal_basis(E2), 5)
    assert rep.dimension == 6 and not rep.saturated


def test_closure_of_vect2_against_brute_force():
    gens = monomial_fields_up_to(2, 2)
    xs = oracles.coords(2)
    assert oracles.brute_closure_rank([oracles.to_sympy(X) for X in gens], 3, xs) == 20
    rep = lie_closure(gens, 3)
    assert rep.dimension == 20 and rep.saturated


def test_closure_of_translations():
    rep = lie_closure([d1, d2], 3)
    assert rep.dimension == 2 and not rep.saturated


def test_closure_errors():
    with pytest.raises(ValueError):
        lie_closure([vf(x1 * x1 * x1, zero)], 2)
    with pytest.raises(ValueError):
        lie_closure([d1, VectorField.euler(3)], 2)
    with pytest.raises(ValueError):
        lie_closure([VectorField([P.var(1, 1)])], 2)


def test_closure_report_is_bracket_stable():
    rep = lie_closure(so_conformal_basis(E2) + [vf(x1 * x2, zero)], 2)
    basis = rep.final_span.fields()
    for i, X in enumerate(basis):
        for Y in basis[i:]:
            W = X.bracket(Y)
            assert W.degree > 2 or rep.final_span.contains(W)


def test_closure_replay():
    rep = lie_closure(so_conformal_basis(M11) + [vf(x1 * x1, zero)], 3)
    outs = replay_trace(rep.trace, rep.generators)
    assert span_of([X for X in outs if X.degree <= 3], 2, 3).same_space(rep.final_span)


def test_monotone_in_cap():
    gens = so_conformal_basis(E2) + [vf(zero, x1 * x2)]
    low = [lie_closure(gens, cap).final_span for cap in (2, 3, 4)]
    for k in range(3):
        dims = [s.dimension_up_to(k) for s in low]
        assert dims == sorted(dims)


# -- derivative reduction --------------------------------------------------------

def test_lemma1_linear_seed_moves_by_conformal():
    L = lemma1_reduce(vf(zero, x2), E2)
    assert L.is_homogeneous(1) and not conformal_check(L, E2).is_conformal
    assert conformal_check(L - vf(zero, x2), E2).is_conformal


def test_lemma1_one_derivative_step():
    L = lemma1_reduce(vf(zero, x1 * x1), E2)
    assert L.is_homogeneous(1) and not conformal_check(L, E2).is_conformal
    assert conformal_check(L - vf(zero, x1.scale(2)), E2).is_conformal


def test_lemma1_absorbs_conformal_summand():
    X = alpha_star(unit_covector(2, 1), E2) + vf(zero, x2)
    L = lemma1_reduce(X, E2)
    assert L.is_homogeneous(1)
    assert conformal_check(L - vf(zero, x2), E2).is_conformal


def test_lemma1_rejects_conformal():
    with pytest.raises(ValueError):
        lemma1_reduce(VectorField.euler(2), E2)


def test_lemma1_holomorphic_cubic_plus_linear():
    cubic = conformal_poly_basis(E2, 3)[-2]
    L = lemma1_reduce(cubic + vf(zero, x2), E2)
    assert conformal_check(L - vf(zero, x2), E2).is_conformal


# -- linear and quadratic stages ---------------------------------------------------------

def _brute_linear_rank(m, L):
    xs = oracles.coords(m.n)
    gens = [oracles.to_sympy(X) for X in so_conformal_basis(m) if X.degree == 1] + [oracles.to_sympy(L)]
    return oracles.brute_closure_rank(gens, 1, xs)


def test_generate_linear_examples():
    s = generate_linear(vf(zero, x2), E2)
    assert all(s.contains(X) for X in monomial_fields(2, 1))
    assert _brute_linear_rank(E2, vf(zero, x2)) == 4

    Y = a_star(LinearMap.unit(2, 1, 1))
    s = generate_linear(Y, M11)
    assert all(s.contains(X) for X in monomial_fields(2, 1))
    assert _brute_linear_rank(M11, Y) == 4

    with pytest.raises(ValueError):
        generate_linear(VectorField.euler(2), E2)


def test_generate_linear_null_direction_in_11():
    # u2 d_u1 written in x coordinates: the so(1,1)-orbit is a line
    L = lightcone_transform(VectorField.basis_field((0, 1), 1), inverse=True)
    s = generate_linear(L, M11)
    assert s.dimension == 3 + 2  # constants + {dilation, boost, L}
    assert _brute_linear_rank(M11, L) == 3


def test_yz_bracket():
    Y = a_star(LinearMap.unit(2, 1, 1))
    Z = alpha_star(unit_covector(2, 2), E2)
    W = Y.bracket(Z)
    assert W == vf(zero, x1 * x1) and W.divergence().is_zero()


def test_generate_quadratic():
    s = generate_quadratic(span_of(monomial_fields_up_to(2, 1), 2, 1), E2)
    assert s.dimension == 6 + 6
    m = Metric(3, 0)
    s = generate_quadratic(span_of(monomial_fields_up_to(3, 1), 3, 1), m)
    assert s.dimension_up_to(2) == 30 and s.dimension == 12 + 18
    with pytest.raises(ValueError):
        generate_quadratic(span_of([d1], 2, 1), E2)


@pytest.mark.parametrize("n,cap,dim", [(2, 3, 20), (2, 4, 30), (3, 3, 60)])
def test_lemma2_ascend(n, cap, dim):
    s = lemma2_ascend(span_of(monomial_fields_up_to(n, 2), n, 2), cap)
    assert s.dimension == dim and s.is_full()


def test_lemma2_preconditions():
    with pytest.raises(ValueError):
        lemma2_ascend(SpanBasis.empty(1, 2).extend(monomial_fields_up_to(1, 2)), 3)
    with pytest.raises(ValueError):
        lemma2_ascend(span_of(monomial_fields_up_to(2, 1), 2, 2), 3)


def test_vect2_on_the_line_is_a_subalgebra():
    # why n = 1 is excluded: [x^a d, x^b d] = (b - a) x^(a+b-1) d stays in degree <= 2 for a, b <= 2
    basis = monomial_fields_up_to(1, 2)
    s = SpanBasis.empty(1, 3).extend(basis)
    for X in basis:
        for Y in basis:
            assert s.contains(X.bracket(Y))


# -- verify_maximality -----------------------------------------------------------------------

def test_verify_plane():
    rep = verify_maximality(E2, vf(zero, x2), 3)
    assert rep.verdict and rep.final_span.dimension == 20
    assert [s.name for s in rep.stages] == ["lemma1-reduction", "linear-saturation",
                                             "quadratic-saturation", "lemma2-ascent-3"]
    generic = lie_closure(so_conformal_basis(E2) + [vf(zero, x2)], 3)
    assert generic.final_span.same_space(rep.final_span)


def test_verify_mixed_three():
    x = [P.var(3, i) for i in (1, 2, 3)]
    seed = VectorField([P.zero(3), x[0] * x[0], P.zero(3)])
    rep = verify_maximality(Metric(2, 1), seed, 3)
    assert rep.verdict and rep.final_span.dimension == 60


def test_verify_rejects_conformal_seed():
    with pytest.raises(ValueError, match="seed lies in the subalgebra"):
        verify_maximality(E2, VectorField.euler(2), 3)


def test_verify_cap_one():
    rep = verify_maximality(E2, vf(zero, x2), 1)
    assert rep.verdict and rep.final_span.dimension == 6


@pytest.mark.parametrize("pq", [(2, 0), (1, 1), (3, 0), (2, 1)])
def test_specialised_agrees_with_generic(pq):
    m = Metric(*pq)
    rng = random.Random(f"agree-{pq}")
    for cap in (2, 3):
        for _ in range(2 if m.n == 3 else 4):
            seed = random_nonconformal(rng, m, cap)
            rep = verify_maximality(m, seed, cap)
            generic = lie_closure(so_conformal_basis(m) + [seed], cap)
            assert rep.final_span.same_space(generic.final_span)


def test_witness_replay():
    rep = verify_maximality(M11, vf(x1 * x2, x2 * x2 * x1), 3)
    outs = replay_trace(rep.witness_trace, rep.generators)
    assert span_of([X for X in outs if X.degree <= 3], 2, 3).same_space(rep.final_span)


def test_tampered_trace_is_caught():
    rep = verify_maximality(E2, vf(zero, x2), 3)
    steps = list(rep.witness_trace)
    k = next(i for i, s in enumerate(steps) if s.op == "bracket")
    bad = steps[k].__class__(steps[k].op, steps[k].inputs, steps[k].output.scale(2))
    steps[k] = bad
    with pytest.raises(InvariantBreach):
        replay_trace(steps, rep.generators)


def test_report_determinism_across_workers():
    seed = vf(x1 * x2, x1 * x1 * x2)
    docs = [json.dumps(verify_maximality(M11, seed, 3, workers=w).to_dict(include_trace=True))
            for w in (1, 1, 4)]
    assert docs[0] == docs[1] == docs[2]
    docs = [json.dumps(lie_closure(monomial_fields_up_to(2, 2), 4, workers=w).to_dict(True)) for w in (1, 3)]
    assert docs[0] == docs[1]


# -- the projectable subalgebra in signature (1,1) ----------------------------------------------

def _projectable(X):
    """Second null-coordinate component depends on u2 only."""
    return not lightcone_transform(X)[2].involves(1)


def test_projectable_fields_contain_conf11():
    for X in conformal_poly_basis(M11, 4):
        assert _projectable(X)
    cap = 3
    exps = [(a, b) for a in range(cap + 1) for b in range(cap + 1 - a)]
    P_basis = [lightcone_transform(VectorField.basis_field(e, 1), inverse=True) for e in exps]
    P_basis += [lightcone_transform(VectorField.basis_field((0, k), 2), inverse=True) for k in range(cap + 1)]
    s = span_of(P_basis, 2, cap)
    assert s.dimension == 10 + 4
    for X in P_basis:
        for Y in P_basis:
            W = X.bracket(Y)
            if W.degree <= cap:
                assert s.contains(W) and _projectable(W)


def test_projectable_seed_does_not_saturate():
    seed = lightcone_transform(VectorField.basis_field((0, 1), 1), inverse=True)
    assert not conformal_check(seed, M11).is_conformal
    for cap in (3, 4):
        rep = verify_maximality(M11, seed, cap)
        assert not rep.verdict
        assert rep.stages[1].name == "linear-saturation" and not rep.stages[1].saturated
        assert all(_projectable(X) for X in rep.final_span.fields())
        assert rep.final_span.dimension == (cap + 1) * (cap + 2) // 2 + cap + 1


# -- scenarios ------------------------------------------------------------------------------------

@pytest.mark.parametrize("which,cap,dim", [
    ("so31-in-holomorphic", 4, 10), ("so31-in-holomorphic", 3, 8),
    ("so22-in-product-sl2", 3, 7), ("so22-in-product-sl2", 4, 8),
    ("product-sl2-in-product", 3, 8), ("product-sl2-in-product", 4, 10),
])
def test_scenarios(which, cap, dim):
    rep = scenario_n2_chain(which, cap)
    assert rep.verdict and rep.final_span.dimension == dim
    replay_trace(rep.witness_trace, rep.generators)


def test_scenario_errors():
    with pytest.raises(ValueError, match="unknown scenario"):
        scenario_n2_chain("so33", 3)
    with pytest.raises(ValueError, match="outside ambient"):
        scenario_n2_chain("so31-in-holomorphic", 3, seed=vf(zero, x2))
    with pytest.raises(ValueError, match="lies in the subalgebra"):
        scenario_n2_chain("so22-in-product-sl2", 3, seed=VectorField.euler(2))
