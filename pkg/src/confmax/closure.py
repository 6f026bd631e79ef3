"""Degree-capped Lie closures and the mechanised maximality argument.

Truncation policy: any bracket of degree above the cap is discarded.  A
reported span is therefore a lower bound for the true closure intersected
with Vect_{<=cap}; saturation is a sound certificate, non-saturation is
inconclusive.

Every field that enters a span is produced by a recorded ``TraceStep``
(generator lookup, bracket of two earlier steps, or a rational combination of
earlier steps), so a report can be replayed from its generators alone.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .conformal import (
    LinearMap,
    Metric,
    a_star,
    conformal_poly_basis,
    holomorphic_basis,
    is_conformal,
    lightcone_product_basis,
    so_conformal_basis,
    special_conformal_index,
    split_conformal_linear,
)
from .fields import (
    VectorField,
    format_field,
    monomial_fields,
    sparse_coordinates,
    stratum_dimension,
)
from .poly import format_coefficient
from .span import SpanBasis, express, span_of

log = logging.getLogger(__name__)


class InvariantBreach(RuntimeError):
    """An internal consistency check failed; indicates a bug, not a verdict."""


@dataclass(frozen=True)
class TraceStep:
    op: str  # "generator" | "bracket" | "combine"
    inputs: tuple[int, ...]
    output: VectorField
    coeffs: tuple[Fraction, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        out = {"op": self.op, "inputs": list(self.inputs), "output": format_field(self.output)}
        if self.coeffs:
            out["coeffs"] = [format_coefficient(c) for c in self.coeffs]
        if self.note:
            out["note"] = self.note
        return out


class Derivation:
    """Append-only record of fields derived from a fixed generator list."""

    def __init__(self, generators: Sequence[VectorField], cap: int):
        if not generators:
            raise ValueError("need at least one generator")
        n = generators[0].n
        if any(g.n != n for g in generators):
            raise ValueError("generators live on different R^n")
        self.n = n
        self.cap = cap
        self.generators = list(generators)
        self.steps: list[TraceStep] = []
        self.span = SpanBasis.empty(n, cap)
        self.independent: list[int] = []
        self.bracket_count = 0

    def field(self, k: int) -> VectorField:
        return self.steps[k].output

    def _record(self, step: TraceStep) -> int:
        self.steps.append(step)
        k = len(self.steps) - 1
        if step.output.degree <= self.cap:
            self.span, new = self.span.insert(step.output)
            if new:
                self.independent.append(k)
        return k

    def generator(self, k: int, note: str = "") -> int:
        return self._record(TraceStep("generator", (k,), self.generators[k], note=note))

    def bracket(self, i: int, j: int, value: VectorField | None = None, note: str = "") -> int:
        if value is None:
            value = self.field(i).bracket(self.field(j))
            self.bracket_count += 1
        return self._record(TraceStep("bracket", (i, j), value, note=note))

    def combine(self, coeffs: Mapping[int, Fraction], note: str = "") -> int:
        idx = tuple(sorted(coeffs))
        cs = tuple(Fraction(coeffs[k]) for k in idx)
        out = VectorField.zero(self.n)
        for k, c in zip(idx, cs):
            out = out + self.field(k).scale(c)
        return self._record(TraceStep("combine", idx, out, cs, note))

    def express(self, among: Sequence[int], target: VectorField, note: str = "") -> int:
        """Record target as a combination of the given steps; breach if impossible."""
        coeffs = express([sparse_coordinates(self.field(k)) for k in among], sparse_coordinates(target))
        if coeffs is None:
            raise InvariantBreach(f"{format_field(target)} is not in the span of steps {list(among)}")
        k = self.combine({among[j]: c for j, c in coeffs.items()}, note)
        if self.field(k) != target:
            raise InvariantBreach("combination does not reproduce its target")
        return k


def replay_trace(steps: Sequence[TraceStep], generators: Sequence[VectorField]) -> list[VectorField]:
    """Recompute every step from the generators; raise on any mismatch."""
    outs: list[VectorField] = []
    for k, s in enumerate(steps):
        if s.op == "generator":
            val = generators[s.inputs[0]]
        elif s.op == "bracket":
            i, j = s.inputs
            if not (i < k and j < k):
                raise InvariantBreach(f"step {k} refers forward")
            val = outs[i].bracket(outs[j])
        elif s.op == "combine":
            if any(i >= k for i in s.inputs):
                raise InvariantBreach(f"step {k} refers forward")
            val = VectorField.zero(s.output.n)
            for i, c in zip(s.inputs, s.coeffs):
                val = val + outs[i].scale(c)
        else:
            raise InvariantBreach(f"unknown trace op {s.op!r}")
        if val != s.output:
            raise InvariantBreach(f"step {k} ({s.op}) does not replay")
        outs.append(val)
    return outs


# -- reports ---------------------------------------------------------------

def _span_dict(s: SpanBasis) -> dict:
    return {"dimension": s.dimension, "full_dimension": s.full_dimension,
            "basis": [format_field(X) for X in s.fields()]}


@dataclass
class ClosureReport:
    generators: list[VectorField]
    degree_cap: int
    final_span: SpanBasis
    saturated: bool
    bracket_count: int
    rounds: int
    trace: list[TraceStep] = field(default_factory=list)
    discarded: int = 0

    @property
    def dimension(self) -> int:
        return self.final_span.dimension

    def to_dict(self, include_trace: bool = False) -> dict:
        out = {
            "generators": [format_field(g) for g in self.generators],
            "degree_cap": self.degree_cap,
            "dimension": self.dimension,
            "full_dimension": self.final_span.full_dimension,
            "saturated": self.saturated,
            "bracket_count": self.bracket_count,
            "discarded": self.discarded,
            "rounds": self.rounds,
            "span": _span_dict(self.final_span),
        }
        if include_trace:
            out["trace"] = [s.to_dict() for s in self.trace]
        return out


@dataclass
class Stage:
    name: str
    dimension: int
    target: int
    saturated: bool
    brackets: int = 0

    def to_dict(self) -> dict:
        return {"name": self.name, "dimension": self.dimension, "target": self.target,
                "saturated": self.saturated, "brackets": self.brackets}


@dataclass
class MaximalityReport:
    signature: Metric
    seed: VectorField
    cap: int
    stages: list[Stage]
    verdict: bool
    witness_trace: list[TraceStep]
    generators: list[VectorField]
    final_span: SpanBasis
    bracket_count: int = 0
    yz_bracket: VectorField | None = None
    scenario: str | None = None

    def to_dict(self, include_trace: bool = False) -> dict:
        out = {
            "signature": {"p": self.signature.p, "q": self.signature.q},
            "seed": format_field(self.seed),
            "cap": self.cap,
            "stages": [s.to_dict() for s in self.stages],
            "verdict": self.verdict,
            "dimension": self.final_span.dimension,
            "full_dimension": self.final_span.full_dimension,
            "bracket_count": self.bracket_count,
        }
        if self.scenario is not None:
            out["scenario"] = self.scenario
        if self.yz_bracket is not None:
            out["yz_bracket"] = format_field(self.yz_bracket)
        if include_trace:
            out["generators"] = [format_field(g) for g in self.generators]
            out["trace"] = [s.to_dict() for s in self.witness_trace]
        return out


# -- generic closure ---------------------------------------------------------

def _close(der: Derivation, reps: list[int], workers: int = 1,
           accept: Callable[[VectorField], bool] | None = None) -> tuple[int, int]:
    """Bracket representatives to a fixed point.  Returns (rounds, discarded).

    Pairs are visited in canonical order: for each newly added representative
    (in order), every earlier representative.  Brackets of a round may be
    evaluated concurrently; insertion is serial in that same order.
    """
    reps = list(reps)
    first_new = 0
    rounds = discarded = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while first_new < len(reps) and not der.span.is_full():
            rounds += 1
            pairs = [(reps[a], reps[b]) for b in range(first_new, len(reps)) for a in range(b)]
            first_new = len(reps)
            compute = lambda ab: der.field(ab[0]).bracket(der.field(ab[1]))
            values = list(pool.map(compute, pairs)) if pool else [compute(ab) for ab in pairs]
            der.bracket_count += len(pairs)
            for (i, j), W in zip(pairs, values):
                if W.is_zero():
                    continue
                if W.degree > der.cap or (accept is not None and not accept(W)):
                    discarded += 1
                    continue
                if der.span.contains(W):
                    continue
                reps.append(der.bracket(i, j, value=W))
                if der.span.is_full():
                    break
    finally:
        if pool:
            pool.shutdown()
    return rounds, discarded


def lie_closure(gens: Sequence[VectorField], cap: int, workers: int = 1,
                accept: Callable[[VectorField], bool] | None = None) -> ClosureReport:
    gens = list(gens)
    if not gens:
        raise ValueError("lie_closure needs at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators of mixed dimensions")
    if n < 2:
        raise ValueError("closures on R^1 are not supported (Vect_<=2(R) is already a subalgebra)")
    for g in gens:
        if g.degree > cap:
            raise ValueError(f"generator {format_field(g)} exceeds cap {cap}")
    der = Derivation(gens, cap)
    for k in range(len(gens)):
        der.generator(k)
    rounds, discarded = _close(der, der.independent, workers, accept)
    return ClosureReport(gens, cap, der.span, der.span.is_full(), der.bracket_count, rounds,
                         der.steps, discarded)


# -- the four stages of the maximality argument -----------------------------

def _lemma1_stage(der: Derivation, m: Metric, x_idx: int, translations: Sequence[int],
                  conformal: Sequence[int]) -> int:
    """Differentiate while a derivative stays non-conformal, then drop the conformal part."""
    seed_degree = der.field(x_idx).degree
    derivs: dict[int, int] = {}
    for _ in range(seed_degree + 2):
        X = der.field(x_idx)
        axis = next((i for i in range(1, m.n + 1) if not is_conformal(X.partial(i), m)), None)
        if axis is None:
            break
        if axis not in derivs:
            # d_i = h*(-e_i)
            derivs[axis] = der.combine({translations[axis - 1]: Fraction(-1)}, note=f"d{axis}")
        x_idx = der.bracket(derivs[axis], x_idx, note=f"derivative along x{axis}")
    else:
        raise InvariantBreach("derivative loop exceeded deg(seed) + 1 rounds")
    split = split_conformal_linear(der.field(x_idx), m)
    if split is None:
        raise InvariantBreach("no conformal complement: conformal-plus-linear solve infeasible")
    C, _ = split
    c_idx = der.express(conformal, C, note="conformal part")
    l_idx = der.combine({x_idx: Fraction(1), c_idx: Fraction(-1)}, note="linear remainder")
    L = der.field(l_idx)
    if not L.is_homogeneous(1) or L.is_zero() or is_conformal(L, m):
        raise InvariantBreach("reduction remainder is not a non-conformal linear field")
    return l_idx


def _linear_stage(der: Derivation, so_idx: Sequence[int], fixed: Sequence[int],
                  l_idx: int) -> tuple[bool, list[int], int]:
    """Iterate brackets of so(p,q)* with L until Vect_1 is spanned.  `fixed` must be linear."""
    n = der.n
    target = stratum_dimension(n, 1)
    lin = SpanBasis.empty(n, 1)
    elements = []
    for k in list(fixed) + [l_idx]:
        lin, new = lin.insert(der.field(k))
        if new:
            elements.append(k)
    queue = [l_idx]
    brackets = 0
    while queue and lin.dimension < target:
        y = queue.pop(0)
        for s in so_idx:
            W = der.field(s).bracket(der.field(y))
            brackets += 1
            lin, new = lin.insert(W)
            if new:
                k = der.bracket(s, y, value=W)
                elements.append(k)
                queue.append(k)
                if lin.dimension == target:
                    break
    der.bracket_count += brackets
    return lin.dimension == target, elements, brackets


def _monomials_from(der: Derivation, among: Sequence[int], k: int) -> list[int]:
    """Record each monomial field of degree k as a combination of `among`."""
    return [der.express(among, E, note=f"monomial {format_field(E)}") for E in monomial_fields(der.n, k)]


def _quadratic_stage(der: Derivation, m: Metric, linear_monomials: Sequence[int],
                     alpha_idx: Sequence[int]) -> tuple[bool, list[int], int, int]:
    """Divergence-free seed W = [Y, Z], then its orbit under Vect_1."""
    n = der.n
    # -x1 d1 = a_star(E_11); linear_monomials[0] is x1 d1
    y_idx = der.combine({linear_monomials[0]: Fraction(-1)}, note="Y = -x1 d1")
    if der.field(y_idx) != a_star(LinearMap.unit(n, 1, 1)):
        raise InvariantBreach("Y does not match A* for A = E_11")
    w_idx = der.bracket(y_idx, alpha_idx[1], note="W = [Y, Z], Z = (dx2)*")
    W = der.field(w_idx)
    if W.is_zero() or not W.divergence().is_zero():
        raise InvariantBreach(f"[Y, Z] = {format_field(W)} is not a nonzero divergence-free field")
    target = stratum_dimension(n, 2)
    quad = SpanBasis.empty(n, 2)
    elements = []
    for k in list(alpha_idx) + [w_idx]:
        quad, new = quad.insert(der.field(k))
        if new:
            elements.append(k)
    queue = [w_idx]
    brackets = 0
    while queue and quad.dimension < target:
        y = queue.pop(0)
        for e in linear_monomials:
            V = der.field(e).bracket(der.field(y))
            brackets += 1
            quad, new = quad.insert(V)
            if new:
                k = der.bracket(e, y, value=V)
                elements.append(k)
                queue.append(k)
                if quad.dimension == target:
                    break
    der.bracket_count += brackets
    return quad.dimension == target, elements, brackets, w_idx


def _ascend_stage(der: Derivation, linear_monomials: Sequence[int],
                  quadratic_monomials: Sequence[int]) -> list[Stage]:
    """Build each stratum k+1 from brackets of stratum k with quadratics."""
    n = der.n
    stages = []
    stratum = list(quadratic_monomials)
    for k in range(2, der.cap):
        target = stratum_dimension(n, k + 1)
        span = SpanBasis.empty(n, k + 1)
        fresh: list[int] = []
        brackets = 0

        def offer(i: int, j: int) -> None:
            nonlocal span, brackets
            V = der.field(i).bracket(der.field(j))
            brackets += 1
            span, new = span.insert(V)
            if new:
                fresh.append(der.bracket(i, j, value=V))

        for y in stratum:
            for q in quadratic_monomials:
                if span.dimension == target:
                    break
                offer(y, q)
        queue = list(fresh)
        while queue and span.dimension < target:
            y = queue.pop(0)
            for e in linear_monomials:
                if span.dimension == target:
                    break
                before = len(fresh)
                offer(e, y)
                queue.extend(fresh[before:])
        der.bracket_count += brackets
        stages.append(Stage(f"lemma2-ascent-{k + 1}", span.dimension, target,
                            span.dimension == target, brackets))
        if span.dimension != target:
            raise InvariantBreach(f"homogeneous stratum {k + 1} did not saturate "
                                  f"({span.dimension} of {target})")
        stratum = fresh
    return stages


# -- public stage operations ---------------------------------------------------

def _require_rank(n: int) -> None:
    if n < 2:
        raise ValueError("dimension n must be at least 2")


def lemma1_reduce(X: VectorField, m: Metric) -> VectorField:
    """Linear non-conformal field in the subalgebra generated by conf_poly and X."""
    _require_rank(X.n)
    if X.n != m.n:
        raise ValueError(f"field on R^{X.n} but metric {m} has n = {m.n}")
    if is_conformal(X, m):
        raise ValueError("field is conformal: nothing to reduce")
    gens = conformal_poly_basis(m, max(X.degree, 2)) + [X]
    der = Derivation(gens, max(X.degree, 2))
    idx = [der.generator(k) for k in range(len(gens))]
    return der.field(_lemma1_stage(der, m, idx[-1], idx[:m.n], idx[:-1]))


def generate_linear(L: VectorField, m: Metric, cap: int = 1) -> SpanBasis:
    n = m.n
    if L.n != n:
        raise ValueError(f"field on R^{L.n} but metric {m} has n = {n}")
    if L.is_zero() or not L.is_homogeneous(1) or is_conformal(L, m):
        raise ValueError("generate_linear needs a linear field outside (so(p,q) + R.1)*")
    gens = [X for X in so_conformal_basis(m) if X.degree <= 1] + [L]
    der = Derivation(gens, max(cap, 1))
    idx = [der.generator(k) for k in range(len(gens))]
    n_so = n * (n - 1) // 2
    _linear_stage(der, idx[n:n + n_so], idx[n:n + n_so + 1], idx[-1])
    return der.span


def _contains_all(s: SpanBasis, fields: Sequence[VectorField]) -> bool:
    return all(X.degree <= s.degree_cap and s.contains(X) for X in fields)


def generate_quadratic(linear_span: SpanBasis, m: Metric) -> SpanBasis:
    n = m.n
    if linear_span.n != n or not _contains_all(linear_span, monomial_fields(n, 1)):
        raise ValueError("generate_quadratic needs a span containing Vect_1")
    alphas = [so_conformal_basis(m)[special_conformal_index(m, i)] for i in range(1, n + 1)]
    base = linear_span.fields()
    der = Derivation(base + alphas, max(linear_span.degree_cap, 2))
    idx = [der.generator(k) for k in range(len(base) + n)]
    lin = _monomials_from(der, idx[:len(base)], 1)
    ok, *_ = _quadratic_stage(der, m, lin, idx[len(base):])
    if not ok:
        raise InvariantBreach("divergence-free orbit did not fill Vect_2")
    return der.span


def lemma2_ascend(base: SpanBasis, cap: int) -> SpanBasis:
    n = base.n
    if n < 2:
        raise ValueError("ascent needs n >= 2: Vect_<=2(R) is a proper subalgebra of Vect_poly(R)")
    low = [X for k in range(3) for X in monomial_fields(n, k)]
    if not _contains_all(base, low):
        raise ValueError("lemma2_ascend needs a span containing Vect_<=2")
    gens = base.fields()
    der = Derivation(gens, max(cap, base.degree_cap))
    idx = [der.generator(k) for k in range(len(gens))]
    lin = _monomials_from(der, idx, 1)
    quad = _monomials_from(der, idx, 2)
    _ascend_stage(der, lin, quad)
    return der.span


def verify_maximality(m: Metric, seed: VectorField, cap: int, workers: int = 1) -> MaximalityReport:
    """Replay the maximality argument inside <conf_poly cap-basis, seed>.

    Stages: derivative reduction to a linear field, so(p,q)-orbit filling Vect_1,
    the [Y, Z] orbit filling Vect_2, then stratum-by-stratum ascent.  When a
    stage cannot fill its stratum (possible in signature (1,1), where
    so(1,1) acts reducibly on gl(2)) the remaining work is handed to the
    generic truncated closure, which is still a sound certificate.
    """
    n = m.n
    if seed.n != n:
        raise ValueError(f"seed on R^{seed.n} but metric {m} has n = {n}")
    if seed.degree > cap:
        raise ValueError(f"seed degree {seed.degree} exceeds cap {cap}")
    if is_conformal(seed, m):
        raise ValueError("seed lies in the subalgebra")
    gens = conformal_poly_basis(m, cap) + [seed]
    der = Derivation(gens, cap)
    idx = [der.generator(k) for k in range(len(gens))]
    n_so = n * (n - 1) // 2
    translations = idx[:n]
    so_idx = idx[n:n + n_so]
    dilation = idx[n + n_so]
    stages: list[Stage] = []
    w_field = None

    l_idx = _lemma1_stage(der, m, idx[-1], translations, idx[:-1])
    stages.append(Stage("lemma1-reduction", 1, 1, True, 0))
    log.debug("linear remainder %s", der.field(l_idx))

    ok, lin_elems, nb = _linear_stage(der, so_idx, so_idx + [dilation], l_idx)
    stages.append(Stage("linear-saturation", len(lin_elems), n * n, ok, nb))
    if ok and cap >= 2:
        lin = _monomials_from(der, lin_elems, 1)
        alpha_idx = [idx[special_conformal_index(m, i)] for i in range(1, n + 1)]
        ok, quad_elems, nb, w_idx = _quadratic_stage(der, m, lin, alpha_idx)
        w_field = der.field(w_idx)
        stages.append(Stage("quadratic-saturation", len(quad_elems), stratum_dimension(n, 2), ok, nb))
        if ok:
            quad = _monomials_from(der, quad_elems, 2)
            stages += _ascend_stage(der, lin, quad)
    if not der.span.is_full():
        before = der.bracket_count
        _close(der, der.independent, workers)
        stages.append(Stage("generic-closure-fallback", der.span.dimension,
                            der.span.full_dimension, der.span.is_full(), der.bracket_count - before))
    verdict = der.span.is_full()
    return MaximalityReport(m, seed, cap, stages, verdict, der.steps, gens, der.span,
                            der.bracket_count, w_field)


# -- dimension-two chains ------------------------------------------------------

SCENARIOS = ("so31-in-holomorphic", "so22-in-product-sl2", "product-sl2-in-product")


def scenario_spaces(which: str, cap: int) -> tuple[Metric, list[VectorField], list[VectorField], VectorField]:
    """(metric, base subalgebra basis, ambient basis, default seed) at the cap."""
    if which == "so31-in-holomorphic":
        m = Metric(2, 0)
        return m, so_conformal_basis(m), holomorphic_basis(cap), holomorphic_basis(3)[6]
    if which == "so22-in-product-sl2":
        m = Metric(1, 1)
        return (m, so_conformal_basis(m), lightcone_product_basis(cap, 2),
                lightcone_product_basis(3, 0)[3])
    if which == "product-sl2-in-product":
        m = Metric(1, 1)
        return (m, lightcone_product_basis(cap, 2), lightcone_product_basis(cap, cap),
                lightcone_product_basis(0, 3)[-1])
    raise ValueError(f"unknown scenario {which!r}; expected one of {', '.join(SCENARIOS)}")


def scenario_n2_chain(which: str, cap: int, seed: VectorField | None = None,
                      workers: int = 1) -> MaximalityReport:
    m, base, ambient, default_seed = scenario_spaces(which, cap)
    seed = default_seed if seed is None else seed
    if seed.n != 2:
        raise ValueError("scenario seeds live on R^2")
    if seed.degree > cap:
        raise ValueError(f"seed degree {seed.degree} exceeds cap {cap}")
    ambient_span = span_of(ambient, 2, cap)
    base_span = span_of([X for X in base if X.degree <= cap], 2, cap)
    if not ambient_span.contains(seed):
        raise ValueError("seed outside ambient subalgebra")
    if base_span.contains(seed):
        raise ValueError("seed lies in the subalgebra")
    gens = [X for X in base if X.degree <= cap] + [seed]
    report = lie_closure(gens, cap, workers=workers, accept=ambient_span.contains)
    verdict = report.final_span.same_space(ambient_span)
    stages = [Stage("ambient", ambient_span.dimension, ambient_span.dimension, True, 0),
              Stage("closure", report.dimension, ambient_span.dimension, verdict, report.bracket_count)]
    return MaximalityReport(m, seed, cap, stages, verdict, report.trace, gens, report.final_span,
                            report.bracket_count, scenario=which)
