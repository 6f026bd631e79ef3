"""Exact polynomial vector fields, conformal algebras so(p+1,q+1) and
degree-capped certificates of their maximality in polynomial vector fields."""

from .closure import (
    ClosureReport,
    InvariantBreach,
    MaximalityReport,
    lie_closure,
    replay_trace,
    scenario_n2_chain,
    verify_maximality,
)
from .conformal import LinearMap, Metric, conformal_check, so_conformal_basis
from .dsl import ParseError, parse_field, print_field
from .fields import VectorField
from .poly import Polynomial

__all__ = [
    "ClosureReport",
    "InvariantBreach",
    "LinearMap",
    "MaximalityReport",
    "Metric",
    "ParseError",
    "Polynomial",
    "VectorField",
    "conformal_check",
    "lie_closure",
    "parse_field",
    "print_field",
    "replay_trace",
    "scenario_n2_chain",
    "so_conformal_basis",
    "verify_maximality",
]
