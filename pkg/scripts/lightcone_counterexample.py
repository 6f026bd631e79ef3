"""Signature (1,1): a proper subalgebra strictly between conf and Vect_poly.

In null coordinates u1 = (x1+x2)/2, u2 = (x1-x2)/2 the fields
f(u1, u2) d_u1 + g(u2) d_u2 form a Lie algebra containing every conformal
field.  Seeding the closure with u2 d_u1 therefore never saturates.

    python scripts/lightcone_counterexample.py --caps 2 3 4 5
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from confmax.closure import lie_closure, verify_maximality
from confmax.conformal import Metric, conformal_poly_basis, lightcone_transform
from confmax.fields import VectorField, format_field, vect_dimension


@dataclass
class CounterexampleConfig:
    caps: list[int] = field(default_factory=lambda: [2, 3, 4])
    seed_exponents: tuple[int, int] = (0, 1)
    workers: int = 1


def projectable_dimension(cap: int) -> int:
    """dim of {f(u1,u2) d_u1 + g(u2) d_u2} in degree <= cap."""
    return (cap + 1) * (cap + 2) // 2 + cap + 1


def is_projectable(X: VectorField) -> bool:
    return not lightcone_transform(X)[2].involves(1)


def run(cfg: CounterexampleConfig) -> list[dict]:
    m = Metric(1, 1)
    seed = lightcone_transform(VectorField.basis_field(cfg.seed_exponents, 1), inverse=True)
    rows = []
    for cap in cfg.caps:
        t0 = time.perf_counter()
        rep = verify_maximality(m, seed, cap, workers=cfg.workers)
        generic = lie_closure(conformal_poly_basis(m, cap) + [seed], cap, workers=cfg.workers)
        span = rep.final_span
        rows.append({
            "cap": cap,
            "verdict": rep.verdict,
            "dimension": span.dimension,
            "projectable": projectable_dimension(cap),
            "ambient": vect_dimension(2, cap),
            "inside": all(is_projectable(X) for X in span.fields()),
            "generic_agrees": generic.final_span.same_space(span),
            "seconds": round(time.perf_counter() - t0, 3),
        })
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--caps", type=int, nargs="+", default=CounterexampleConfig().caps)
    args = ap.parse_args()
    cfg = CounterexampleConfig(caps=args.caps)
    seed = lightcone_transform(VectorField.basis_field(cfg.seed_exponents, 1), inverse=True)
    print(f"seed: {format_field(seed)}")
    for r in run(cfg):
        print(f"cap {r['cap']}: verdict={r['verdict']} dim={r['dimension']} "
              f"(projectable {r['projectable']}, ambient {r['ambient']}) "
              f"inside={r['inside']} generic={r['generic_agrees']}  {r['seconds']}s")


if __name__ == "__main__":
    main()
