"""Random-seed sweep of the maximality certificate over several signatures.

    python scripts/maximality_sweep.py --seeds 20 --cap 3
"""

from __future__ import annotations

import argparse
import json
import random
import time
from dataclasses import asdict, dataclass, field

from confmax.closure import lie_closure, replay_trace, verify_maximality
from confmax.conformal import Metric, so_conformal_basis
from confmax.sampling import random_nonconformal


@dataclass
class SweepConfig:
    signatures: list[tuple[int, int]] = field(default_factory=lambda: [(2, 0), (1, 1), (3, 0), (2, 1)])
    seeds: int = 20
    seed_degree: int = 3
    cap: int = 3
    rng_seed: int = 20240611
    workers: int = 1
    cross_check: bool = True


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for p, q in cfg.signatures:
        m = Metric(p, q)
        rng = random.Random(f"{cfg.rng_seed}-{p}-{q}")
        for k in range(cfg.seeds):
            seed = random_nonconformal(rng, m, cfg.seed_degree)
            t0 = time.perf_counter()
            rep = verify_maximality(m, seed, cfg.cap, workers=cfg.workers)
            replay_trace(rep.witness_trace, rep.generators)
            row = {"signature": [p, q], "index": k, "seed": str(seed), "verdict": rep.verdict,
                   "dimension": rep.final_span.dimension, "brackets": rep.bracket_count,
                   "stages": [s.name for s in rep.stages], "seconds": round(time.perf_counter() - t0, 3)}
            if cfg.cross_check and m.n == 2:
                generic = lie_closure(so_conformal_basis(m) + [seed], cfg.cap, workers=cfg.workers)
                row["generic_agrees"] = generic.final_span.same_space(rep.final_span)
            rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    ap.add_argument("--cap", type=int, default=SweepConfig.cap)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = SweepConfig(seeds=args.seeds, cap=args.cap, workers=args.workers)
    t0 = time.perf_counter()
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    for r in rows:
        extra = "" if "generic_agrees" not in r else f" generic={r['generic_agrees']}"
        print(f"({r['signature'][0]},{r['signature'][1]}) #{r['index']:2d} verdict={r['verdict']} "
              f"dim={r['dimension']} brackets={r['brackets']}{extra}  {r['seed']}")
    bad = [r for r in rows if not r["verdict"]]
    print(f"{len(rows) - len(bad)}/{len(rows)} certificates, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
