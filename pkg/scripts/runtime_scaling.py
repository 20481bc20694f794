"""Runtime of the estimator against n for fixed k, next to brute force, on seeded G(n, p) graphs."""
from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass, field

from fptcount import approx_count_labelled, brute_count_labelled
from fptcount.properties import get_property
from fptcount.brute import BRUTE_SUBSET_CAP
from fptcount.graph import random_graph


@dataclass
class ScalingConfig:
    ns: list[int] = field(default_factory=lambda: [8, 12, 16, 20, 24])
    k: int = 3
    p: float = 0.3
    property: str = "connected"
    epsilon: float = 0.2
    delta: float = 0.1
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=ScalingConfig().ns)
    ap.add_argument("-k", type=int, default=3)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--property", default="connected")
    ap.add_argument("--eps", dest="epsilon", type=float, default=0.2)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    cfg = ScalingConfig(**vars(ap.parse_args()))
    phi = get_property(cfg.property)

    out = csv.writer(sys.stdout)
    out.writerow(["n", "m", "k", "estimate", "trials", "family_size", "approx_s", "exact", "exact_s"])
    for n in cfg.ns:
        g = random_graph(n, cfg.p, cfg.seed + n)
        start = time.perf_counter()
        est = approx_count_labelled(g, cfg.k, phi, cfg.epsilon, cfg.delta, seed=cfg.seed)
        approx_s = time.perf_counter() - start
        exact, exact_s = "", ""
        if math.comb(n, cfg.k) <= BRUTE_SUBSET_CAP:
            start = time.perf_counter()
            exact = brute_count_labelled(g, cfg.k, phi)
            exact_s = f"{time.perf_counter() - start:.3f}"
        out.writerow([n, g.m, cfg.k, f"{float(est.value):.2f}", est.trials, est.extra["family_size"],
                      f"{approx_s:.3f}", exact, exact_s])


if __name__ == "__main__":
    main()
