"""Empirical coverage of the randomised estimator: fraction of seeds within eps of the exact count."""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from fptcount import approx_count_labelled, brute_count_labelled
from fptcount.properties import get_property
from fptcount.graph import Graph, random_graph


@dataclass
class SweepConfig:
    n: int = 10
    p: float = 0.4
    k: int = 4
    property: str = "connected"
    epsilon: float = 0.1
    delta: float = 0.05
    seeds: int = 50
    graph_seed: int = 0
    petersen: bool = False


def run(cfg: SweepConfig) -> dict:
    g = Graph.petersen() if cfg.petersen else random_graph(cfg.n, cfg.p, cfg.graph_seed)
    phi = get_property(cfg.property)
    truth = brute_count_labelled(g, cfg.k, phi)
    start = time.perf_counter()
    values = [float(approx_count_labelled(g, cfg.k, phi, cfg.epsilon, cfg.delta, seed=s).value)
              for s in range(cfg.seeds)]
    inside = sum(abs(v - truth) <= cfg.epsilon * truth for v in values) if truth else sum(v == 0 for v in values)
    return {
        "config": asdict(cfg),
        "truth": truth,
        "coverage": inside / cfg.seeds,
        "nominal": 1 - cfg.delta,
        "mean_relative_error": sum(abs(v - truth) for v in values) / (cfg.seeds * truth) if truth else 0.0,
        "seconds_per_run": (time.perf_counter() - start) / cfg.seeds,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(SweepConfig()).items():
        if isinstance(default, bool):
            ap.add_argument(f"--{name.replace('_', '-')}", action="store_true")
        else:
            ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
