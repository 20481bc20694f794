"""Identity suites over the partition lattice and the hardness chain, collected into one report."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .brute import brute_colorful_independent_sets, brute_count_cliques
from .graph import random_graph
from .lattice import (
    DET_K_CAP, bareiss_det, bell, flip_last_entry, lattice, meet, meet_matrix, meet_matrix_det,
    mobius_bottom, mobius_matrix, mobius_recursive, product_formula,
)
from .reduction import (
    check_claim_one, check_linear_system, colorful_independent_sets_via_oracle,
    count_cliques_via_reduction, ie_oracle,
)


@dataclass
class VerifyConfig:
    k_max: int = 4
    seed: int = 0
    instances: int = 5
    inject_fault: bool = False
    timing: bool = False


@dataclass
class CheckResult:
    name: str
    params: dict[str, Any]
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float | None = None

    def to_dict(self, timing: bool) -> dict[str, Any]:
        out = {"name": self.name, "params": self.params, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _timed(name: str, params: dict, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    start = time.perf_counter()
    ok, detail = fn()
    return CheckResult(name, params, bool(ok), detail, (time.perf_counter() - start) * 1000)


def lattice_laws(k: int) -> tuple[bool, dict]:
    table = lattice(k)
    parts = table.parts
    ok = len(parts) == bell(k) and parts[0].rank == 0 and parts[-1].rank == k - 1
    for p in parts:
        ok &= meet(p, p) == p and meet(p, table.bottom) == table.bottom
        for q in parts:
            m = meet(p, q)
            ok &= m == meet(q, p) and p.leq(q) == (m == p)
    if k <= 4:
        ok &= all(meet(meet(p, q), r) == meet(p, meet(q, r)) for p in parts for q in parts for r in parts)
    return ok, {"partitions": len(parts)}


def mobius_check(k: int) -> tuple[bool, dict]:
    table = lattice(k)
    closed = [mobius_bottom(p) for p in table.parts]
    return closed == mobius_recursive(table), {"partitions": len(table)}


def determinant_check(k: int, fault: bool = False) -> tuple[bool, dict]:
    table = lattice(k)
    det = meet_matrix_det(k, flip_last_entry if fault else None)
    prod = math.prod(mobius_recursive(table))
    return det == prod and det != 0, {"det": str(det), "product": str(prod)}


def general_meet_matrix_check(k: int, rng: random.Random) -> tuple[bool, dict]:
    """Determinant of a meet-matrix with arbitrary integer weights against the product formula."""
    table = lattice(k)
    f = [rng.randint(-3, 3) for _ in table.parts]
    det = bareiss_det(meet_matrix(table, f))
    return det == product_formula(table, f, mobius_matrix(table)), {"det": str(det)}


def _random_colored(rng: random.Random, k: int, n_max: int = 7):
    n = rng.randint(k, n_max)
    g = random_graph(n, rng.uniform(0.2, 0.7), rng.randrange(1 << 30))
    c = [i + 1 for i in range(k)] + [rng.randint(1, k) for _ in range(n - k)]
    rng.shuffle(c)
    return g, c


def claim_check(k: int, rng: random.Random) -> tuple[bool, dict]:
    g, c = _random_colored(rng, k)
    return all(check_claim_one(g, c, k, p) for p in lattice(k).parts), {"n": g.n, "m": g.m}


def linear_system_check(k: int, rng: random.Random) -> tuple[bool, dict]:
    g, c = _random_colored(rng, k)
    ok = check_linear_system(g, c, k)
    got = colorful_independent_sets_via_oracle(g, c, k, ie_oracle())
    want = brute_colorful_independent_sets(g, c, k)
    return ok and got == want, {"n": g.n, "independent": want}


def clique_chain_check(k: int, rng: random.Random) -> tuple[bool, dict]:
    n = rng.randint(max(k, 2), 7)
    g = random_graph(n, rng.uniform(0.3, 0.9), rng.randrange(1 << 30))
    got, want = count_cliques_via_reduction(g, k), brute_count_cliques(g, k)
    return got == want, {"n": n, "m": g.m, "cliques": want, "reduced": got}


def run_verification(cfg: VerifyConfig) -> dict[str, Any]:
    rng = random.Random(cfg.seed)
    results: list[CheckResult] = []
    for k in range(1, cfg.k_max + 1):
        results.append(_timed("lattice_laws", {"k": k}, lambda k=k: lattice_laws(k)))
        results.append(_timed("mobius_closed_form", {"k": k}, lambda k=k: mobius_check(k)))
        if k <= DET_K_CAP:
            results.append(_timed("meet_matrix_determinant", {"k": k},
                                  lambda k=k: determinant_check(k, cfg.inject_fault)))
        if k <= 4:
            results.append(_timed("general_meet_matrix", {"k": k}, lambda k=k: general_meet_matrix_check(k, rng)))
    for k in range(1, min(cfg.k_max, 3) + 1):
        for i in range(cfg.instances):
            params = {"k": k, "instance": i}
            results.append(_timed("gadget_connectivity", params, lambda k=k: claim_check(k, rng)))
            results.append(_timed("linear_system", params, lambda k=k: linear_system_check(k, rng)))
            results.append(_timed("clique_chain", params, lambda k=k: clique_chain_check(k, rng)))
    failed = [r.name for r in results if not r.passed]
    return {
        "config": {"k_max": cfg.k_max, "seed": cfg.seed, "instances": cfg.instances,
                   "inject_fault": cfg.inject_fault},
        "checks": [r.to_dict(cfg.timing) for r in results],
        "passed": sum(r.passed for r in results),
        "failed": len(failed),
        "all_passed": not failed,
    }
