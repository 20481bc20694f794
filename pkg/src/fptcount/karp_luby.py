"""Karp-Luby estimation of ``|A_1 u ... u A_m|`` from per-set oracles.

Each trial picks a set with probability proportional to its size, draws a
uniform element of it, and accepts when the chosen set is the first set (in
the fixed enumeration order) containing that element. ``S * accepted/trials``
is an unbiased estimate of the union size.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from .errors import NoWitnessError, OracleInconsistencyError


class SetSystem:
    """Indexed family ``A_0..A_{m-1}`` exposed through oracles.

    Subclasses implement ``m``, ``size``, ``sample`` and ``contains``. The
    batch hooks have loop defaults and exist so systems can vectorise.
    """

    m: int

    def size(self, i: int) -> int:
        raise NotImplementedError

    def sample(self, i: int, rng: np.random.Generator) -> Hashable:
        raise NotImplementedError

    def contains(self, i: int, x: Hashable) -> bool:
        raise NotImplementedError

    def sizes(self) -> list[int]:
        return [self.size(i) for i in range(self.m)]

    @property
    def multiplicity_bound(self) -> int:
        """Upper bound on how many sets share one element; ``m`` always works."""
        return self.m

    def first_index(self, x: Hashable) -> int | None:
        for j in range(self.m):
            if self.contains(j, x):
                return j
        return None

    def group_ids(self, indices: np.ndarray) -> np.ndarray:
        """Sampling groups: sets in one group share a random stream, so a
        parallel split must never cut a group. Default: one group per set."""
        return indices

    def sample_batch(self, indices: np.ndarray, seed: int) -> list:
        """One uniform element of ``A_i`` per entry ``i`` of the sorted ``indices``.

        The draws for a group must depend only on ``seed`` and that group's
        entries.
        """
        out = []
        uniq, counts = np.unique(indices, return_counts=True)
        for i, count in zip(uniq.tolist(), counts.tolist()):
            rng = np.random.default_rng([seed, 1, i])
            out.extend(self.sample(i, rng) for _ in range(count))
        return out

    def accepted_batch(self, indices: np.ndarray, samples: Sequence) -> int:
        accepted = 0
        for i, x in zip(indices.tolist(), samples):
            if not self.contains(i, x):
                raise OracleInconsistencyError(f"element {x!r} sampled from set {i} fails its membership test")
            if self.first_index(x) == i:
                accepted += 1
        return accepted


class ExplicitSetSystem(SetSystem):
    """Materialised sets, for tests and small audits."""

    def __init__(self, sets: Iterable[Iterable[Hashable]]):
        self.sets = [sorted(set(s)) for s in sets]
        self._lookup = [set(s) for s in self.sets]
        self.m = len(self.sets)

    def size(self, i):
        return len(self.sets[i])

    def sample(self, i, rng):
        if not self.sets[i]:
            raise NoWitnessError(f"set {i} is empty")
        return self.sets[i][int(rng.integers(0, len(self.sets[i])))]

    def contains(self, i, x):
        return x in self._lookup[i]

    def elements(self, i):
        return iter(self.sets[i])


@dataclass
class Estimate:
    value: Fraction
    epsilon: float
    delta: float
    trials: int
    seed: int
    m: int = 0
    total_size: int = 0
    accepted: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)

    def scaled(self, factor: Fraction | int) -> "Estimate":
        return Estimate(self.value * Fraction(factor), self.epsilon, self.delta, self.trials, self.seed,
                        self.m, self.total_size, self.accepted, dict(self.extra))

    def to_dict(self) -> dict[str, Any]:
        out = {
            "value": float(self.value),
            "value_exact": f"{self.value.numerator}/{self.value.denominator}",
            "epsilon": self.epsilon,
            "delta": self.delta,
            "trials": self.trials,
            "m": self.m,
            "seed": self.seed,
            "total_size": self.total_size,
            "accepted": self.accepted,
        }
        out.update(self.extra)
        return out


def trial_count(multiplicity: int, epsilon: float, delta: float) -> int:
    """``ceil((3 M / eps^2) ln(2/delta))`` zero-one estimator trials."""
    return math.ceil(3 * multiplicity / epsilon ** 2 * math.log(2 / delta))


def _draw_indices(cum: list[int], total: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    if total < 1 << 62:
        r = rng.integers(0, total, size=trials)
        return np.searchsorted(np.array(cum, dtype=np.int64), r, side="right")
    # arbitrary-precision fallback
    from bisect import bisect_right
    from .colorful import _randbelow

    return np.array(sorted(bisect_right(cum, _randbelow(rng, total)) for _ in range(trials)), dtype=np.int64)


def estimate_union(system: SetSystem, epsilon: float, delta: float, seed: int = 0, workers: int = 1) -> Estimate:
    """(1 +- epsilon)-estimate of the union size with probability at least 1 - delta."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    sizes = [int(s) for s in system.sizes()]
    total = sum(sizes)
    if total == 0:
        return Estimate(Fraction(0), epsilon, delta, 0, seed, system.m, 0, 0)
    mult = max(1, min(system.m, system.multiplicity_bound))
    trials = trial_count(mult, epsilon, delta)

    cum, run = [], 0
    for s in sizes:
        run += s
        cum.append(run)
    rng = np.random.default_rng([seed, 0])
    indices = np.sort(_draw_indices(cum, total, trials, rng))

    if workers <= 1:
        samples = system.sample_batch(indices, seed)
        accepted = system.accepted_batch(indices, samples)
    else:
        groups = system.group_ids(indices)
        order = np.argsort(groups, kind="stable")
        indices, groups = indices[order], groups[order]
        chunks = [c for c in np.array_split(np.unique(groups), workers) if len(c)]
        parts = [np.sort(indices[np.isin(groups, c)]) for c in chunks]

        def run_part(part):
            return system.accepted_batch(part, system.sample_batch(part, seed))

        with ThreadPoolExecutor(max_workers=workers) as pool:
            accepted = sum(pool.map(run_part, parts))
    value = Fraction(total * accepted, trials)
    return Estimate(value, epsilon, delta, trials, seed, system.m, total, accepted)


def exact_union(system: SetSystem) -> int:
    """Exact ``|A_1 u ... u A_m|`` for systems that can list their members."""
    if system.m == 0:
        return 0
    if not hasattr(system, "elements"):
        raise TypeError("system cannot enumerate its sets; use an explicit system or membership scan")
    seen: set = set()
    for i in range(system.m):
        seen.update(system.elements(i))
    return len(seen)
