"""k-perfect families of functions ``{0..n-1} -> {1..k}``.

Two constructions: a certified greedy cover (every k-subset checked
explicitly) for desk-scale ``n``, and a randomized family whose size makes the
probability of leaving some k-subset uncovered at most ``delta_h``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapExceededError

EXACT_SUBSET_CAP = 200_000
EXACT, RANDOMIZED = "exact-greedy", "randomized"


@dataclass(frozen=True)
class HashFamily:
    members: tuple[tuple[int, ...], ...]
    n: int
    k: int
    mode: str
    delta_h: float | None = None

    def __len__(self) -> int:
        return len(self.members)

    def table(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64).reshape(len(self.members), self.n)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "mode": self.mode, "delta_h": self.delta_h,
                           "members": [list(f) for f in self.members]})

    @classmethod
    def from_json(cls, text: str) -> "HashFamily":
        d = json.loads(text)
        return cls(tuple(tuple(f) for f in d["members"]), d["n"], d["k"], d["mode"], d.get("delta_h"))


def randomized_family_size(n: int, k: int, delta_h: float) -> int:
    """``ceil((k^k / k!) * (k ln n + ln(1/delta_h)))`` with the ratio kept exact."""
    return math.ceil(k ** k * (k * math.log(n) + math.log(1.0 / delta_h)) / math.factorial(k))


def _subsets(n: int, k: int) -> np.ndarray:
    count = math.comb(n, k)
    if count > EXACT_SUBSET_CAP:
        raise CapExceededError(f"C({n},{k}) = {count} exceeds the exhaustive cap {EXACT_SUBSET_CAP}")
    return np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(count, k)


def _injective(colored: np.ndarray) -> np.ndarray:
    """Rows (last axis) whose entries are pairwise distinct."""
    if colored.shape[-1] < 2:
        return np.ones(colored.shape[:-1], dtype=bool)
    s = np.sort(colored, axis=-1)
    return np.all(s[..., 1:] != s[..., :-1], axis=-1)


def build_family(n: int, k: int, mode: str = EXACT, delta_h: float | None = None, seed: int = 0) -> HashFamily:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng([seed, 0x4A5E])
    if mode == RANDOMIZED:
        if delta_h is None or not 0 < delta_h < 1:
            raise ValueError("randomized mode needs 0 < delta_h < 1")
        r = randomized_family_size(n, k, delta_h)
        members = rng.integers(1, k + 1, size=(r, n))
        return HashFamily(tuple(map(tuple, members.tolist())), n, k, RANDOMIZED, delta_h)
    if mode != EXACT:
        raise ValueError(f"unknown family mode {mode!r}")

    subsets = _subsets(n, k)
    uncovered = subsets
    members: list[tuple[int, ...]] = []
    while len(uncovered):
        batch = max(1, min(64, 4_000_000 // (len(uncovered) * k)))
        cands = rng.integers(1, k + 1, size=(batch, n))
        hits = _injective(cands[:, uncovered])  # (batch, |uncovered|)
        gains = hits.sum(axis=1)
        best = int(np.argmax(gains))
        if gains[best] == 0:
            continue
        members.append(tuple(cands[best].tolist()))
        uncovered = uncovered[~hits[best]]
    return HashFamily(tuple(members), n, k, EXACT)


def is_k_perfect(family: HashFamily, n: int | None = None, k: int | None = None) -> bool:
    n = family.n if n is None else n
    k = family.k if k is None else k
    subsets = _subsets(n, k)
    if not len(family.members):
        return len(subsets) == 0
    table = family.table()
    covered = np.zeros(len(subsets), dtype=bool)
    for f in table:
        covered |= _injective(f[subsets])
        if covered.all():
            return True
    return bool(covered.all())


def uncovered_subsets(family: HashFamily) -> list[tuple[int, ...]]:
    subsets = _subsets(family.n, family.k)
    covered = np.zeros(len(subsets), dtype=bool)
    for f in family.table():
        covered |= _injective(f[subsets])
    return [tuple(s) for s in subsets[~covered].tolist()]
