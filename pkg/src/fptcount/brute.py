"""Exhaustive reference counters. Slow on purpose; every fast path is checked against these."""
from __future__ import annotations

import math
from collections import Counter
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .errors import CapExceededError
from .graph import Coloring, ColorMultiset, Graph, is_connected_mask
from .properties import LabelledPattern, Property

BRUTE_SUBSET_CAP = math.comb(20, 6)


def _check_cap(n: int, k: int, cap: int | None) -> None:
    cap = BRUTE_SUBSET_CAP if cap is None else cap
    if math.comb(n, k) > cap:
        raise CapExceededError(f"C({n},{k}) = {math.comb(n, k)} subsets exceeds the brute-force cap {cap}")


def _pattern_of(g: Graph, order: Sequence[int]) -> LabelledPattern:
    return LabelledPattern.from_graph(g, order)


def brute_count_labelled(g: Graph, k: int, phi: Property, cap: int | None = None) -> int:
    """Distinct k-tuples whose labelled induced graph satisfies ``phi``."""
    if k > g.n:
        return 0
    _check_cap(g.n, k, cap)
    if phi.symmetric:
        return math.factorial(k) * brute_count(g, k, phi, cap)
    return sum(1 for U in combinations(range(g.n), k) for order in permutations(U)
               if phi(_pattern_of(g, order)))


def brute_count(g: Graph, k: int, phi: Property, cap: int | None = None) -> int:
    """k-subsets ``U`` with ``phi(G[U])``; needs a symmetric property."""
    if not phi.symmetric:
        raise ValueError(f"property {phi.name!r} is not symmetric; use brute_count_labelled")
    if k > g.n:
        return 0
    _check_cap(g.n, k, cap)
    return sum(1 for U in combinations(range(g.n), k) if phi(_pattern_of(g, U)))


def brute_count_motif(g: Graph, c: Coloring, motif: ColorMultiset, cap: int | None = None) -> int:
    """Connected k-subsets whose colour multiset is exactly ``motif``."""
    k = motif.k
    if k > g.n:
        raise ValueError(f"motif size {k} exceeds the number of vertices {g.n}")
    _check_cap(g.n, k, cap)
    want = Counter(motif.as_list())
    adj = g.adj_mask
    return sum(1 for U in combinations(range(g.n), k)
               if Counter(c.colors[v] for v in U) == want and is_connected_mask(adj, sum(1 << v for v in U)))


def brute_count_cliques(g: Graph, k: int) -> int:
    if k > g.n:
        return 0
    return sum(1 for U in combinations(range(g.n), k) if all(g.has_edge(a, b) for a, b in combinations(U, 2)))


def count_connected_subsets(g: Graph, k: int, vertices: Iterable[int] | None = None) -> int:
    """Connected induced k-subsets, each enumerated exactly once (ESU enumeration).

    Fast exact counter used where scanning all subsets is too slow.
    """
    if k <= 0:
        return 0
    allowed = sum(1 << v for v in (range(g.n) if vertices is None else vertices))
    adj = tuple(a & allowed for a in g.adj_mask)
    total = 0

    def extend(sub: int, nbhd: int, size: int, ext: int, above: int) -> None:
        nonlocal total
        if size == k:
            total += 1
            return
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            # exclusive neighbours of w: not in sub and not adjacent to sub
            new = adj[w] & above & ~sub & ~nbhd
            extend(sub | low, nbhd | adj[w], size + 1, ext | new, above)

    for v in range(g.n):
        if allowed >> v & 1:
            above = allowed & ~((1 << (v + 1)) - 1)
            extend(1 << v, adj[v], 1, adj[v] & above, above)
    return total


def colorful_subsets(g: Graph, c: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Subsets with exactly one vertex of each colour ``1..k``."""
    classes = [[v for v in range(g.n) if c[v] == col] for col in range(1, k + 1)]
    return [tuple(sorted(U)) for U in product(*classes)]


def brute_colorful_independent_sets(g: Graph, c: Sequence[int], k: int) -> int:
    return sum(1 for U in colorful_subsets(g, c, k) if not any(g.has_edge(a, b) for a, b in combinations(U, 2)))


def brute_colorful_connected(g: Graph, c: Sequence[int], k: int) -> int:
    adj = g.adj_mask
    return sum(1 for U in colorful_subsets(g, c, k) if is_connected_mask(adj, sum(1 << v for v in U)))
