"""Executable hardness chain: k-cliques -> colourful independent sets -> colourful
connected sets -> plain connected k-subsets.

Coloured graphs are passed as ``(graph, colors)`` with colours ``1..K``.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Callable, Sequence

from .brute import brute_colorful_connected, colorful_subsets, count_connected_subsets
from .errors import CapExceededError, OracleInconsistencyError
from .graph import Graph, complement, connected_components, is_connected_mask
from .lattice import LatticeTable, Partition, lattice, meet, meet_matrix, solve_exact

REDUCTION_K_CAP = 6

# (graph, colors, K) -> number of colourful connected K-subsets
ColorfulConnectedOracle = Callable[[Graph, Sequence[int], int], int]
# (graph, K, allowed vertices) -> number of connected induced K-subsets
PlainCounter = Callable[[Graph, int, Sequence[int]], int]


def connectivity_partition(g: Graph, c: Sequence[int], U: Sequence[int], k: int) -> Partition:
    """Colours ``i, j`` share a block iff their vertices of ``U`` share a component of ``G[U]``."""
    colors = [c[u] for u in U]
    if sorted(colors) != list(range(1, k + 1)):
        raise ValueError(f"{tuple(U)} is not colourful for colours 1..{k}")
    comps = connected_components(g, U)
    return Partition.of([[c[u] for u in comp] for comp in comps])


def gadget_graph(g: Graph, c: Sequence[int], p: Partition) -> tuple[Graph, list[int]]:
    """Add one vertex per block ``X_j`` (colour ``k + j``) joined to every vertex coloured in ``X_j``."""
    k = p.k
    edges = set(g.edges)
    colors = list(c)
    for j, block in enumerate(p.blocks):
        x = g.n + j
        colors.append(k + 1 + j)
        edges.update((v, x) for v in range(g.n) if c[v] in block)
    return Graph.from_edges(g.n + len(p.blocks), edges), colors


def brute_oracle(g: Graph, c: Sequence[int], K: int) -> int:
    return brute_colorful_connected(g, c, K)


def _brute_plain(g: Graph, K: int, vertices: Sequence[int]) -> int:
    adj = g.adj_mask
    return sum(1 for U in combinations(vertices, K) if is_connected_mask(adj, sum(1 << v for v in U)))


def plain_counter_fast(g: Graph, K: int, vertices: Sequence[int]) -> int:
    return count_connected_subsets(g, K, vertices)


def plain_counter_brute(g: Graph, K: int, vertices: Sequence[int]) -> int:
    return _brute_plain(g, K, vertices)


def multicolour_connected_via_ie(g: Graph, c: Sequence[int], K: int,
                                 plain_counter: PlainCounter = plain_counter_fast) -> int:
    """Colourful connected K-subsets from uncoloured counts by inclusion-exclusion over colour sets.

    ``sum over nonempty C of (-1)^(K-|C|) N_K(G_C)`` with ``G_C`` the vertices coloured inside ``C``.
    """
    if K > REDUCTION_K_CAP * 2:
        raise CapExceededError(f"colour count {K} exceeds the reduction cap")
    total = 0
    for size in range(1, K + 1):
        sign = (-1) ** (K - size)
        for C in combinations(range(1, K + 1), size):
            keep = set(C)
            vertices = [v for v in range(g.n) if c[v] in keep]
            if len(vertices) >= K:
                total += sign * plain_counter(g, K, vertices)
    return total


def ie_oracle(plain_counter: PlainCounter = plain_counter_fast) -> ColorfulConnectedOracle:
    return lambda g, c, K: multicolour_connected_via_ie(g, c, K, plain_counter)


def z_vector(g: Graph, c: Sequence[int], k: int, oracle: ColorfulConnectedOracle,
             table: LatticeTable | None = None) -> list[int]:
    """``z_i`` = colourful connected ``(k + l_i)``-subsets of the gadget graph for ``P_i``."""
    table = lattice(k) if table is None else table
    out = []
    for p in table.parts:
        gi, ci = gadget_graph(g, c, p)
        out.append(oracle(gi, ci, k + len(p.blocks)))
    return out


def colorful_independent_sets_via_oracle(g: Graph, c: Sequence[int], k: int,
                                         oracle: ColorfulConnectedOracle = brute_oracle) -> int:
    """Solve ``A N = z`` over the partition lattice and read off the count for the all-singletons partition."""
    if k > REDUCTION_K_CAP:
        raise CapExceededError(f"k = {k} exceeds the reduction cap {REDUCTION_K_CAP}")
    table = lattice(k)
    a = meet_matrix(table)
    z = z_vector(g, c, k, oracle, table)
    n_vec = solve_exact(a, z)
    top = n_vec[-1]
    if top.denominator != 1 or top < 0:
        raise OracleInconsistencyError(f"linear system produced a non-count {top}")
    return int(top)


def classify_colorful(g: Graph, c: Sequence[int], k: int, table: LatticeTable | None = None) -> list[int]:
    """``N_j`` = colourful subsets whose connectivity partition is ``P_j`` (brute force)."""
    table = lattice(k) if table is None else table
    counts = [0] * len(table)
    for U in colorful_subsets(g, c, k):
        counts[table.index[connectivity_partition(g, c, U, k)]] += 1
    return counts


def clique_blowup(g: Graph, k: int) -> tuple[Graph, list[int]]:
    """Replace each vertex of the complement by a k-clique coloured ``1..k``.

    Copies of ``u`` and ``v`` are fully joined when ``uv`` is an edge of the
    complement. Vertex ``(u, i)`` gets index ``u * k + i``.
    """
    comp = complement(g)
    edges = set()
    for u in range(g.n):
        edges.update((u * k + i, u * k + j) for i, j in combinations(range(k), 2))
    for u, v in comp.edges:
        edges.update((u * k + i, v * k + j) for i in range(k) for j in range(k))
    colors = [i + 1 for _ in range(g.n) for i in range(k)]
    return Graph.from_edges(g.n * k, edges), colors


def count_cliques_via_reduction(g: Graph, k: int, plain_counter: PlainCounter = plain_counter_fast) -> int:
    """k-cliques of ``g`` through the full chain; each clique shows up ``k!`` times."""
    h, colors = clique_blowup(g, k)
    alpha = colorful_independent_sets_via_oracle(h, colors, k, ie_oracle(plain_counter))
    q, r = divmod(alpha, math.factorial(k))
    if r:
        raise OracleInconsistencyError(f"colourful independent set count {alpha} is not divisible by {k}!")
    return q


def check_claim_one(g: Graph, c: Sequence[int], k: int, p: Partition) -> bool:
    """Gadget ``W`` connected iff the meet of ``P(W minus gadget)`` with ``p`` is the bottom."""
    gi, ci = gadget_graph(g, c, p)
    K = k + len(p.blocks)
    adj = gi.adj_mask
    bottom = Partition.bottom(k)
    for W in colorful_subsets(gi, ci, K):
        U = [w for w in W if w < g.n]
        lhs = is_connected_mask(adj, sum(1 << w for w in W))
        rhs = meet(connectivity_partition(g, c, U, k), p) == bottom
        if lhs != rhs:
            return False
    return True


def check_linear_system(g: Graph, c: Sequence[int], k: int,
                        oracle: ColorfulConnectedOracle = brute_oracle) -> bool:
    """``A N = z`` with ``N`` from brute classification, and solving recovers ``N``."""
    table = lattice(k)
    a = meet_matrix(table)
    n_vec = classify_colorful(g, c, k, table)
    z = z_vector(g, c, k, oracle, table)
    forward = [sum(x * y for x, y in zip(row, n_vec)) for row in a] == z
    backward = solve_exact(a, z) == n_vec
    return forward and backward
