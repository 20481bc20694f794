"""Counting and uniform sampling of colourful pattern copies.

Given a host coloured by ``f`` and a colourful pattern coloured by ``omega``,
a witness maps every pattern label ``u`` to a host vertex of colour
``omega(u)`` such that pattern edges land on host edges. Because ``omega`` is
injective the map is automatically injective, and witnesses are in bijection
with colourful host subgraphs colour-preserving isomorphic to the pattern.

The DP runs over a nice tree decomposition of the pattern. A table entry at a
node assigns host vertices to the bag and stores the number of ways to extend
the assignment to the vertices already forgotten below it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import NoWitnessError
from .graph import Coloring, Graph
from .properties import LabelledPattern
from .treewidth import FORGET, INTRODUCE, JOIN, LEAF, nice_decomposition

INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class ColoredPattern:
    pattern: LabelledPattern
    omega: tuple[int, ...]  # colour of label i is omega[i - 1]

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(self.omega))
        if len(self.omega) != self.pattern.k:
            raise ValueError("omega must colour every pattern label")
        if len(set(self.omega)) != len(self.omega):
            raise ValueError("pattern colouring must be injective (the pattern has to be colourful)")

    @property
    def k(self) -> int:
        return self.pattern.k


class ColoredHost:
    """Host graph with its colour classes indexed once.

    ``allowed`` restricts the host to an induced subgraph without renumbering.
    """

    def __init__(self, graph: Graph, coloring: Coloring | Iterable[int], allowed: Iterable[bool] | None = None):
        colors = tuple(coloring.colors if isinstance(coloring, Coloring) else coloring)
        if len(colors) != graph.n:
            raise ValueError("colouring length does not match the host")
        self.graph = graph
        self.colors = colors
        mask = [True] * graph.n if allowed is None else list(allowed)
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            if mask[v]:
                classes.setdefault(c, []).append(v)
        self.classes = {c: tuple(vs) for c, vs in classes.items()}
        self.adj = graph.adj_mask

    def candidates(self, color: int) -> tuple[int, ...]:
        return self.classes.get(color, ())


def _randbelow(rng: np.random.Generator, bound: int) -> int:
    if bound < INT64_SAFE:
        return int(rng.integers(0, bound))
    bits = bound.bit_length()
    while True:
        x = 0
        for _ in range(0, bits, 62):
            x = (x << 62) | int(rng.integers(0, 1 << 62))
        x >>= (-(bits) % 62)
        if x < bound:
            return x


class ColorfulDP:
    """DP tables for one (host, coloured pattern) pair."""

    def __init__(self, host: ColoredHost, cp: ColoredPattern):
        self.host = host
        self.cp = cp
        self.nice = nice_decomposition(cp.pattern)
        self.tables: list[dict[tuple[int, ...], int]] = []
        self._build()
        self.count: int = self.tables[-1].get((), 0)
        self._groups: dict[int, dict[tuple, tuple[list, list]]] = {}
        self._arrays = None

    def _build(self) -> None:
        pattern_adj = self.cp.pattern.adj_mask()
        host_adj = self.host.adj
        for nd in self.nice.nodes:
            if nd.kind == LEAF:
                table = {(): 1}
            elif nd.kind == INTRODUCE:
                child_nd = self.nice.nodes[nd.children[0]]
                child = self.tables[nd.children[0]]
                u = nd.vertex
                pos = nd.bag.index(u)
                nbr_pos = [j for j, w in enumerate(child_nd.bag) if pattern_adj[u - 1] >> (w - 1) & 1]
                cand = self.host.candidates(self.cp.omega[u - 1])
                table = {}
                for a, val in child.items():
                    need = 0
                    for j in nbr_pos:
                        need |= 1 << a[j]
                    for v in cand:
                        if host_adj[v] & need == need:
                            table[a[:pos] + (v,) + a[pos:]] = val
            elif nd.kind == FORGET:
                child_nd = self.nice.nodes[nd.children[0]]
                child = self.tables[nd.children[0]]
                pos = child_nd.bag.index(nd.vertex)
                table = {}
                for a, val in child.items():
                    key = a[:pos] + a[pos + 1:]
                    table[key] = table.get(key, 0) + val
            elif nd.kind == JOIN:
                left = self.tables[nd.children[0]]
                right = self.tables[nd.children[1]]
                if len(right) < len(left):
                    left, right = right, left
                table = {a: val * right[a] for a, val in left.items() if a in right}
            else:  # pragma: no cover
                raise AssertionError(nd.kind)
            self.tables.append(table)

    # -- scalar sampling -------------------------------------------------

    def _forget_groups(self, idx: int) -> dict[tuple, tuple[list, list]]:
        groups = self._groups.get(idx)
        if groups is None:
            nd = self.nice.nodes[idx]
            child_nd = self.nice.nodes[nd.children[0]]
            pos = child_nd.bag.index(nd.vertex)
            groups = {}
            for a, val in self.tables[nd.children[0]].items():
                rows, cum = groups.setdefault(a[:pos] + a[pos + 1:], ([], []))
                rows.append(a)
                cum.append((cum[-1] if cum else 0) + val)
            self._groups[idx] = groups
        return groups

    def sample(self, rng: np.random.Generator) -> tuple[int, ...]:
        """One witness uniformly at random, as host vertices indexed by ``label - 1``."""
        if self.count == 0:
            raise NoWitnessError("no colourful copy of the pattern exists in the host")
        out = [-1] * self.cp.k
        stack = [(len(self.nice.nodes) - 1, ())]
        while stack:
            idx, a = stack.pop()
            nd = self.nice.nodes[idx]
            if nd.kind == LEAF:
                continue
            if nd.kind == INTRODUCE:
                pos = nd.bag.index(nd.vertex)
                stack.append((nd.children[0], a[:pos] + a[pos + 1:]))
            elif nd.kind == FORGET:
                rows, cum = self._forget_groups(idx)[a]
                x = _randbelow(rng, cum[-1])
                lo, hi = 0, len(cum) - 1
                while lo < hi:
                    mid = (lo + hi) // 2
                    if cum[mid] > x:
                        hi = mid
                    else:
                        lo = mid + 1
                chosen = rows[lo]
                child_bag = self.nice.nodes[nd.children[0]].bag
                out[nd.vertex - 1] = chosen[child_bag.index(nd.vertex)]
                stack.append((nd.children[0], chosen))
            else:
                stack.append((nd.children[0], a))
                stack.append((nd.children[1], a))
        return tuple(out)

    # -- vectorised sampling ---------------------------------------------

    def _build_arrays(self):
        nodes = self.nice.nodes
        row_index = [{a: i for i, a in enumerate(t)} for t in self.tables]
        values = [np.fromiter(t.values(), dtype=np.int64, count=len(t)) for t in self.tables]
        plan = []
        for idx, nd in enumerate(nodes):
            if nd.kind == LEAF:
                plan.append(None)
            elif nd.kind == INTRODUCE:
                pos = nd.bag.index(nd.vertex)
                cidx = row_index[nd.children[0]]
                plan.append(np.array([cidx[a[:pos] + a[pos + 1:]] for a in self.tables[idx]], dtype=np.int64))
            elif nd.kind == FORGET:
                cnd = nodes[nd.children[0]]
                pos = cnd.bag.index(nd.vertex)
                pidx = row_index[idx]
                child_rows = list(self.tables[nd.children[0]])
                parent_of = np.array([pidx[a[:pos] + a[pos + 1:]] for a in child_rows], dtype=np.int64)
                order = np.argsort(parent_of, kind="stable")
                cum = np.cumsum(values[nd.children[0]][order])
                start = np.concatenate(([0], np.cumsum(values[idx])[:-1]))
                vert = np.array([a[pos] for a in child_rows], dtype=np.int64)
                plan.append((order, cum, start, vert))
            else:
                lidx, ridx = row_index[nd.children[0]], row_index[nd.children[1]]
                rows = list(self.tables[idx])
                plan.append((np.array([lidx[a] for a in rows], dtype=np.int64),
                             np.array([ridx[a] for a in rows], dtype=np.int64)))
        self._arrays = (values, plan)

    def sample_many(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` independent uniform witnesses as an array of shape ``(count, k)``."""
        if self.count == 0:
            raise NoWitnessError("no colourful copy of the pattern exists in the host")
        if self.count >= INT64_SAFE:
            return np.array([self.sample(rng) for _ in range(count)], dtype=object).reshape(count, self.cp.k)
        if self._arrays is None:
            self._build_arrays()
        values, plan = self._arrays
        nodes = self.nice.nodes
        out = np.empty((count, self.cp.k), dtype=np.int64)
        rows: dict[int, np.ndarray] = {len(nodes) - 1: np.zeros(count, dtype=np.int64)}
        for idx in range(len(nodes) - 1, -1, -1):
            nd = nodes[idx]
            r = rows.pop(idx)
            if nd.kind == LEAF:
                continue
            if nd.kind == INTRODUCE:
                rows[nd.children[0]] = plan[idx][r]
            elif nd.kind == FORGET:
                order, cum, start, vert = plan[idx]
                x = rng.integers(0, values[idx][r])
                child = order[np.searchsorted(cum, start[r] + x, side="right")]
                out[:, nd.vertex - 1] = vert[child]
                rows[nd.children[0]] = child
            else:
                left, right = plan[idx]
                rows[nd.children[0]] = left[r]
                rows[nd.children[1]] = right[r]
        return out

    # -- exhaustive listing (small instances only) -------------------------

    def witnesses(self) -> Iterator[tuple[int, ...]]:
        """Every witness, by walking all positive-weight branches of the tables."""
        nodes = self.nice.nodes
        k = self.cp.k

        def walk(pending: list[tuple[int, tuple]], assigned: dict[int, int]):
            if not pending:
                yield tuple(assigned[u] for u in range(1, k + 1))
                return
            (idx, a), rest = pending[0], pending[1:]
            nd = nodes[idx]
            if nd.kind == LEAF:
                yield from walk(rest, assigned)
            elif nd.kind == INTRODUCE:
                pos = nd.bag.index(nd.vertex)
                yield from walk([(nd.children[0], a[:pos] + a[pos + 1:])] + rest, assigned)
            elif nd.kind == FORGET:
                if a not in self._forget_groups(idx):
                    return
                child_bag = nodes[nd.children[0]].bag
                for chosen in self._forget_groups(idx)[a][0]:
                    nxt = dict(assigned)
                    nxt[nd.vertex] = chosen[child_bag.index(nd.vertex)]
                    yield from walk([(nd.children[0], chosen)] + rest, nxt)
            else:
                yield from walk([(nd.children[0], a), (nd.children[1], a)] + rest, assigned)

        if self.count:
            yield from walk([(len(nodes) - 1, ())], {})


def _as_host(g: Graph, f: Coloring | ColoredHost | Iterable[int]) -> ColoredHost:
    return f if isinstance(f, ColoredHost) else ColoredHost(g, f)


def count_colorful(g: Graph, f: Coloring | ColoredHost | Iterable[int], cp: ColoredPattern) -> int:
    """Number of colourful copies of ``cp`` in ``g`` under colouring ``f``."""
    return ColorfulDP(_as_host(g, f), cp).count


def sample_colorful(g: Graph, f, cp: ColoredPattern, rng: np.random.Generator) -> dict[int, int]:
    """A uniform witness as ``{pattern label: host vertex}``; raises NoWitnessError if none."""
    emb = ColorfulDP(_as_host(g, f), cp).sample(rng)
    return {u: v for u, v in enumerate(emb, start=1)}


def is_embedding(g: Graph, f: Coloring | Iterable[int], cp: ColoredPattern, emb: Mapping[int, int]) -> bool:
    colors = f.colors if isinstance(f, Coloring) else tuple(f)
    if set(emb) != set(range(1, cp.k + 1)):
        return False
    if len(set(emb.values())) != cp.k:
        return False
    if any(colors[emb[u]] != cp.omega[u - 1] for u in emb):
        return False
    return all(g.has_edge(emb[a], emb[b]) for a, b in cp.pattern.edges)
