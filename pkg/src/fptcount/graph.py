"""Undirected simple graphs, vertex colourings and their text formats.

Vertices are the dense integers ``0..n-1``. Graphs are immutable; adjacency is
kept both as neighbour sets and as integer bitmasks so edge queries are O(1).
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np


class GraphFormatError(ValueError):
    """Base class for graph/colouring file problems; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MalformedHeaderError(GraphFormatError):
    pass


class MalformedLineError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        normed = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} outside 0..{self.n - 1}")
            normed.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(normed))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(_norm(u, v) for u, v in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def adj_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            mat[u, v] = mat[v, u] = True
        mat.setflags(write=False)
        return mat

    def has_edge(self, u: int, v: int) -> bool:
        return (self.adj_mask[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """``G[U]`` relabelled onto ``0..|U|-1`` in ascending original order."""
    us = sorted(set(vertices))
    for u in us:
        if not 0 <= u < g.n:
            raise ValueError(f"vertex {u} not in graph with {g.n} vertices")
    pos = {u: i for i, u in enumerate(us)}
    edges = [(pos[a], pos[b]) for a, b in combinations(us, 2) if g.has_edge(a, b)]
    return Graph.from_edges(len(us), edges)


def is_connected_mask(adj_mask: tuple[int, ...], vmask: int) -> bool:
    """Connectivity of the subgraph induced by the vertex bitmask ``vmask``."""
    if vmask == 0:
        return True
    start = vmask & -vmask
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        new = adj_mask[low.bit_length() - 1] & vmask & ~seen
        seen |= new
        frontier |= new
    return seen == vmask


def is_connected(g: Graph) -> bool:
    # the empty graph counts as connected
    return is_connected_mask(g.adj_mask, (1 << g.n) - 1)


def connected_components(g: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    todo = set(range(g.n)) if vertices is None else set(vertices)
    comps = []
    while todo:
        start = min(todo)
        todo.discard(start)
        comp, stack = [start], [start]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in todo:
                    todo.discard(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def complement(g: Graph) -> Graph:
    return Graph(g.n, frozenset(e for e in combinations(range(g.n), 2) if e not in g.edges))


def relabel(g: Graph, perm: list[int] | tuple[int, ...]) -> Graph:
    """Graph with vertex ``v`` renamed to ``perm[v]``."""
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges])


def random_graph(n: int, p: float, seed: int | None = 0) -> Graph:
    """Erdos-Renyi G(n, p), deterministic for a given seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph(n, frozenset(e for e in combinations(range(n), 2) if rng.random() < p))


# ----------------------------------------------------------------------------
# colourings


@dataclass(frozen=True)
class Coloring:
    """Colour per vertex. ``names`` optionally maps file tokens to colour ids."""

    colors: tuple[int, ...]
    names: Mapping[str, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    @property
    def palette(self) -> frozenset[int]:
        return frozenset(self.colors)

    def classes(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return {c: tuple(vs) for c, vs in out.items()}

    def color_id(self, token: str) -> int:
        if self.names is not None and token in self.names:
            return self.names[token]
        try:
            return int(token)
        except ValueError:
            raise KeyError(f"unknown colour {token!r}") from None

    def check(self, g: Graph) -> None:
        if len(self.colors) != g.n:
            raise ValueError(f"colouring covers {len(self.colors)} vertices, graph has {g.n}")


@dataclass(frozen=True)
class ColorMultiset:
    counts: Mapping[int, int]

    def __post_init__(self):
        for c, mult in self.counts.items():
            if mult < 1:
                raise ValueError(f"colour {c} has non-positive multiplicity {mult}")
        object.__setattr__(self, "counts", dict(sorted(self.counts.items())))

    @classmethod
    def of(cls, colors: Iterable[int]) -> "ColorMultiset":
        return cls(dict(Counter(colors)))

    @property
    def k(self) -> int:
        return sum(self.counts.values())

    def as_list(self) -> list[int]:
        """Colours with repetition, ascending."""
        return [c for c, mult in self.counts.items() for _ in range(mult)]

    def __hash__(self) -> int:
        return hash(tuple(self.counts.items()))


def parse_motif(text: str, coloring: Coloring | None = None) -> ColorMultiset:
    """Parse ``"red:1,blue:2"`` (or ``"0:1,1:2"``) into a colour multiset."""
    counts: dict[int, int] = {}
    fresh: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, mult = part.rpartition(":")
        if not name:
            raise ValueError(f"motif entry {part!r} is not of the form colour:multiplicity")
        if coloring is None:
            cid = int(name)
        elif name in fresh:
            cid = fresh[name]
        else:
            try:
                cid = coloring.color_id(name)
            except KeyError:
                # a colour absent from the graph gets an unused id; it simply matches nothing
                cid = fresh[name] = max(coloring.palette | set(fresh.values()), default=-1) + 1
        counts[cid] = counts.get(cid, 0) + int(mult)
    if not counts:
        raise ValueError("empty motif")
    return ColorMultiset(counts)


# ----------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def load_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m`` then ``m`` lines ``u v``."""
    lines = list(_content_lines(text))
    if not lines:
        raise MalformedHeaderError(1, "missing 'n m' header")
    lineno, header = lines[0]
    parts = header.split()
    try:
        n, m = (int(x) for x in parts)
    except ValueError:
        raise MalformedHeaderError(lineno, f"expected 'n m', got {header!r}") from None
    if n < 0 or m < 0:
        raise MalformedHeaderError(lineno, "negative vertex or edge count")
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else lineno)
        raise MalformedHeaderError(where, f"header declares {m} edges, found {len(body)}")
    edges: set[tuple[int, int]] = set()
    for lineno, line in body:
        parts = line.split()
        try:
            u, v = (int(x) for x in parts)
        except ValueError:
            raise MalformedLineError(lineno, f"expected 'u v', got {line!r}") from None
        for x in (u, v):
            if not 0 <= x < n:
                raise VertexRangeError(lineno, f"vertex index {x} out of range 0..{n - 1}")
        if u == v:
            raise SelfLoopError(lineno, f"self-loop at vertex {u}")
        e = _norm(u, v)
        if e in edges:
            raise DuplicateEdgeError(lineno, f"duplicate edge {e[0]}-{e[1]}")
        edges.add(e)
    return Graph(n, frozenset(edges))


def dump_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def load_coloring(text: str, n: int | None = None) -> Coloring:
    """Parse ``vertex colour`` lines. Non-integer colour tokens get dense ids
    in order of first appearance."""
    assigned: dict[int, str] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(lineno, f"expected 'vertex colour', got {line!r}")
        try:
            v = int(parts[0])
        except ValueError:
            raise MalformedLineError(lineno, f"bad vertex {parts[0]!r}") from None
        if v < 0 or (n is not None and v >= n):
            raise VertexRangeError(lineno, f"vertex index {v} out of range")
        if v in assigned:
            raise MalformedLineError(lineno, f"vertex {v} coloured twice")
        assigned[v] = parts[1]
    size = n if n is not None else (max(assigned) + 1 if assigned else 0)
    missing = [v for v in range(size) if v not in assigned]
    if missing:
        raise MalformedLineError(0, f"vertex {missing[0]} has no colour")
    tokens = [assigned[v] for v in range(size)]
    if all(t.lstrip("-").isdigit() for t in tokens):
        return Coloring(tuple(int(t) for t in tokens))
    names: dict[str, int] = {}
    for t in tokens:
        names.setdefault(t, len(names))
    return Coloring(tuple(names[t] for t in tokens), names=names)


def dump_coloring(c: Coloring) -> str:
    if c.names:
        inv = {cid: name for name, cid in c.names.items()}
        return "".join(f"{v} {inv[col]}\n" for v, col in enumerate(c.colors))
    return "".join(f"{v} {col}\n" for v, col in enumerate(c.colors))


def random_coloring(n: int, num_colors: int, seed: int | None = 0) -> Coloring:
    rng = random.Random(seed)
    return Coloring(tuple(rng.randrange(num_colors) for _ in range(n)))
