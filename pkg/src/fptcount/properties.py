"""Labelled patterns on ``{1..k}`` and graph properties over them.

A labelled graph ``(H, pi)`` is stored with its labelling absorbed: vertex
``pi(i)`` becomes label ``i``. Containment between labelled graphs then is
plain edge-set inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Iterator

from .errors import CapExceededError
from .graph import Graph, is_connected_mask

EXHAUSTIVE_K_CAP = 6


@dataclass(frozen=True, order=True)
class LabelledPattern:
    k: int
    edges: frozenset[tuple[int, int]] = field(default=frozenset(), compare=False)
    # sort key: edge count first, then the sorted edge list
    _key: tuple = field(default=(), init=False, repr=False)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")
        normed = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at label {a}")
            if not (1 <= a <= self.k and 1 <= b <= self.k):
                raise ValueError(f"edge {a}-{b} outside labels 1..{self.k}")
            normed.add((a, b) if a < b else (b, a))
        edges = frozenset(normed)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_key", (len(edges), tuple(sorted(edges))))

    def __eq__(self, other):
        if not isinstance(other, LabelledPattern):
            return NotImplemented
        return self.k == other.k and self.edges == other.edges

    def __hash__(self):
        return hash((self.k, self.edges))

    @classmethod
    def from_graph(cls, g: Graph, order: Iterable[int] | None = None) -> "LabelledPattern":
        """``G[v_1..v_k]`` as a pattern: host vertex ``order[i-1]`` gets label ``i``."""
        vs = list(range(g.n)) if order is None else list(order)
        edges = [(i + 1, j + 1) for i, j in combinations(range(len(vs)), 2) if g.has_edge(vs[i], vs[j])]
        return cls(len(vs), frozenset(edges))

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.k, [(a - 1, b - 1) for a, b in self.edges])

    def relabel(self, perm: dict[int, int] | tuple[int, ...]) -> "LabelledPattern":
        """Rename label ``i`` to ``perm[i]`` (tuple form is 1-indexed via ``perm[i-1]``)."""
        get = perm.__getitem__ if isinstance(perm, dict) else (lambda i: perm[i - 1])
        return LabelledPattern(self.k, frozenset((get(a), get(b)) for a, b in self.edges))

    def adj_mask(self) -> tuple[int, ...]:
        """Bitmask adjacency indexed by ``label - 1``."""
        masks = [0] * self.k
        for a, b in self.edges:
            masks[a - 1] |= 1 << (b - 1)
            masks[b - 1] |= 1 << (a - 1)
        return tuple(masks)

    def __str__(self) -> str:
        return ",".join(f"{a}-{b}" for a, b in sorted(self.edges)) or "-"


def pattern_subset(p: LabelledPattern, q: LabelledPattern) -> bool:
    if p.k != q.k:
        raise ValueError(f"patterns have different sizes ({p.k} vs {q.k})")
    return p.edges <= q.edges


@lru_cache(maxsize=None)
def label_pairs(k: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(1, k + 1), 2))


def all_patterns(k: int) -> Iterator[LabelledPattern]:
    """All ``2^(k choose 2)`` labelled graphs on ``{1..k}``."""
    pairs = label_pairs(k)
    for mask in range(1 << len(pairs)):
        yield LabelledPattern(k, frozenset(pairs[i] for i in range(len(pairs)) if mask >> i & 1))


# ----------------------------------------------------------------------------
# predicates


def phi_connected(p: LabelledPattern) -> bool:
    return is_connected_mask(p.adj_mask(), (1 << p.k) - 1)


def phi_hamiltonian(p: LabelledPattern) -> bool:
    """Hamiltonian cycle through all labels; needs ``k >= 3``."""
    k = p.k
    if k < 3:
        return False
    adj = p.adj_mask()
    full = (1 << k) - 1
    # reach[mask] = bitmask of end vertices of paths from vertex 0 covering mask
    reach = [0] * (1 << k)
    reach[1] = 1
    for mask in range(1, 1 << k):
        ends = reach[mask]
        if not ends or not mask & 1:
            continue
        e = ends
        while e:
            low = e & -e
            e ^= low
            v = low.bit_length() - 1
            nxt = adj[v] & ~mask
            while nxt:
                w = nxt & -nxt
                nxt ^= w
                reach[mask | w] |= w
    return bool(reach[full] & adj[0])


def phi_non_bipartite(p: LabelledPattern) -> bool:
    adj = p.adj_mask()
    side = [-1] * p.k
    for s in range(p.k):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            m = adj[u]
            while m:
                low = m & -m
                m ^= low
                w = low.bit_length() - 1
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return True
    return False


def phi_edgeless(p: LabelledPattern) -> bool:
    return not p.edges


# ----------------------------------------------------------------------------
# direct enumerators of edge-minimal patterns


def _prufer_decode(seq: tuple[int, ...], k: int) -> frozenset[tuple[int, int]]:
    degree = [1] * (k + 1)
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(i for i in range(1, k + 1) if degree[i] == 1)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = (i for i in range(1, k + 1) if degree[i] == 1)
    edges.append((u, w))
    return frozenset(edges)


def prufer_trees(k: int) -> list[LabelledPattern]:
    """All labelled trees on ``{1..k}`` by decoding every Prufer sequence."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return [LabelledPattern(1)]
    if k == 2:
        return [LabelledPattern(2, frozenset({(1, 2)}))]
    trees = {LabelledPattern(k, _prufer_decode(seq, k)) for seq in product(range(1, k + 1), repeat=k - 2)}
    return sorted(trees)


def _cycles_on(labels: tuple[int, ...]) -> Iterator[frozenset[tuple[int, int]]]:
    """Each undirected cycle through ``labels`` exactly once."""
    first, rest = labels[0], labels[1:]
    for perm in permutations(rest):
        if perm[0] > perm[-1]:
            continue
        seq = (first,) + perm
        yield frozenset(
            (min(seq[i], seq[(i + 1) % len(seq)]), max(seq[i], seq[(i + 1) % len(seq)]))
            for i in range(len(seq))
        )


def hamiltonian_cycles(k: int) -> list[LabelledPattern]:
    if k < 3:
        return []
    return sorted(LabelledPattern(k, c) for c in _cycles_on(tuple(range(1, k + 1))))


def odd_cycle_patterns(k: int) -> list[LabelledPattern]:
    """An odd cycle on some label subset, the other labels isolated."""
    if k > 9:
        raise CapExceededError("odd-cycle enumeration is capped at k = 9")
    out = []
    for size in range(3, k + 1, 2):
        for labels in combinations(range(1, k + 1), size):
            out.extend(LabelledPattern(k, c) for c in _cycles_on(labels))
    return sorted(out)


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    """A family ``phi_k`` of predicates on labelled ``k``-vertex patterns."""

    name: str
    predicate: Callable[[LabelledPattern], bool]
    symmetric: bool = True
    monotone: bool = True
    treewidth_bound: int | None = None
    minimal_enumerator: Callable[[int], list[LabelledPattern]] | None = field(default=None, compare=False)

    def __call__(self, p: LabelledPattern) -> bool:
        return bool(self.predicate(p))


CONNECTED = Property("connected", phi_connected, treewidth_bound=1, minimal_enumerator=prufer_trees)
HAMILTONIAN = Property("hamiltonian", phi_hamiltonian, treewidth_bound=2, minimal_enumerator=hamiltonian_cycles)
NON_BIPARTITE = Property("non-bipartite", phi_non_bipartite, treewidth_bound=2, minimal_enumerator=odd_cycle_patterns)
EDGELESS = Property("edgeless", phi_edgeless, monotone=False)

BUILTIN_PROPERTIES = {p.name: p for p in (CONNECTED, HAMILTONIAN, NON_BIPARTITE, EDGELESS)}


def get_property(name: str) -> Property:
    try:
        return BUILTIN_PROPERTIES[name]
    except KeyError:
        raise KeyError(f"unknown property {name!r}; choose from {sorted(BUILTIN_PROPERTIES)}") from None


def exhaustive_minimal_patterns(phi: Property, k: int) -> list[LabelledPattern]:
    """Edge-minimal satisfying patterns by filtering all labelled k-vertex graphs."""
    if k > EXHAUSTIVE_K_CAP:
        raise CapExceededError(f"exhaustive pattern enumeration is capped at k = {EXHAUSTIVE_K_CAP}")
    pairs = label_pairs(k)
    nbits = len(pairs)
    sat = bytearray(1 << nbits)
    for mask in range(1 << nbits):
        edges = frozenset(pairs[i] for i in range(nbits) if mask >> i & 1)
        sat[mask] = phi(LabelledPattern(k, edges))
    # below[mask]: some subset of mask (inclusive) satisfies phi
    below = bytearray(sat)
    for bit in range(nbits):
        step = 1 << bit
        for mask in range(1 << nbits):
            if mask & step and below[mask ^ step]:
                below[mask] = 1
    out = []
    for mask in range(1 << nbits):
        if not sat[mask]:
            continue
        if any(below[mask ^ (1 << b)] for b in range(nbits) if mask >> b & 1):
            continue
        out.append(LabelledPattern(k, frozenset(pairs[i] for i in range(nbits) if mask >> i & 1)))
    return sorted(out)


def minimal_patterns(phi: Property, k: int, exhaustive: bool = False) -> list[LabelledPattern]:
    """Edge-minimal members of ``{P : phi_k(P) = 1}``, in canonical order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if phi.minimal_enumerator is not None and not exhaustive:
        return sorted(phi.minimal_enumerator(k))
    return exhaustive_minimal_patterns(phi, k)


def check_monotone(phi: Property, k: int) -> bool:
    """No ``P subset Q`` with ``phi(P) = 1`` and ``phi(Q) = 0``.

    Checking single-edge additions suffices: any inclusion is a chain of them.
    """
    if k > EXHAUSTIVE_K_CAP:
        raise CapExceededError(f"monotonicity check is capped at k = {EXHAUSTIVE_K_CAP}")
    pairs = label_pairs(k)
    nbits = len(pairs)
    sat = [phi(LabelledPattern(k, frozenset(pairs[i] for i in range(nbits) if mask >> i & 1)))
           for mask in range(1 << nbits)]
    for mask in range(1 << nbits):
        if sat[mask]:
            for b in range(nbits):
                if not mask >> b & 1 and not sat[mask | 1 << b]:
                    return False
    return True


def check_symmetric(phi: Property, k: int) -> bool:
    if k > EXHAUSTIVE_K_CAP:
        raise CapExceededError(f"symmetry check is capped at k = {EXHAUSTIVE_K_CAP}")
    perms = list(permutations(range(1, k + 1)))
    for p in all_patterns(k):
        val = phi(p)
        if any(phi(p.relabel(perm)) != val for perm in perms):
            return False
    return True


# ----------------------------------------------------------------------------
# user-supplied pattern lists


def parse_pattern(text: str, k: int) -> LabelledPattern:
    text = text.strip()
    if text in ("", "-"):
        return LabelledPattern(k)
    edges = []
    for tok in text.split(","):
        a, sep, b = tok.strip().partition("-")
        if not sep:
            raise ValueError(f"bad edge token {tok!r}; expected 'u-v'")
        edges.append((int(a), int(b)))
    return LabelledPattern(k, frozenset(edges))


def pattern_list_property(patterns: Iterable[LabelledPattern], name: str = "custom") -> Property:
    """Monotone property whose satisfying patterns contain some listed pattern."""
    pats = sorted(set(patterns))
    if not pats:
        raise ValueError("pattern list is empty")
    k = pats[0].k
    if any(p.k != k for p in pats):
        raise ValueError("all patterns must share the same k")
    minimal = sorted(p for p in pats if not any(q.edges < p.edges for q in pats))

    def predicate(p: LabelledPattern) -> bool:
        return p.k == k and any(q.edges <= p.edges for q in minimal)

    def enumerator(kk: int) -> list[LabelledPattern]:
        if kk != k:
            raise ValueError(f"property {name!r} is only defined for k = {k}")
        return list(minimal)

    closed = all(
        p.relabel(perm) in set(minimal) for p in minimal for perm in permutations(range(1, k + 1))
    ) if k <= 7 else False
    from .treewidth import treewidth

    tw = max(treewidth(p) for p in minimal)
    return Property(name, predicate, symmetric=closed, monotone=True, treewidth_bound=tw,
                    minimal_enumerator=enumerator)


def load_pattern_property(text: str, name: str = "custom") -> tuple[Property, int]:
    """Parse ``k p`` then ``p`` lines of ``u-v,u-v,...``; returns the property and k."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("pattern file is empty")
    try:
        k, p = (int(x) for x in lines[0].split())
    except ValueError:
        raise ValueError(f"pattern file header must be 'k p', got {lines[0]!r}") from None
    if len(lines) - 1 != p:
        raise ValueError(f"pattern file declares {p} patterns, found {len(lines) - 1}")
    return pattern_list_property([parse_pattern(ln, k) for ln in lines[1:]], name=name), k
