"""Exact tree decompositions of small patterns and their nice normal form.

Treewidth is found by dynamic programming over vertex subsets in the
elimination-order formulation: ``TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)``
where ``Q(S, v)`` is the set of vertices outside ``S + v`` reachable from
``v`` through ``S``. Only ever applied to k-vertex patterns, never to hosts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceededError
from .properties import LabelledPattern

TREEWIDTH_K_CAP = 12


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    parent: tuple[int | None, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p is not None]

    def to_json(self) -> str:
        nodes = [{"node": i, "parent": p, "bag": sorted(b)} for i, (b, p) in enumerate(zip(self.bags, self.parent))]
        return json.dumps({"width": self.width, "nodes": nodes})


def _reach_outside(adj: tuple[int, ...], inner: int, v: int, full: int) -> int:
    """Vertices outside ``inner | v`` reachable from ``v`` with all interior vertices in ``inner``."""
    seen = 1 << v
    frontier = adj[v]
    out = 0
    stack = frontier
    while stack:
        low = stack & -stack
        stack ^= low
        if seen & low:
            continue
        seen |= low
        if inner & low:
            stack |= adj[low.bit_length() - 1] & ~seen
        else:
            out |= low
    return out & full & ~inner & ~(1 << v)


def _elimination_order(adj: tuple[int, ...], k: int) -> tuple[int, list[int]]:
    full = (1 << k) - 1

    @lru_cache(maxsize=None)
    def tw(s: int) -> int:
        if s == 0:
            return -1
        best = k
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            prev = s ^ low
            q = bin(_reach_outside(adj, prev, v, full)).count("1")
            if q >= best:
                continue
            cand = max(tw(prev), q)
            if cand < best:
                best = cand
        return best

    width = tw(full)
    # walk back down, eliminating the lowest admissible vertex last-first
    order: list[int] = []
    s = full
    while s:
        target = tw(s)
        for v in range(k):
            if not s >> v & 1:
                continue
            prev = s ^ (1 << v)
            q = bin(_reach_outside(adj, prev, v, full)).count("1")
            if max(tw(prev), q) == target:
                order.append(v)
                s = prev
                break
    order.reverse()
    tw.cache_clear()
    return max(width, 0), order


def decomposition_from_order(adj: tuple[int, ...], k: int, order: list[int]) -> TreeDecomposition:
    """Bags ``{v} + later neighbours in the fill-in graph``, then drop redundant bags."""
    pos = {v: i for i, v in enumerate(order)}
    fill = list(adj)
    bags: list[int] = []
    for v in order:
        later = sum(1 << w for w in range(k) if fill[v] >> w & 1 and pos[w] > pos[v])
        bags.append(later | 1 << v)
        w_mask = later
        while w_mask:
            low = w_mask & -w_mask
            w_mask ^= low
            w = low.bit_length() - 1
            fill[w] |= later & ~low
    parent: list[int | None] = []
    for i, v in enumerate(order):
        later = bags[i] & ~(1 << v)
        if later:
            nxt = min((pos[w] for w in range(k) if later >> w & 1))
            parent.append(nxt)
        elif i + 1 < len(order):
            # separate component: hang it on the next bag
            parent.append(i + 1)
        else:
            parent.append(None)

    # contract bags contained in their parent
    alive = list(range(len(order)))
    par = parent[:]
    changed = True
    while changed:
        changed = False
        for i in alive:
            p = par[i]
            if p is not None and bags[i] & ~bags[p] == 0:
                for j in alive:
                    if par[j] == i:
                        par[j] = p
                alive.remove(i)
                changed = True
                break
    index = {old: new for new, old in enumerate(alive)}
    return TreeDecomposition(
        bags=tuple(frozenset(w + 1 for w in range(k) if bags[i] >> w & 1) for i in alive),
        parent=tuple(None if par[i] is None else index[par[i]] for i in alive),
    )


def tree_decomposition(p: LabelledPattern) -> TreeDecomposition:
    """A minimum-width tree decomposition of ``p`` (bags hold labels ``1..k``)."""
    if p.k > TREEWIDTH_K_CAP:
        raise CapExceededError(f"exact treewidth is capped at k = {TREEWIDTH_K_CAP}")
    if p.k == 0:
        return TreeDecomposition(bags=(), parent=())
    return _cached_decomposition(p)


@lru_cache(maxsize=4096)
def _cached_decomposition(p: LabelledPattern) -> TreeDecomposition:
    adj = p.adj_mask()
    _, order = _elimination_order(adj, p.k)
    return decomposition_from_order(adj, p.k, order)


def treewidth(p: LabelledPattern) -> int:
    return tree_decomposition(p).width


def validate(p: LabelledPattern, td: TreeDecomposition) -> bool:
    """The three decomposition conditions, plus the index structure being a tree."""
    n = len(td.bags)
    if len(td.parent) != n or any(not b for b in td.bags):
        return False
    roots = [i for i, q in enumerate(td.parent) if q is None]
    if p.k == 0:
        return n == 0
    if len(roots) != 1 or any(q is not None and not 0 <= q < n for q in td.parent):
        return False
    # every node must reach the root without cycling
    for i in range(n):
        seen, j = set(), i
        while td.parent[j] is not None:
            if j in seen:
                return False
            seen.add(j)
            j = td.parent[j]
    labels = set(range(1, p.k + 1))
    covered = set().union(*td.bags)
    if covered != labels:
        return False
    if not all(any(a in b and c in b for b in td.bags) for a, c in p.edges):
        return False
    for v in labels:
        nodes = {i for i, b in enumerate(td.bags) if v in b}
        # connected iff exactly one node in the set has its parent outside it
        tops = [i for i in nodes if td.parent[i] is None or td.parent[i] not in nodes]
        if len(tops) != 1:
            return False
    return True


# ----------------------------------------------------------------------------
# nice decompositions

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceDecomposition:
    """Nodes stored children-before-parents; the last node is the root (empty bag)."""

    nodes: tuple[NiceNode, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        """Drop empty bags (leaves/root) so the generic validator applies."""
        parent: list[int | None] = [None] * len(self.nodes)
        for i, nd in enumerate(self.nodes):
            for c in nd.children:
                parent[c] = i
        keep = [i for i, nd in enumerate(self.nodes) if nd.bag]

        def lift(i):
            j = parent[i]
            while j is not None and not self.nodes[j].bag:
                j = parent[j]
            return j

        index = {old: new for new, old in enumerate(keep)}
        return TreeDecomposition(
            bags=tuple(frozenset(self.nodes[i].bag) for i in keep),
            parent=tuple(None if lift(i) is None else index[lift(i)] for i in keep),
        )

    def well_formed(self) -> bool:
        for i, nd in enumerate(self.nodes):
            if any(c >= i for c in nd.children):
                return False
            kids = [self.nodes[c] for c in nd.children]
            if nd.kind == LEAF:
                ok = not kids and not nd.bag
            elif nd.kind == INTRODUCE:
                ok = len(kids) == 1 and nd.vertex in nd.bag and set(kids[0].bag) == set(nd.bag) - {nd.vertex}
            elif nd.kind == FORGET:
                ok = len(kids) == 1 and nd.vertex not in nd.bag and set(kids[0].bag) == set(nd.bag) | {nd.vertex}
            elif nd.kind == JOIN:
                ok = len(kids) == 2 and all(kid.bag == nd.bag for kid in kids)
            else:
                ok = False
            if not ok:
                return False
        return not self.nodes or not self.nodes[-1].bag

    def to_json(self) -> str:
        return json.dumps([
            {"node": i, "type": nd.kind, "bag": list(nd.bag), "vertex": nd.vertex, "children": list(nd.children)}
            for i, nd in enumerate(self.nodes)
        ])


def make_nice(td: TreeDecomposition, p: LabelledPattern | None = None) -> NiceDecomposition:
    """Leaf / introduce / forget / join form of ``td`` with the same width.

    Leaves and the root carry empty bags; each introduce or forget changes the
    bag by one vertex.
    """
    if p is not None and not validate(p, td):
        raise ValueError("input is not a valid tree decomposition of the pattern")
    nodes: list[NiceNode] = []

    def add(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), vertex, tuple(children)))
        return len(nodes) - 1

    if not td.bags:
        add(LEAF, ())
        return NiceDecomposition(tuple(nodes))

    kids: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    root = None
    for i, q in enumerate(td.parent):
        if q is None:
            root = i
        else:
            kids[q].append(i)

    def transition(node: int, src: frozenset[int], dst: frozenset[int]) -> int:
        bag = set(src)
        for v in sorted(src - dst):
            bag.discard(v)
            node = add(FORGET, bag, v, (node,))
        for v in sorted(dst - src):
            bag.add(v)
            node = add(INTRODUCE, bag, v, (node,))
        return node

    def build(t: int) -> int:
        bag = td.bags[t]
        if not kids[t]:
            return transition(add(LEAF, ()), frozenset(), bag)
        branches = [transition(build(c), td.bags[c], bag) for c in kids[t]]
        node = branches[0]
        for other in branches[1:]:
            node = add(JOIN, bag, None, (node, other))
        return node

    top = build(root)
    transition(top, td.bags[root], frozenset())
    return NiceDecomposition(tuple(nodes))


@lru_cache(maxsize=4096)
def nice_decomposition(p: LabelledPattern) -> NiceDecomposition:
    return make_nice(tree_decomposition(p))
