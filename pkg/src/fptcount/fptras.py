"""Randomised approximate counting of induced subgraphs with a monotone property.

The labelled count ``|{(v_1..v_k) distinct : phi(G[v_1..v_k])}|`` is written
as a union of sets indexed by (hash function f, permutation sigma, minimal
pattern H): tuples with ``f(v_i) = sigma(i)`` whose labelled induced graph
contains ``H``. Each set is in bijection with the colourful copies of ``H``
coloured ``sigma`` in the host coloured by ``f``, which gives exact sizes and
uniform samples; the union is then estimated with Karp-Luby.

Motif counting adds a fourth index ``d`` (a bijection from hash colours onto
the motif's colour positions) and evaluates each set on the subgraph of
vertices whose colour equals ``d(f(v))``.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .colorful import ColoredHost, ColoredPattern, ColorfulDP
from .errors import NonMonotonePropertyError
from .graph import Coloring, ColorMultiset, Graph
from .hashing import EXACT, EXACT_SUBSET_CAP, RANDOMIZED, HashFamily, build_family
from .karp_luby import Estimate, SetSystem, estimate_union
from .properties import CONNECTED, LabelledPattern, Property, minimal_patterns
from .treewidth import treewidth


class PatternSetSystem(SetSystem):
    """Sets ``A_{f,sigma,H}`` (or ``B_{f,sigma,H,d}`` when a motif is given).

    Index order is lexicographic in (f, sigma, H, d) with sigma and d running
    over ``itertools.permutations`` order and H in canonical pattern order.
    Elements are k-tuples of host vertices.
    """

    def __init__(self, graph: Graph, k: int, patterns: Sequence[LabelledPattern], family: HashFamily,
                 coloring: Coloring | None = None, motif: ColorMultiset | None = None):
        if family.n != graph.n or family.k != k:
            raise ValueError("hash family does not match the host size or k")
        if any(p.k != k for p in patterns):
            raise ValueError("all patterns must have k vertices")
        if (coloring is None) != (motif is None):
            raise ValueError("motif counting needs both a colouring and a motif")
        self.graph = graph
        self.k = k
        self.patterns = list(patterns)
        self.family = family
        self.coloring = coloring
        self.motif = motif
        self.ftable = family.table()
        self.perms = list(permutations(range(1, k + 1)))
        self.perm_index = {p: i for i, p in enumerate(self.perms)}
        self._perm_arr = np.array(self.perms, dtype=np.int64).reshape(len(self.perms), k) - 1

        if motif is not None:
            if motif.k != k:
                raise ValueError("motif size must equal k")
            coloring.check(graph)
            colors = motif.as_list()
            self.dmaps = [tuple(colors[j] for j in p) for p in permutations(range(k))]
        else:
            self.dmaps = [None]
        distinct_d: dict = {}
        self.d_key = np.array([distinct_d.setdefault(d, len(distinct_d)) for d in self.dmaps], dtype=np.int64)
        self.d_distinct = list(distinct_d)
        self.first_d = {}
        for di, d in enumerate(self.dmaps):
            self.first_d.setdefault(d, di)

        # colourful pattern on hash colours: edge {sigma(a), sigma(b)} per pattern edge {a, b}
        transported: dict[frozenset, int] = {}
        ek = np.empty((len(self.perms), len(self.patterns)), dtype=np.int64)
        for si, sigma in enumerate(self.perms):
            for hi, h in enumerate(self.patterns):
                e = frozenset(tuple(sorted((sigma[a - 1], sigma[b - 1]))) for a, b in h.edges)
                ek[si, hi] = transported.setdefault(e, len(transported))
        self.edge_key = ek
        self.colored_patterns = [
            ColoredPattern(LabelledPattern(k, e), tuple(range(1, k + 1))) for e in transported
        ]
        self.nF, self.nS, self.nH, self.nD = len(family), len(self.perms), len(self.patterns), len(self.dmaps)
        self.m = self.nF * self.nS * self.nH * self.nD
        self._dps: dict[tuple[int, int, int], ColorfulDP] = {}
        self._counts: np.ndarray | None = None
        self._first: dict[tuple[int, ...], int | None] = {}

    # -- indexing ----------------------------------------------------------

    def index(self, fi: int, si: int, hi: int, di: int = 0) -> int:
        return ((fi * self.nS + si) * self.nH + hi) * self.nD + di

    def decode(self, i):
        i, di = divmod(i, self.nD)
        i, hi = divmod(i, self.nH)
        fi, si = divmod(i, self.nS)
        return fi, si, hi, di

    def descriptor(self, i: int) -> dict:
        fi, si, hi, di = self.decode(i)
        out = {"f": fi, "sigma": self.perms[si], "pattern": str(self.patterns[hi])}
        if self.motif is not None:
            out["d"] = self.dmaps[di]
        return out

    def _group(self, fi, si, hi, di):
        return (fi, int(self.d_key[di]), int(self.edge_key[si, hi]))

    # -- sizes -------------------------------------------------------------

    def _host(self, fi: int, did: int) -> ColoredHost:
        f = self.ftable[fi].tolist()
        if self.motif is None:
            return ColoredHost(self.graph, f)
        d = self.d_distinct[did]
        c = self.coloring.colors
        return ColoredHost(self.graph, f, allowed=[c[v] == d[f[v] - 1] for v in range(self.graph.n)])

    def _compute_counts(self) -> np.ndarray:
        nE = len(self.colored_patterns)
        counts = np.zeros((self.nF, len(self.d_distinct), nE), dtype=object)
        for fi in range(self.nF):
            for did in range(len(self.d_distinct)):
                host = self._host(fi, did)
                if len(host.classes) < self.k or any(c not in host.classes for c in range(1, self.k + 1)):
                    continue
                for eid, cp in enumerate(self.colored_patterns):
                    dp = ColorfulDP(host, cp)
                    if dp.count:
                        self._dps[(fi, did, eid)] = dp
                        counts[fi, did, eid] = dp.count
        return counts

    @property
    def counts(self) -> np.ndarray:
        if self._counts is None:
            self._counts = self._compute_counts()
        return self._counts

    def sizes(self) -> list[int]:
        c = self.counts[:, self.d_key, :]            # (F, D, E)
        c = c[:, :, self.edge_key]                   # (F, D, S, H)
        return np.transpose(c, (0, 2, 3, 1)).ravel().tolist()

    def size(self, i: int) -> int:
        fi, si, hi, di = self.decode(i)
        return int(self.counts[fi, self.d_key[di], self.edge_key[si, hi]])

    @property
    def multiplicity_bound(self) -> int:
        # an element fixes sigma under each f, so only (f, H, d) vary;
        # d's that induce the same colour map repeat prod(mult!) times
        dup = 1
        if self.motif is not None:
            for mult in self.motif.counts.values():
                dup *= math.factorial(mult)
        return self.nF * self.nH * dup

    # -- sampling ----------------------------------------------------------

    def sample(self, i: int, rng: np.random.Generator) -> tuple[int, ...]:
        fi, si, hi, di = self.decode(i)
        self.counts
        dp = self._dps.get(self._group(fi, si, hi, di))
        if dp is None:
            from .errors import NoWitnessError

            raise NoWitnessError(f"set {i} is empty")
        emb = dp.sample(rng)
        sigma = self.perms[si]
        return tuple(emb[sigma[j] - 1] for j in range(self.k))

    def group_ids(self, indices: np.ndarray) -> np.ndarray:
        fi, si, hi, di = self._decode_arr(indices)
        nE = len(self.colored_patterns)
        return (fi * len(self.d_distinct) + self.d_key[di]) * nE + self.edge_key[si, hi]

    def _decode_arr(self, indices: np.ndarray):
        rest, di = np.divmod(indices, self.nD)
        rest, hi = np.divmod(rest, self.nH)
        fi, si = np.divmod(rest, self.nS)
        return fi, si, hi, di

    def sample_batch(self, indices: np.ndarray, seed: int) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.int64)
        self.counts
        out = np.empty((len(indices), self.k), dtype=np.int64)
        if not len(indices):
            return out
        groups = self.group_ids(indices)
        _, si, _, _ = self._decode_arr(indices)
        order = np.lexsort((indices, groups))
        nE = len(self.colored_patterns)
        nDd = len(self.d_distinct)
        bounds = np.flatnonzero(np.diff(groups[order])) + 1
        for chunk in np.split(order, bounds):
            g = int(groups[chunk[0]])
            fi, rest = divmod(g, nDd * nE)
            did, eid = divmod(rest, nE)
            dp = self._dps[(fi, did, eid)]
            emb = dp.sample_many(len(chunk), np.random.default_rng([seed, 1, g]))
            cols = self._perm_arr[si[chunk]]
            out[chunk] = np.take_along_axis(np.asarray(emb, dtype=np.int64), cols, axis=1)
        return out

    # -- membership --------------------------------------------------------

    def contains(self, i: int, v: Sequence[int]) -> bool:
        fi, si, hi, di = self.decode(i)
        v = tuple(int(x) for x in v)
        if len(v) != self.k or len(set(v)) != self.k or any(not 0 <= x < self.graph.n for x in v):
            return False
        f = self.ftable[fi]
        sigma = self.perms[si]
        if any(f[v[j]] != sigma[j] for j in range(self.k)):
            return False
        g = self.graph
        if not all(g.has_edge(v[a - 1], v[b - 1]) for a, b in self.patterns[hi].edges):
            return False
        if self.motif is not None:
            d = self.dmaps[di]
            c = self.coloring.colors
            if any(c[v[j]] != d[f[v[j]] - 1] for j in range(self.k)):
                return False
        return True

    def candidate_indices(self, v: Sequence[int]) -> list[int]:
        """Every index whose hash/permutation constraint ``v`` satisfies; other
        sets cannot contain ``v``."""
        out = []
        for fi in range(self.nF):
            fv = tuple(int(self.ftable[fi][x]) for x in v)
            si = self.perm_index.get(fv)
            if si is None:
                continue
            out.extend(self.index(fi, si, hi, di) for hi in range(self.nH) for di in range(self.nD))
        return out

    def first_index(self, v: Sequence[int]) -> int | None:
        v = tuple(int(x) for x in v)
        if v in self._first:
            return self._first[v]
        ans = None
        g = self.graph
        hi = next((h for h, p in enumerate(self.patterns)
                   if all(g.has_edge(v[a - 1], v[b - 1]) for a, b in p.edges)), None)
        if hi is not None and len(set(v)) == self.k:
            for fi in range(self.nF):
                fv = tuple(int(self.ftable[fi][x]) for x in v)
                si = self.perm_index.get(fv)
                if si is None:
                    continue
                if self.motif is None:
                    ans = self.index(fi, si, hi)
                else:
                    c = self.coloring.colors
                    dmap = [None] * self.k
                    for j in range(self.k):
                        dmap[fv[j] - 1] = c[v[j]]
                    di = self.first_d.get(tuple(dmap))
                    if di is not None:
                        ans = self.index(fi, si, hi, di)
                break
        self._first[v] = ans
        return ans

    def contains_batch(self, indices: np.ndarray, samples: np.ndarray) -> np.ndarray:
        fi, si, hi, di = self._decode_arr(indices)
        fv = self.ftable[fi[:, None], samples]
        ok = np.all(fv == self._perm_arr[si] + 1, axis=1)
        adj = self.graph.adj_matrix
        for h in np.unique(hi).tolist():
            rows = hi == h
            for a, b in self.patterns[h].edges:
                ok[rows] &= adj[samples[rows, a - 1], samples[rows, b - 1]]
        if self.motif is not None:
            c = np.array(self.coloring.colors, dtype=object)
            dm = np.array(self.dmaps, dtype=object)
            ok &= np.all(c[samples] == dm[di[:, None], fv - 1], axis=1)
        return ok

    def accepted_batch(self, indices: np.ndarray, samples) -> int:
        indices = np.asarray(indices, dtype=np.int64)
        samples = np.asarray(samples, dtype=np.int64).reshape(len(indices), self.k)
        if not len(indices):
            return 0
        bad = ~self.contains_batch(indices, samples)
        if bad.any():
            from .errors import OracleInconsistencyError

            j = int(np.flatnonzero(bad)[0])
            raise OracleInconsistencyError(
                f"tuple {tuple(samples[j])} sampled from set {int(indices[j])} fails its membership test")
        uniq, inverse = np.unique(samples, axis=0, return_inverse=True)
        first = np.array([self.first_index(row) for row in uniq.tolist()], dtype=np.int64)
        return int(np.count_nonzero(first[inverse.ravel()] == indices))


def union_by_membership(system: PatternSetSystem) -> int:
    """Exact union size by testing every distinct k-tuple against the membership oracle."""
    total = 0
    for v in permutations(range(system.graph.n), system.k):
        if any(system.contains(i, v) for i in system.candidate_indices(v)):
            total += 1
    return total


def union_by_first_index(system: PatternSetSystem) -> int:
    """Exact union size: tuples that have a canonical set. Faster than the membership scan."""
    return sum(1 for v in permutations(range(system.graph.n), system.k) if system.first_index(v) is not None)


# ----------------------------------------------------------------------------


def _patterns_for(phi: Property, k: int) -> list[LabelledPattern]:
    if not phi.monotone:
        raise NonMonotonePropertyError(f"property {phi.name!r} is not monotone; use exact counting instead")
    pats = minimal_patterns(phi, k)
    if phi.treewidth_bound is not None:
        for p in pats:
            if treewidth(p) > phi.treewidth_bound:
                raise ValueError(f"minimal pattern {p} exceeds the declared treewidth bound {phi.treewidth_bound}")
    return pats


def build_set_system(graph: Graph, k: int, phi: Property, family: HashFamily) -> PatternSetSystem:
    return PatternSetSystem(graph, k, _patterns_for(phi, k), family)


def choose_family(n: int, k: int, delta: float, seed: int, mode: str = "auto") -> tuple[HashFamily, float]:
    """Build a family and return it with the failure budget left for the estimator."""
    if mode == "auto":
        mode = EXACT if math.comb(n, k) <= EXACT_SUBSET_CAP else RANDOMIZED
    if mode == EXACT:
        return build_family(n, k, EXACT, seed=seed), delta
    return build_family(n, k, RANDOMIZED, delta_h=delta / 2, seed=seed), delta / 2


def _estimator_delta(family: HashFamily, delta: float) -> float:
    return delta / 2 if family.mode == RANDOMIZED else delta


def _check_args(n: int, k: int):
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > n:
        raise ValueError(f"k = {k} exceeds the number of vertices {n}")


def approx_count_labelled(graph: Graph, k: int, phi: Property, epsilon: float, delta: float, seed: int = 0,
                          family: HashFamily | None = None, family_mode: str = "auto", workers: int = 1) -> Estimate:
    """Estimate the number of distinct k-tuples whose labelled induced graph satisfies ``phi``."""
    _check_args(graph.n, k)
    start = time.perf_counter()
    pats = _patterns_for(phi, k)
    if family is None:
        family, est_delta = choose_family(graph.n, k, delta, seed, family_mode)
    else:
        est_delta = _estimator_delta(family, delta)
    system = PatternSetSystem(graph, k, pats, family)
    est = estimate_union(system, epsilon, est_delta, seed=seed, workers=workers)
    est.delta = delta
    est.extra.update({
        "family_mode": family.mode, "family_size": len(family), "estimator_delta": est_delta,
        "property": phi.name, "k": k, "labelled": True,
        "wall_time_ms": round((time.perf_counter() - start) * 1000, 3),
    })
    return est


def approx_count_unlabelled(graph: Graph, k: int, phi: Property, epsilon: float, delta: float, seed: int = 0,
                            **kwargs) -> Estimate:
    """Estimate the number of k-subsets satisfying a symmetric ``phi`` (labelled / k!)."""
    if not phi.symmetric:
        raise ValueError(f"property {phi.name!r} is not symmetric; only the labelled count is defined")
    est = approx_count_labelled(graph, k, phi, epsilon, delta, seed, **kwargs)
    out = est.scaled(Fraction(1, math.factorial(k)))
    out.extra["labelled"] = False
    return out


def approx_count_motif(graph: Graph, coloring: Coloring, motif: ColorMultiset, epsilon: float, delta: float,
                       seed: int = 0, family: HashFamily | None = None, family_mode: str = "auto",
                       workers: int = 1) -> Estimate:
    """Estimate the number of connected k-subsets whose colour multiset equals ``motif``."""
    k = motif.k
    if k > graph.n:
        raise ValueError(f"motif size {k} exceeds the number of vertices {graph.n}")
    coloring.check(graph)
    start = time.perf_counter()
    pats = _patterns_for(CONNECTED, k)
    if family is None:
        family, est_delta = choose_family(graph.n, k, delta, seed, family_mode)
    else:
        est_delta = _estimator_delta(family, delta)
    system = PatternSetSystem(graph, k, pats, family, coloring=coloring, motif=motif)
    est = estimate_union(system, epsilon, est_delta, seed=seed, workers=workers)
    est.delta = delta
    out = est.scaled(Fraction(1, math.factorial(k)))
    out.extra.update({
        "family_mode": family.mode, "family_size": len(family), "estimator_delta": est_delta,
        "property": CONNECTED.name, "k": k, "labelled": False,
        "wall_time_ms": round((time.perf_counter() - start) * 1000, 3),
    })
    return out
