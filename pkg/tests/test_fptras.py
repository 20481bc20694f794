from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fptcount.brute import brute_count, brute_count_labelled, brute_count_motif
from fptcount.errors import NonMonotonePropertyError
from fptcount.fptras import (
    PatternSetSystem, approx_count_labelled, approx_count_motif, approx_count_unlabelled, build_set_system,
    union_by_membership,
)
from fptcount.graph import Coloring, ColorMultiset, Graph, random_graph
from fptcount.hashing import RANDOMIZED, build_family
from fptcount.properties import CONNECTED, EDGELESS, HAMILTONIAN, NON_BIPARTITE, minimal_patterns, pattern_list_property
from fptcount.properties import parse_pattern

from brute_oracles import labelled_tuples
from conftest import colored_graphs, graphs

STAR = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
STAR_COLORS = Coloring((0, 1, 1, 1))


def system(g, k, phi=CONNECTED, seed=0):
    return build_set_system(g, k, phi, build_family(g.n, k, seed=seed))


def materialise(s: PatternSetSystem, i: int) -> set:
    """Elements of set i read off the DP witness listing through the witness map."""
    fi, si, hi, di = s.decode(i)
    dp = s._dps.get(s._group(fi, si, hi, di))
    if dp is None:
        return set()
    sigma = s.perms[si]
    return {tuple(emb[sigma[j] - 1] for j in range(s.k)) for emb in dp.witnesses()}


@pytest.mark.parametrize("g, k, truth", [
    (Graph.complete(4), 3, 24), (Graph(6), 3, 0), (Graph.cycle(5), 3, 30), (Graph.petersen(), 3, 180),
])
def test_union_examples(g, k, truth):
    s = system(g, k)
    assert union_by_membership(s) == truth
    assert s.m == len(s.family) * math.factorial(k) * len(minimal_patterns(CONNECTED, k))


@given(graphs(min_n=1, max_n=6), st.data())
@settings(max_examples=25)
def test_first_index_matches_scan(g, data):
    k = data.draw(st.integers(1, min(g.n, 3)))
    phi = data.draw(st.sampled_from([CONNECTED, NON_BIPARTITE, HAMILTONIAN]))
    s = system(g, k, phi, seed=data.draw(st.integers(0, 99)))
    from itertools import permutations

    for v in permutations(range(g.n), k):
        scan = next((i for i in range(s.m) if s.contains(i, v)), None)
        assert s.first_index(v) == scan


@given(colored_graphs(k=3, min_n=3, max_n=6), st.data())
@settings(max_examples=20)
def test_motif_first_index_matches_scan(inst, data):
    g, colors = inst
    c = Coloring(tuple(colors))
    k = data.draw(st.integers(1, 3))
    motif = ColorMultiset.of(data.draw(st.lists(st.integers(1, 3), min_size=k, max_size=k)))
    s = PatternSetSystem(g, k, minimal_patterns(CONNECTED, k), build_family(g.n, k, seed=1), c, motif)
    from itertools import permutations

    for v in permutations(range(g.n), k):
        scan = next((i for i in range(s.m) if s.contains(i, v)), None)
        assert s.first_index(v) == scan


@given(graphs(min_n=1, max_n=6), st.data())
@settings(max_examples=20)
def test_witness_map_is_bijection(g, data):
    k = data.draw(st.integers(1, min(g.n, 3)))
    s = system(g, k)
    sizes = s.sizes()
    for i in range(s.m):
        elems = materialise(s, i)
        assert len(elems) == sizes[i] == s.size(i)
        assert all(s.contains(i, v) for v in elems)
    # and the sets cover exactly the satisfying tuples
    union = set().union(*(materialise(s, i) for i in range(s.m)))
    assert union == set(labelled_tuples(g, k, CONNECTED))


def test_sampling_respects_membership():
    g = Graph.petersen()
    s = system(g, 4)
    sizes = np.array(s.sizes(), dtype=np.int64)
    idx = np.flatnonzero(sizes)[:40]
    batch = np.repeat(idx, 5)
    samples = s.sample_batch(batch, seed=9)
    assert s.contains_batch(batch, samples).all()
    for i, v in zip(batch.tolist(), samples.tolist()):
        assert s.contains(i, v)
        assert s.contains(i, s.sample(i, np.random.default_rng(i)))


def test_motif_system_bound():
    s = PatternSetSystem(STAR, 3, minimal_patterns(CONNECTED, 3), build_family(4, 3), STAR_COLORS,
                         ColorMultiset({0: 1, 1: 2}))
    assert s.m == len(s.family) * 6 * 3 * 6
    assert s.multiplicity_bound == len(s.family) * 3 * 2


def test_estimates_examples():
    assert float(approx_count_unlabelled(Graph.complete(4), 3, CONNECTED, 0.1, 0.05).value) == pytest.approx(4, rel=0.1)
    assert approx_count_unlabelled(Graph(5), 3, CONNECTED, 0.1, 0.05).value == 0
    assert approx_count_unlabelled(Graph.path(4), 3, NON_BIPARTITE, 0.1, 0.05).value == 0
    est = approx_count_unlabelled(Graph.cycle(5), 3, CONNECTED, 0.1, 0.05, seed=7)
    assert 4.5 <= float(est.value) <= 5.5


def test_scaling_between_labelled_and_unlabelled():
    g = random_graph(9, 0.4, 3)
    for seed in range(3):
        lab = approx_count_labelled(g, 3, CONNECTED, 0.2, 0.1, seed=seed)
        unl = approx_count_unlabelled(g, 3, CONNECTED, 0.2, 0.1, seed=seed)
        assert unl.value * 6 == lab.value


def test_worker_count_does_not_change_result():
    g = Graph.petersen()
    a = approx_count_labelled(g, 4, CONNECTED, 0.3, 0.1, seed=4)
    b = approx_count_labelled(g, 4, CONNECTED, 0.3, 0.1, seed=4, workers=3)
    assert a.value == b.value and a.accepted == b.accepted and a.trials == b.trials


def test_motif_examples():
    assert float(approx_count_motif(STAR, STAR_COLORS, ColorMultiset({0: 1, 1: 2}), 0.1, 0.05).value) == \
        pytest.approx(3, rel=0.1)
    assert approx_count_motif(STAR, STAR_COLORS, ColorMultiset({1: 3}), 0.1, 0.05).value == 0
    tri = Graph.complete(3)
    assert float(approx_count_motif(tri, Coloring((5, 5, 5)), ColorMultiset({5: 3}), 0.1, 0.05).value) == \
        pytest.approx(1, rel=0.1)
    assert approx_count_motif(tri, Coloring((5, 5, 5)), ColorMultiset({9: 1}), 0.1, 0.05).value == 0


@given(colored_graphs(k=3, min_n=3, max_n=7), st.data())
@settings(max_examples=15)
def test_motif_union_matches_brute(inst, data):
    g, colors = inst
    c = Coloring(tuple(colors))
    k = data.draw(st.integers(1, 3))
    motif = ColorMultiset.of(data.draw(st.lists(st.integers(1, 3), min_size=k, max_size=k)))
    s = PatternSetSystem(g, k, minimal_patterns(CONNECTED, k), build_family(g.n, k, seed=2), c, motif)
    assert union_by_membership(s) == math.factorial(k) * brute_count_motif(g, c, motif)


def test_non_symmetric_pattern_property():
    phi = pattern_list_property([parse_pattern("1-2,2-3", 3)])
    g = random_graph(7, 0.5, 1)
    s = build_set_system(g, 3, phi, build_family(7, 3))
    assert union_by_membership(s) == brute_count_labelled(g, 3, phi)
    with pytest.raises(ValueError):
        approx_count_unlabelled(g, 3, phi, 0.1, 0.1)


def test_randomized_family_splits_delta():
    g = random_graph(10, 0.5, 2)
    est = approx_count_labelled(g, 3, CONNECTED, 0.2, 0.1, seed=1, family_mode=RANDOMIZED)
    assert est.extra["family_mode"] == RANDOMIZED
    assert est.extra["estimator_delta"] == pytest.approx(0.05) and est.delta == 0.1
    truth = brute_count_labelled(g, 3, CONNECTED)
    assert abs(float(est.value) - truth) <= 0.2 * truth


def test_errors():
    with pytest.raises(NonMonotonePropertyError):
        approx_count_labelled(Graph.path(4), 2, EDGELESS, 0.1, 0.1)
    with pytest.raises(ValueError):
        approx_count_labelled(Graph.path(3), 4, CONNECTED, 0.1, 0.1)
    with pytest.raises(ValueError):
        approx_count_motif(STAR, STAR_COLORS, ColorMultiset({1: 5}), 0.1, 0.1)


def test_estimate_provenance():
    est = approx_count_unlabelled(Graph.cycle(5), 3, CONNECTED, 0.1, 0.05, seed=3)
    d = est.to_dict()
    for key in ("value", "epsilon", "delta", "trials", "m", "family_mode", "seed", "wall_time_ms"):
        assert key in d
    assert Fraction(d["value_exact"]) == est.value
