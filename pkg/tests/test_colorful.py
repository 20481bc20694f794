from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from fptcount.colorful import ColoredHost, ColoredPattern, ColorfulDP, count_colorful, is_embedding, sample_colorful
from fptcount.errors import NoWitnessError
from fptcount.graph import Graph
from fptcount.properties import LabelledPattern

from brute_oracles import colorful_witnesses
from test_properties import patterns


def path_pattern(k):
    return LabelledPattern(k, frozenset((i, i + 1) for i in range(1, k)))


def test_c4_path_has_one_copy():
    g = Graph.cycle(4)
    cp = ColoredPattern(path_pattern(3), (1, 2, 3))
    assert count_colorful(g, [1, 2, 3, 3], cp) == 1


def test_non_injective_omega_rejected():
    with pytest.raises(ValueError):
        ColoredPattern(path_pattern(2), (1, 1))


def test_missing_colour_gives_zero_and_sampling_errors():
    cp = ColoredPattern(path_pattern(2), (1, 2))
    g = Graph.path(3)
    assert count_colorful(g, [1, 1, 1], cp) == 0
    with pytest.raises(NoWitnessError):
        sample_colorful(g, [1, 1, 1], cp, np.random.default_rng(0))


@st.composite
def instances(draw, max_n=9, max_k=5):
    p = draw(patterns(min_k=1, max_k=max_k))
    n = draw(st.integers(p.k, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    g = Graph.from_edges(n, edges)
    f = draw(st.lists(st.integers(1, p.k), min_size=n, max_size=n))
    omega = tuple(draw(st.permutations(range(1, p.k + 1))))
    return g, f, ColoredPattern(p, omega)


@given(instances())
def test_count_matches_brute(inst):
    g, f, cp = inst
    assert count_colorful(g, f, cp) == len(colorful_witnesses(g, f, cp.pattern, cp.omega))


@given(instances(max_n=7, max_k=4))
def test_witness_listing_matches_brute(inst):
    g, f, cp = inst
    dp = ColorfulDP(ColoredHost(g, f), cp)
    listed = sorted(dp.witnesses())
    assert listed == sorted(colorful_witnesses(g, f, cp.pattern, cp.omega))
    assert len(set(listed)) == dp.count


@given(instances(max_n=8, max_k=4), st.integers(0, 2**32 - 1))
def test_samples_are_embeddings(inst, seed):
    g, f, cp = inst
    dp = ColorfulDP(ColoredHost(g, f), cp)
    if dp.count == 0:
        return
    rng = np.random.default_rng(seed)
    emb = sample_colorful(g, f, cp, rng)
    assert is_embedding(g, f, cp, emb)
    batch = dp.sample_many(20, rng)
    for row in batch:
        assert is_embedding(g, f, cp, {u: int(v) for u, v in enumerate(row, start=1)})


def test_allowed_mask_restricts_host():
    g = Graph.complete(4)
    cp = ColoredPattern(path_pattern(2), (1, 2))
    f = [1, 2, 1, 2]
    assert ColorfulDP(ColoredHost(g, f), cp).count == 4
    assert ColorfulDP(ColoredHost(g, f, allowed=[True, True, False, True]), cp).count == 2


def _uniformity_pvalue(draws, support):
    counts = Counter(draws)
    observed = [counts.get(w, 0) for w in support]
    assert sum(observed) == len(draws)
    return chisquare(observed).pvalue


def test_scalar_and_vector_samplers_uniform():
    g = Graph.complete(5)
    f = [1, 2, 3, 1, 2]
    cp = ColoredPattern(path_pattern(3), (1, 2, 3))
    dp = ColorfulDP(ColoredHost(g, f), cp)
    support = sorted(dp.witnesses())
    assert len(support) == dp.count == 4
    rng = np.random.default_rng(11)
    scalar = [dp.sample(rng) for _ in range(4000)]
    vector = [tuple(map(int, row)) for row in dp.sample_many(4000, rng)]
    assert _uniformity_pvalue(scalar, support) > 0.001
    assert _uniformity_pvalue(vector, support) > 0.001


def test_sample_many_reproducible():
    g = Graph.petersen()
    f = [1 + v % 3 for v in range(10)]
    cp = ColoredPattern(path_pattern(3), (1, 2, 3))
    dp = ColorfulDP(ColoredHost(g, f), cp)
    a = dp.sample_many(50, np.random.default_rng(3))
    b = dp.sample_many(50, np.random.default_rng(3))
    assert np.array_equal(a, b)
