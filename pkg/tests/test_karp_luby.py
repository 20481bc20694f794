from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fptcount.errors import OracleInconsistencyError
from fptcount.karp_luby import ExplicitSetSystem, SetSystem, estimate_union, exact_union, trial_count

set_lists = st.lists(st.sets(st.integers(0, 15), max_size=8), min_size=0, max_size=6)


def test_trial_formula():
    assert trial_count(2, 0.1, 0.01) == math.ceil(3 * 2 / 0.01 * math.log(200))


def test_two_overlapping_sets():
    sys_ = ExplicitSetSystem([{1, 2}, {2, 3}])
    assert exact_union(sys_) == 3
    vals = [float(estimate_union(sys_, 0.1, 0.01, seed=s).value) for s in range(100)]
    assert sum(2.7 <= v <= 3.3 for v in vals) >= 99


def test_single_set_exact():
    sys_ = ExplicitSetSystem([set(range(7))])
    est = estimate_union(sys_, 0.2, 0.1, seed=5)
    assert est.value == 7 and est.accepted == est.trials


def test_disjoint_sets_concentrate_on_total():
    sys_ = ExplicitSetSystem([{0, 1}, {2, 3, 4}, {5}])
    assert exact_union(sys_) == 6
    est = estimate_union(sys_, 0.1, 0.05, seed=1)
    assert est.value == 6


def test_identical_sets_halve_acceptance():
    sys_ = ExplicitSetSystem([set(range(1, 6))] * 2)
    assert exact_union(sys_) == 5
    est = estimate_union(sys_, 0.05, 0.05, seed=2)
    assert abs(float(est.value) - 5) <= 0.25
    assert abs(est.accepted / est.trials - 0.5) < 0.02


def test_empty_systems():
    assert exact_union(ExplicitSetSystem([])) == 0
    est = estimate_union(ExplicitSetSystem([set(), set()]), 0.1, 0.1)
    assert est.value == 0 and est.trials == 0


def test_invalid_parameters():
    sys_ = ExplicitSetSystem([{1}])
    with pytest.raises(ValueError):
        estimate_union(sys_, 0, 0.1)
    with pytest.raises(ValueError):
        estimate_union(sys_, 0.1, 1.0)


@given(set_lists)
def test_exact_union_matches_set_union(sets):
    assert exact_union(ExplicitSetSystem(sets)) == len(set().union(*sets)) if sets else True


@given(set_lists)
def test_canonical_index_partitions_union(sets):
    sys_ = ExplicitSetSystem(sets)
    canon = sum(1 for i, s in enumerate(sys_.sets) for x in s if sys_.first_index(x) == i)
    assert canon == exact_union(sys_)


@given(set_lists, st.integers(0, 10**6))
def test_deterministic_and_worker_independent(sets, seed):
    sys_ = ExplicitSetSystem(sets)
    a = estimate_union(sys_, 0.3, 0.2, seed=seed)
    b = estimate_union(sys_, 0.3, 0.2, seed=seed, workers=3)
    assert a == b
    assert a.value == Fraction(a.total_size * a.accepted, a.trials) if a.trials else a.value == 0


def test_unbiased_on_explicit_system():
    sys_ = ExplicitSetSystem([{1, 2, 3}, {3, 4}, {4, 5, 6, 1}])
    truth = exact_union(sys_)

    class Cheap(ExplicitSetSystem):
        multiplicity_bound = 1  # ~9 trials per run, so 10^4 runs stay fast

    cheap = Cheap(sys_.sets)
    vals = np.array([float(estimate_union(cheap, 1.0, 0.5, seed=s).value) for s in range(10_000)])
    se = vals.std(ddof=1) / np.sqrt(len(vals))
    assert abs(vals.mean() - truth) <= 2 * se


def test_big_integer_sizes():
    class Huge(SetSystem):
        m = 2

        def size(self, i):
            return 2 ** 70

        def sample(self, i, rng):
            return (i, int(rng.integers(0, 1000)))

        def contains(self, i, x):
            return x[0] == i

    est = estimate_union(Huge(), 0.5, 0.5, seed=1)
    assert est.value == 2 ** 71


def test_inconsistent_oracle_aborts():
    class Liar(ExplicitSetSystem):
        def contains(self, i, x):
            return False

    with pytest.raises(OracleInconsistencyError):
        estimate_union(Liar([{1}]), 0.5, 0.5)
