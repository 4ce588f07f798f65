import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeqaoa.baselines import (
    EmbeddingMatrix,
    cut_size,
    greedy_mis,
    greedy_mis_average,
    gw_maxcut,
    is_independent,
    random_sampling_baseline,
    solve_relaxation,
)
from treeqaoa.graph_lab import GraphInstance, brute_force, expectations, qaoa_state, random_regular
from treeqaoa.tree import AngleSchedule

K4 = GraphInstance(4, tuple(itertools.combinations(range(4), 2)), 3)
K33 = GraphInstance(6, tuple((u, v) for u in range(3) for v in range(3, 6)), 3)
CUBE = GraphInstance(8, tuple((u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)), 3)


def test_embedding_rows_checked():
    with pytest.raises(ValueError):
        EmbeddingMatrix(np.ones((2, 2)))


def test_gw_cube_finds_bipartition():
    res = gw_maxcut(CUBE, 100, seed=0)
    assert res.best_cut == 12
    assert res.converged
    assert cut_size(CUBE, res.best_bits) == 12


def test_gw_single_edge():
    g = GraphInstance(2, ((0, 1),))
    res = gw_maxcut(g, 20, seed=1)
    assert res.avg_cut == 1 and res.best_cut == 1


def test_gw_rejects_zero_roundings():
    with pytest.raises(ValueError):
        gw_maxcut(K4, 0)


@given(st.integers(0, 2**32 - 1))
def test_gw_properties(seed):
    g = random_regular(12, 3, seed)
    res = gw_maxcut(g, 50, seed)
    opt, _ = brute_force(g, "maxcut")
    assert res.best_cut >= res.avg_cut
    assert res.best_cut <= opt
    assert res.relaxation.value >= opt - 1e-6
    assert res.avg_cut >= 0.878 * opt


def test_relaxation_unit_rows_and_rank():
    g = random_regular(16, 3, 3)
    r = solve_relaxation(g, np.random.default_rng(0))
    assert r.embedding.vectors.shape == (16, math.ceil(math.sqrt(32)))
    np.testing.assert_allclose(np.linalg.norm(r.embedding.vectors, axis=1), 1, atol=1e-8)
    assert r.converged and r.grad_norm <= 1e-7


def test_rounding_average_concentrates():
    g = random_regular(16, 3, 11)
    means = [gw_maxcut(g, 400, s).avg_cut for s in range(4)]
    # standard error of a 400-rounding mean on 24 edges is well under 0.5
    assert np.ptp(means) < 2.0


def test_greedy_examples():
    assert greedy_mis(K4, 0).sum() == 1
    for s in range(20):
        assert greedy_mis(K33, s).sum() == 3
    empty = GraphInstance(5, ())
    assert greedy_mis(empty, 0).all()


@given(st.integers(0, 2**32 - 1), st.sampled_from([(12, 3), (14, 3), (12, 4), (16, 5)]))
def test_greedy_guarantee_holds(seed, nd):
    n, d = nd
    g = random_regular(n, d, seed)
    mis, _ = brute_force(g, "mis")
    bits = greedy_mis(g, seed)
    assert is_independent(g, bits)
    assert bits.sum() >= math.ceil(3 / (d + 2) * mis)


def test_greedy_average_is_seeded():
    g = random_regular(14, 3, 2)
    assert greedy_mis_average(g, 10, 5) == greedy_mis_average(g, 10, 5)


def test_random_sampling_baseline():
    g = random_regular(10, 3, 0)
    assert random_sampling_baseline(g) == 0.5
    ex = expectations(qaoa_state(g, 0.0, 3, AngleSchedule.zeros(1)), g, 0.0, 3)
    assert ex.exp_cut_fraction == pytest.approx(0.5)
    assert 0.5 / 0.92410 == pytest.approx(0.5411, abs=1e-4)
