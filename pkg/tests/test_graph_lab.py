import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_angles
from treeqaoa.graph_lab import (
    GraphInstance,
    QubitCapExceeded,
    brute_force,
    build_tree_graph,
    expected_pruned_size,
    expectations,
    fixed_angle_experiment,
    qaoa_state,
    random_regular,
    read_graph,
    write_graph,
)
from treeqaoa.tree import AngleSchedule, TreeProblem, real_correlators

K4 = GraphInstance(4, tuple(itertools.combinations(range(4), 2)), 3)
CUBE = GraphInstance(8, tuple((u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)), 3)


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphInstance(3, ((0, 0),))
    with pytest.raises(ValueError):
        GraphInstance(3, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        GraphInstance(3, ((0, 3),))
    with pytest.raises(ValueError):
        GraphInstance(3, ((0, 1),), declared_d=1)


def test_edges_are_normalised():
    g = GraphInstance(3, ((2, 1), (1, 0)))
    assert g.edges == ((0, 1), (1, 2))


@given(st.sampled_from([(8, 3), (10, 3), (12, 4), (16, 3), (9, 4), (20, 5)]), st.integers(0, 2**32 - 1))
def test_random_regular_is_simple_and_regular(nd, seed):
    n, d = nd
    g = random_regular(n, d, seed)
    assert g.m == n * d // 2
    assert np.all(g.degrees() == d)
    assert len(set(g.edges)) == g.m
    assert all(u < v for u, v in g.edges)


def test_random_regular_is_seeded():
    assert random_regular(16, 3, 7).edges == random_regular(16, 3, 7).edges


def test_random_regular_rejects_odd_stub_count():
    with pytest.raises(ValueError):
        random_regular(7, 3, 0)


def test_graph_file_roundtrip(tmp_path):
    g = random_regular(10, 3, 1)
    write_graph(g, tmp_path / "g.txt")
    assert read_graph(tmp_path / "g.txt", declared_d=3) == g
    assert (tmp_path / "g.txt").read_text().splitlines()[0] == "10 15"


def test_uniform_state_gives_random_sampling():
    ex = expectations(qaoa_state(K4, 0.0, 3, AngleSchedule.zeros(1)), K4, 0.0, 3)
    assert ex.exp_cut_fraction == pytest.approx(0.5)
    assert ex.mean_z_per_vertex == pytest.approx(0.0, abs=1e-15)


@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_unitarity(seed, p):
    rng = np.random.default_rng(seed)
    g = random_regular(10, 3, rng)
    psi = qaoa_state(g, rng.uniform(-2, 2), 3, random_angles(rng, p))
    assert abs(np.linalg.norm(psi) - 1) < 1e-10


@pytest.mark.parametrize("p, d", [(1, 3), (1, 4), (2, 3)])
@pytest.mark.parametrize("h", [0.0, 0.8])
def test_statevector_oracle(p, d, h, rng):
    for _ in range(3):
        problem = TreeProblem(d, h, p)
        angles = random_angles(rng, p)
        zz, z = real_correlators(problem, angles)
        two = build_tree_graph(problem, "two_tree")
        one = build_tree_graph(problem, "one_tree")
        ex2 = expectations(qaoa_state(two, h, d, angles), two, h, d)
        ex1 = expectations(qaoa_state(one, h, d, angles), one, h, d)
        assert ex2.zz[0] == pytest.approx(zz, abs=1e-10)
        assert ex1.z[0] == pytest.approx(z, abs=1e-10)


def test_tree_graph_shapes():
    two = build_tree_graph(TreeProblem(3, 0, 2), "two_tree")
    assert (two.n, two.m) == (14, 13)
    assert two.edges[0] == (0, 1)
    deg = two.degrees()
    assert deg[0] == deg[1] == 3
    with pytest.raises(QubitCapExceeded):
        build_tree_graph(TreeProblem(3, 0, 4), "two_tree")
    with pytest.raises(ValueError):
        build_tree_graph(TreeProblem(3, 0, 1), "three_tree")


def test_qubit_cap():
    g = GraphInstance(30, ())
    with pytest.raises(QubitCapExceeded):
        qaoa_state(g, 0.0, 3, AngleSchedule.zeros(1))


@pytest.mark.parametrize("graph, cut, mis", [(K4, 4, 1), (CUBE, 12, 4)])
def test_brute_force_known(graph, cut, mis):
    best, bits = brute_force(graph, "maxcut")
    assert best == cut
    assert sum(bits[u] != bits[v] for u, v in graph.edges) == cut
    best, bits = brute_force(graph, "mis")
    assert best == mis and bits.sum() == mis
    assert not any(bits[u] and bits[v] for u, v in graph.edges)


def test_brute_force_cap():
    with pytest.raises(QubitCapExceeded):
        brute_force(GraphInstance(25, ()), "maxcut")


@given(st.integers(0, 2**32 - 1))
def test_expectation_sandwich(seed):
    rng = np.random.default_rng(seed)
    g = random_regular(10, 3, rng)
    psi = qaoa_state(g, 0.0, 3, random_angles(rng, 2))
    ex = expectations(psi, g, 0.0, 3)
    assert ex.exp_cut_fraction * g.m <= brute_force(g, "maxcut")[0] + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_pruned_size_bounds(seed):
    rng = np.random.default_rng(seed)
    g = random_regular(10, 3, rng)
    psi = qaoa_state(g, 1.0, 3, random_angles(rng, 2))
    ex = expectations(psi, g, 1.0, 3)
    size = expected_pruned_size(psi, g)
    assert ex.exp_independence_objective * g.n <= size + 1e-9
    assert size <= brute_force(g, "mis")[0] + 1e-9


def test_finite_experiment_on_k4_sized_graphs():
    rep = fixed_angle_experiment(3, 1, 4, 3, AngleSchedule([0.533], [-0.3927]), seed=5, roundings=10)
    for row in rep["instances"]:
        assert row["optimum"] == 4
        assert row["qaoa_expected_cut"] <= 4
        assert row["baseline_best"] <= 4
    agg = rep["aggregate"]["qaoa_cut_fraction"]
    assert agg["band3"] == pytest.approx(3 * agg["sem"])


def test_finite_experiment_reproducible():
    a = AngleSchedule([0.43], [-0.40])
    r1 = fixed_angle_experiment(3, 1, 10, 4, a, seed=9, problem="mis", greedy_runs=5)
    r2 = fixed_angle_experiment(3, 1, 10, 4, a, seed=9, problem="mis", greedy_runs=5)
    assert r1 == r2
    assert r1["config"]["baseline"] == "greedy"
    assert math.isclose(r1["config"]["h"], 1.0)
