import math

import numpy as np
import pytest

from treeqaoa.angle_tables import golden_angles
from treeqaoa.optimizer import (
    OptimizationConfig,
    canonical,
    default_search_box,
    finite_difference_gradient,
    interpolate_angles,
    optimize,
    pad_angles,
    sweep_field,
    warm_start_ladder,
)
from treeqaoa.tree import AngleSchedule, TreeProblem, energy_density, real_correlators

FAST = OptimizationConfig(restarts=6, seed=3)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizationConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizationConfig(simplex_tolerance=0)
    with pytest.raises(ValueError):
        OptimizationConfig(backend="bogus")
    with pytest.raises(ValueError):
        OptimizationConfig(screen_factor=0)
    assert OptimizationConfig().n_restarts(3) == 32
    assert OptimizationConfig().n_restarts(4) == 64


def test_default_box():
    box = default_search_box(4, 2)
    assert box[0] == (0.0, math.pi) and box[3] == (-math.pi / 2, math.pi / 2)
    with pytest.raises(ValueError):
        OptimizationConfig(search_box=((0, 1),)).box(3, 1)


def test_thread_env(monkeypatch):
    monkeypatch.setenv("TREEQAOA_THREADS", "3")
    assert OptimizationConfig().n_workers == 3
    monkeypatch.setenv("TREEQAOA_THREADS", "x")
    assert OptimizationConfig().n_workers == 1


def test_canonical_respects_symmetries():
    problem = TreeProblem(3, 1.3, 2)
    x = np.array([-0.4, 0.9, 2.9, -0.3])
    y = canonical(x)
    assert y[0] > 0 and np.all(np.abs(y[2:]) <= math.pi / 2)
    e = [energy_density(problem, AngleSchedule.from_vector(v)) for v in (x, y)]
    assert e[0] == pytest.approx(e[1], abs=1e-12)


def test_interpolation_and_padding():
    a = AngleSchedule([0.2, 0.6], [-0.5, -0.1])
    b = interpolate_angles(a)
    np.testing.assert_allclose(b.gammas, [0.2, 0.4, 0.6])
    np.testing.assert_allclose(b.betas, [-0.5, -0.3, -0.1])
    problem = TreeProblem(3, 0.5, 2)
    assert energy_density(TreeProblem(3, 0.5, 3), pad_angles(a)) == pytest.approx(energy_density(problem, a), abs=1e-13)


def test_maxcut_p1_matches_table():
    problem = TreeProblem(3, 0.0, 1)
    res = optimize(problem, FAST)
    assert res.best_energy <= energy_density(problem, AngleSchedule([0.5330], [-0.3927])) + 1e-6
    assert res.gradient_norm_estimate <= 1e-4 and res.stationary
    assert res.best_energy == pytest.approx(-1 / 3, abs=1e-9)
    assert res.best_energy == pytest.approx(energy_density(problem, res.best_angles), abs=1e-10)


def test_mis_p2_matches_table():
    problem = TreeProblem(3, 1.0, 2)
    res = optimize(problem, OptimizationConfig(restarts=8, seed=1))
    ref = AngleSchedule([0.3678, 0.7957], [-0.5175, -0.2642])
    assert res.best_energy <= energy_density(problem, ref) + 1e-6
    assert res.gradient_norm_estimate <= 1e-4


def test_trivial_field_reaches_nonpositive_energy():
    assert optimize(TreeProblem(6, 12.0, 1), FAST).best_energy <= 0


def test_screening_finds_narrow_basin():
    # global p=1 optimum located by a dense grid scan plus local polish;
    # plain uniform starts settle in a neighbouring basin at -1.815465
    res = optimize(TreeProblem(20, 18.0, 1), OptimizationConfig(seed=0))
    assert res.best_energy == pytest.approx(-1.828816, abs=1e-6)
    assert res.best_angles.gammas[0] == pytest.approx(0.14853, abs=1e-4)


def test_seed_determinism():
    problem = TreeProblem(4, 0.7, 1)
    a, b = optimize(problem, FAST), optimize(problem, FAST)
    assert a.best_angles == b.best_angles and a.best_energy == b.best_energy


def test_parallel_matches_serial():
    problem = TreeProblem(3, 0.4, 1)
    serial = optimize(problem, OptimizationConfig(restarts=4, seed=2, n_workers=1))
    parallel = optimize(problem, OptimizationConfig(restarts=4, seed=2, n_workers=2))
    assert serial.best_angles == parallel.best_angles


def test_nonconvergence_is_flagged_not_raised():
    res = optimize(TreeProblem(3, 0.0, 2), OptimizationConfig(restarts=2, max_iterations=3))
    assert res.all_converged_failed and res.restarts_converged == 0


def test_ladder_single_entry_equals_optimize():
    problem = TreeProblem(3, 0.0, 1)
    (res,) = warm_start_ladder(problem, 1, FAST)
    assert res.best_angles == optimize(problem, FAST).best_angles


def test_ladder_maxcut_d3():
    ladder = warm_start_ladder(TreeProblem(3, 0.0, 1), 3, FAST)
    energies = [r.best_energy for r in ladder]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
    assert energies[-1] <= energy_density(TreeProblem(3, 0.0, 3), golden_angles("maxcut", 3, 3)) + 1e-5


def test_ladder_strict_improvement_d4():
    ladder = warm_start_ladder(TreeProblem(4, 2.0, 1), 2, FAST)
    assert ladder[1].best_energy < ladder[0].best_energy - 1e-4


def test_ladder_rejects_bad_depth():
    with pytest.raises(ValueError):
        warm_start_ladder(TreeProblem(3, 0.0, 1), 0)


def test_finite_difference_gradient_of_quadratic_point():
    problem = TreeProblem(3, 0.0, 1)
    g = finite_difference_gradient(problem, AngleSchedule([0.5330210581], [-math.pi / 8]))
    assert np.linalg.norm(g) < 1e-6


def test_sweep_trivial_regime():
    d = 3
    hs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    sweep = sweep_field(d, 1, hs, FAST)
    energies = [r.best_energy for _, r in sweep]
    for (h1, e1), (h2, e2) in zip(zip(hs, energies), zip(hs[1:], energies[1:])):
        # the optimum is concave in h with slope <z>/sqrt(d), |<z>| <= 1
        assert abs(e2 - e1) <= abs(h2 - h1) / math.sqrt(d) + 1e-9
    for h, r in sweep:
        # all spins down is the classical ground state once h > d
        if h > d:
            assert r.best_energy >= (d / 2 - h) / math.sqrt(d) - 1e-9
            _, z = real_correlators(r.problem, r.best_angles)
            assert z < -0.75
    assert sweep[0][1].best_energy == pytest.approx(optimize(TreeProblem(3, 0.0, 1), FAST).best_energy, abs=1e-9)


def test_sweep_transition_gamma_shrinks():
    (_, r0), (_, r4) = sweep_field(6, 1, [0.0, 4.0], FAST)
    assert 0 < r4.best_angles.gammas[0] < r0.best_angles.gammas[0]


def test_sweep_requires_sorted_grid():
    with pytest.raises(ValueError):
        sweep_field(3, 1, [1.0, 0.0], FAST)
