"""Multi-start minimisation of the asymptotic energy density over the angles."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .tree.core import AngleSchedule, TreeProblem
from .tree.energy import Backend, energy_density

log = logging.getLogger(__name__)

FD_STEP = 1e-5
STATIONARY_TOL = 1e-4
TIE_TOL = 1e-9
THREADS_ENV = "TREEQAOA_THREADS"


def default_restarts(p: int) -> int:
    return 32 if p <= 3 else 64


def default_search_box(d: int, p: int) -> list[tuple[float, float]]:
    g = (0.0, math.pi * math.sqrt(d) / 2)
    b = (-math.pi / 2, math.pi / 2)
    return [g] * p + [b] * p


def _env_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class OptimizationConfig:
    restarts: int | None = None  # None: 32 for p <= 3, 64 above
    max_iterations: int = 20000
    simplex_tolerance: float = 1e-11
    seed: int = 0
    warm_start: AngleSchedule | None = None
    search_box: tuple[tuple[float, float], ...] | None = None
    backend: str = Backend.BLOCKS.value
    screen_factor: int = 16  # candidate pool per screened start; 1 disables screening
    n_workers: int = field(default_factory=_env_workers)

    def __post_init__(self):
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.simplex_tolerance > 0:
            raise ValueError("simplex_tolerance must be > 0")
        if self.screen_factor < 1:
            raise ValueError("screen_factor must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        Backend(self.backend)

    def n_restarts(self, p: int) -> int:
        return self.restarts if self.restarts is not None else default_restarts(p)

    def box(self, d: int, p: int) -> list[tuple[float, float]]:
        if self.search_box is None:
            return default_search_box(d, p)
        if len(self.search_box) != 2 * p:
            raise ValueError(f"search box has {len(self.search_box)} entries, need {2 * p}")
        return [tuple(b) for b in self.search_box]


@dataclass(frozen=True)
class RestartOutcome:
    x: tuple[float, ...]
    energy: float
    converged: bool
    n_evaluations: int


@dataclass(frozen=True)
class OptimizationResult:
    problem: TreeProblem
    best_angles: AngleSchedule
    best_energy: float
    restarts_converged: int
    gradient_norm_estimate: float
    restarts: int
    all_converged_failed: bool = False

    @property
    def stationary(self) -> bool:
        return self.gradient_norm_estimate <= STATIONARY_TOL


def _objective(problem: TreeProblem, backend: str):
    def f(x):
        return energy_density(problem, AngleSchedule.from_vector(x), backend)

    return f


def finite_difference_gradient(
    problem: TreeProblem, angles: AngleSchedule, step: float = FD_STEP, backend: str = "blocks"
) -> np.ndarray:
    """Central differences of the energy density in the flat angle vector."""
    f = _objective(problem, backend)
    x = angles.as_vector()
    g = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2 * step)
    return g


def canonical(x: np.ndarray) -> np.ndarray:
    """Representative of an angle vector under the exact symmetries.

    Shifting any beta by pi only changes a global phase, and flipping every
    angle conjugates the state.
    """
    p = len(x) // 2
    x = np.array(x, dtype=float)
    if x[0] < 0 or (x[0] == 0 and x[p] > 0):
        x = -x
    x[p:] = (x[p:] + np.pi / 2) % np.pi - np.pi / 2
    return x


def _run_restart(args) -> RestartOutcome:
    problem, backend, x0, max_iter, tol = args
    f = _objective(problem, backend)
    opts = dict(xatol=tol, fatol=tol, maxiter=max_iter, maxfev=4 * max_iter, adaptive=len(x0) > 4)
    res = minimize(f, x0, method="Nelder-Mead", options=opts)
    nfev = res.nfev
    # one restart of the simplex around the end-point shakes off early collapse
    res2 = minimize(f, res.x, method="Nelder-Mead", options=opts)
    nfev += res2.nfev
    best = res2 if res2.fun <= res.fun else res
    x = canonical(np.asarray(best.x, dtype=float))
    return RestartOutcome(tuple(float(v) for v in x), float(best.fun), bool(res2.success), int(nfev))


def starting_points(
    problem: TreeProblem, config: OptimizationConfig, extra: Sequence[AngleSchedule] = ()
) -> list[np.ndarray]:
    p = problem.p
    box = np.array(config.box(problem.d, p))
    fixed = [a.as_vector() for a in ([config.warm_start] if config.warm_start else []) + list(extra)]
    for x in fixed:
        if len(x) != 2 * p:
            raise ValueError(f"warm start has {len(x) // 2} layers, problem has p={p}")
    n_random = max(0, config.n_restarts(p) - len(fixed))
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    random = rng.uniform(box[:, 0], box[:, 1], size=(n_random, 2 * p))
    if config.screen_factor > 1 and n_random > 1:
        # the deepest basins get narrow in gamma as d grows; uniform starts miss
        # them, so half the starts are the lowest points of a larger pool
        n_screen = n_random // 2
        pool = rng.uniform(box[:, 0], box[:, 1], size=(n_screen * config.screen_factor, 2 * p))
        f = _objective(problem, config.backend)
        order = np.argsort([f(x) for x in pool], kind="stable")
        random[:n_screen] = pool[order[:n_screen]]
    return fixed + list(random)


def optimize(
    problem: TreeProblem, config: OptimizationConfig | None = None, extra_starts: Sequence[AngleSchedule] = ()
) -> OptimizationResult:
    """Best of several Nelder-Mead runs; deterministic for a given seed.

    Ties in energy (to ``TIE_TOL``) are broken by the lexicographically smallest
    angle vector. Non-convergence is reported through the result flag.
    """
    config = config or OptimizationConfig()
    starts = starting_points(problem, config, extra_starts)
    jobs = [(problem, config.backend, x0, config.max_iterations, config.simplex_tolerance) for x0 in starts]
    if config.n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.n_workers) as ex:
            outcomes = list(ex.map(_run_restart, jobs))
    else:
        outcomes = [_run_restart(j) for j in jobs]

    e_min = min(o.energy for o in outcomes)
    tied = [o for o in outcomes if o.energy <= e_min + TIE_TOL]
    best = min(tied, key=lambda o: o.x)
    angles = AngleSchedule.from_vector(best.x)
    energy = energy_density(problem, angles, config.backend)
    grad = finite_difference_gradient(problem, angles, backend=config.backend)
    gnorm = float(np.linalg.norm(grad))
    n_conv = sum(o.converged for o in outcomes)
    if n_conv == 0:
        log.warning("no restart converged for %s", problem)
    if gnorm > STATIONARY_TOL:
        log.warning("best point for %s has gradient norm %.2e", problem, gnorm)
    return OptimizationResult(problem, angles, energy, n_conv, gnorm, len(outcomes), n_conv == 0)


def interpolate_angles(angles: AngleSchedule) -> AngleSchedule:
    """Depth ``p+1`` guess by linear interpolation of a depth ``p`` schedule."""
    p = angles.p

    def grow(v):
        v = np.concatenate([[0.0], v, [0.0]])
        return [((i - 1) * v[i - 1] + (p - i + 1) * v[i]) / p for i in range(1, p + 2)]

    return AngleSchedule(grow(np.array(angles.gammas)), grow(np.array(angles.betas)))


def pad_angles(angles: AngleSchedule) -> AngleSchedule:
    """Append a zero layer; the energy is unchanged."""
    return AngleSchedule(angles.gammas + (0.0,), angles.betas + (0.0,))


def warm_start_ladder(
    problem: TreeProblem, p_max: int, config: OptimizationConfig | None = None
) -> list[OptimizationResult]:
    """Optimise ``p = 1..p_max``, seeding each depth from the previous optimum.

    The zero-padded previous optimum is always among the starts, so the
    energies cannot increase with depth.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    config = config or OptimizationConfig()
    out = [optimize(replace(problem, p=1), config)]
    for p in range(2, p_max + 1):
        prev = out[-1].best_angles
        cfg = replace(config, warm_start=interpolate_angles(prev))
        out.append(optimize(replace(problem, p=p), cfg, extra_starts=[pad_angles(prev)]))
    return out


def sweep_field(
    d: int, p: int, h_grid: Sequence[float], config: OptimizationConfig | None = None
) -> list[tuple[float, OptimizationResult]]:
    """One optimisation per field value, warm-started from the previous point."""
    h_grid = [float(h) for h in h_grid]
    if any(b < a for a, b in zip(h_grid, h_grid[1:])):
        raise ValueError("h_grid must be sorted")
    config = config or OptimizationConfig()
    out = []
    prev = config.warm_start
    for h in h_grid:
        res = optimize(TreeProblem(d, h, p), replace(config, warm_start=prev))
        out.append((h, res))
        prev = res.best_angles
    return out
