"""Classical reference algorithms for the finite-size comparisons."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph_lab import GraphInstance

log = logging.getLogger(__name__)


@dataclass
class EmbeddingMatrix:
    vectors: np.ndarray  # (n, k), unit rows

    def __post_init__(self):
        norms = np.linalg.norm(self.vectors, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-8):
            raise ValueError("embedding rows must have unit norm")


@dataclass
class RelaxationResult:
    embedding: EmbeddingMatrix
    value: float
    grad_norm: float
    iterations: int
    converged: bool


@dataclass
class GWResult:
    avg_cut: float
    best_cut: int
    best_bits: np.ndarray
    relaxation: RelaxationResult

    @property
    def converged(self) -> bool:
        return self.relaxation.converged


def _normalize_rows(V):
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def solve_relaxation(
    graph: GraphInstance,
    rng: np.random.Generator,
    rank: int | None = None,
    grad_tol: float = 1e-7,
    max_iter: int = 5000,
) -> RelaxationResult:
    """Maximise ``sum_E (1 - <v_i, v_j>)/2`` over unit rows of rank ``k``.

    Riemannian gradient ascent on the product of spheres with row
    renormalisation as the retraction. Each step starts from a
    Barzilai-Borwein guess and backtracks until the Armijo condition holds.
    """
    n = graph.n
    k = rank or math.ceil(math.sqrt(2 * n))
    E = graph.edge_array()
    A = np.zeros((n, n))
    if len(E):
        A[E[:, 0], E[:, 1]] = A[E[:, 1], E[:, 0]] = 1.0

    def value(V):
        return 0.25 * np.sum(A * (1 - V @ V.T))

    def rgrad(V):
        G = -0.5 * A @ V
        return G - np.sum(G * V, axis=1, keepdims=True) * V

    V = _normalize_rows(rng.standard_normal((n, k)))
    f = value(V)
    G = rgrad(V)
    step = 1.0
    gnorm = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        gnorm = float(np.linalg.norm(G))
        if gnorm <= grad_tol:
            break
        while True:
            V_new = _normalize_rows(V + step * G)
            f_new = value(V_new)
            if f_new >= f + 1e-4 * step * gnorm**2 or step < 1e-12:
                break
            step *= 0.5
        G_new = rgrad(V_new)
        # Barzilai-Borwein guess for the next trial step
        S, Y = V_new - V, G_new - G
        sy = abs(float(np.sum(S * Y)))
        step = float(np.sum(S * S)) / sy if sy > 1e-300 else 1.0
        V, f, G = V_new, f_new, G_new
    converged = gnorm <= grad_tol
    if not converged:
        log.warning("relaxation stopped at grad norm %.2e after %d iterations", gnorm, it)
    return RelaxationResult(EmbeddingMatrix(V), float(f), gnorm, it, converged)


def cut_size(graph: GraphInstance, bits: np.ndarray) -> int:
    E = graph.edge_array()
    return int(np.sum(bits[E[:, 0]] != bits[E[:, 1]])) if len(E) else 0


def gw_maxcut(graph: GraphInstance, roundings: int = 100, seed=None) -> GWResult:
    """Low-rank relaxation followed by ``roundings`` random-hyperplane roundings."""
    if roundings < 1:
        raise ValueError("roundings must be >= 1")
    rng = np.random.default_rng(seed)
    relax = solve_relaxation(graph, rng)
    V = relax.embedding.vectors
    planes = rng.standard_normal((V.shape[1], roundings))
    sides = (V @ planes) >= 0  # (n, roundings)
    E = graph.edge_array()
    if len(E):
        cuts = np.sum(sides[E[:, 0]] != sides[E[:, 1]], axis=0)
    else:
        cuts = np.zeros(roundings, dtype=int)
    best = int(np.argmax(cuts))
    return GWResult(float(cuts.mean()), int(cuts[best]), sides[:, best].copy(), relax)


def greedy_mis(graph: GraphInstance, seed=None) -> np.ndarray:
    """Minimal greedy: take a random minimum-degree vertex, drop its neighbours.

    Stops once the residual graph has no edges and then adds every vertex
    that is left.
    """
    rng = np.random.default_rng(seed)
    adj = graph.adjacency()
    alive = set(range(graph.n))
    chosen = np.zeros(graph.n, dtype=bool)
    n_edges = graph.m
    while n_edges:
        live = sorted(alive)
        deg = np.array([len(adj[v]) for v in live])
        cands = [v for v, dv in zip(live, deg) if dv == deg.min()]
        v = cands[rng.integers(len(cands))]
        chosen[v] = True
        for u in [v, *adj[v]]:
            if u not in alive:
                continue
            alive.discard(u)
            for w in adj[u]:
                adj[w].discard(u)
                n_edges -= 1
            adj[u] = set()
    for v in alive:
        chosen[v] = True
    if not is_independent(graph, chosen):
        raise AssertionError("greedy produced a dependent set")
    return chosen


def greedy_mis_average(graph: GraphInstance, runs: int, seed=None) -> float:
    rng = np.random.default_rng(seed)
    return float(np.mean([greedy_mis(graph, rng).sum() for _ in range(runs)]))


def is_independent(graph: GraphInstance, bits: np.ndarray) -> bool:
    E = graph.edge_array()
    return not len(E) or not np.any(bits[E[:, 0]] & bits[E[:, 1]])


def random_sampling_baseline(graph: GraphInstance) -> float:
    """Expected cut fraction of a uniformly random assignment."""
    return 0.5
