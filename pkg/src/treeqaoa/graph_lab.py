"""Finite-size QAOA lab: graphs, exact statevectors, brute force, fixed-angle runs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .tree import AngleSchedule, TreeProblem, tree_sizes

QUBIT_CAP = 26
BRUTE_FORCE_CAP = 24


class QubitCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GraphInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    declared_d: int | None = None

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if self.declared_d is not None:
            deg = self.degrees()
            if not np.all(deg == self.declared_d):
                raise ValueError(f"graph is not {self.declared_d}-regular")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)


def write_graph(graph: GraphInstance, path: str | Path) -> None:
    lines = [f"{graph.n} {graph.m}"] + [f"{u} {v}" for u, v in graph.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path: str | Path, declared_d: int | None = None) -> GraphInstance:
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    n, m = int(rows[0][0]), int(rows[0][1])
    edges = [(int(u), int(v)) for u, v in rows[1:]]
    if len(edges) != m:
        raise ValueError(f"header announces {m} edges, file has {len(edges)}")
    return GraphInstance(n, tuple(edges), declared_d)


def random_regular(
    n: int, d: int, seed: int | np.random.Generator | None = None, max_tries: int = 100_000
) -> GraphInstance:
    """Configuration-model sample; restarts from scratch on any loop or multi-edge."""
    if (n * d) % 2:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if not 0 <= d < n:
        raise ValueError(f"need 0 <= d < n, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        pairs.sort(axis=1)
        if len(np.unique(pairs, axis=0)) != len(pairs):
            continue
        return GraphInstance(n, tuple(map(tuple, pairs.tolist())), d)
    raise RuntimeError(f"no simple {d}-regular graph on {n} vertices after {max_tries} tries")


def build_tree_graph(problem: TreeProblem, variant: str, qubit_cap: int = QUBIT_CAP) -> GraphInstance:
    """Explicit 1-tree (``one_tree``) or 2-tree (``two_tree``) of depth ``p``.

    Roots come first: vertex 0 for the 1-tree, vertices 0 and 1 (joined by
    an edge) for the 2-tree.
    """
    d, p = problem.d, problem.p
    n2, n1 = tree_sizes(problem)
    size = {"two_tree": n2, "one_tree": n1}.get(variant)
    if size is None:
        raise ValueError(f"unknown tree variant {variant!r}")
    if size > qubit_cap:
        raise QubitCapExceeded(f"{variant} has {size} vertices, cap is {qubit_cap}")

    edges: list[tuple[int, int]] = []
    if variant == "two_tree":
        edges.append((0, 1))
        frontier = [(0, d - 1), (1, d - 1)]
        nxt = 2
    else:
        frontier = [(0, d)]
        nxt = 1
    for _ in range(p):
        new = []
        for parent, kids in frontier:
            for _ in range(kids):
                edges.append((parent, nxt))
                new.append((nxt, d - 1))
                nxt += 1
        frontier = new
    assert nxt == size
    return GraphInstance(size, tuple(edges))


def _spins(n: int, i: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return (1 - 2 * ((idx >> i) & 1)).astype(np.int8)


def diagonal_energies(graph: GraphInstance, h: float, d_norm: float) -> np.ndarray:
    """Ising energy of every basis state; bit ``i`` of the index is qubit ``i``."""
    e = np.zeros(1 << graph.n)
    spins = [_spins(graph.n, i) for i in range(graph.n)]
    for u, v in graph.edges:
        e += spins[u] * spins[v]
    if h:
        for s in spins:
            e += h * s
    return e / math.sqrt(d_norm)


def apply_mixer(psi: np.ndarray, n: int, beta: float) -> np.ndarray:
    """``exp(-i beta sum_i X_i)`` applied qubit by qubit."""
    c, s = math.cos(beta), -1j * math.sin(beta)
    out = psi
    for q in range(n):
        view = out.reshape(-1, 2, 1 << q)
        lo, hi = view[:, 0, :].copy(), view[:, 1, :]
        view[:, 0, :] = c * lo + s * hi
        view[:, 1, :] = s * lo + c * hi
    return out


def qaoa_state(
    graph: GraphInstance,
    h: float,
    d_norm: float,
    angles: AngleSchedule,
    qubit_cap: int = QUBIT_CAP,
    energies: np.ndarray | None = None,
) -> np.ndarray:
    if graph.n > qubit_cap:
        raise QubitCapExceeded(f"{graph.n} qubits exceeds cap {qubit_cap}")
    if energies is None:
        energies = diagonal_energies(graph, h, d_norm)
    psi = np.full(1 << graph.n, 2 ** (-graph.n / 2), dtype=complex)
    for gamma, beta in zip(angles.gammas, angles.betas):
        psi *= np.exp(-1j * gamma * energies)
        apply_mixer(psi, graph.n, beta)
    return psi


@dataclass
class Expectations:
    mean_zz_per_edge: float
    mean_z_per_vertex: float
    energy: float
    exp_cut_fraction: float
    exp_independence_objective: float
    z: np.ndarray = field(repr=False, default=None)
    zz: np.ndarray = field(repr=False, default=None)


def expectations(state: np.ndarray, graph: GraphInstance, h: float, d_norm: float) -> Expectations:
    """Exact expectation values of the single-site and edge observables."""
    n = graph.n
    probs = np.abs(state) ** 2
    spins = [_spins(n, i) for i in range(n)]
    z = np.array([probs @ s for s in spins])
    zz = np.array([probs @ (spins[u] * spins[v]) for u, v in graph.edges])
    energy = (zz.sum() + h * z.sum()) / math.sqrt(d_norm)
    # <N_i N_j> - <N_i> with N = (1+Z)/2, valid for any graph
    pair = (1 + zz + z[graph.edge_array()[:, 0]] + z[graph.edge_array()[:, 1]]) / 4 if graph.m else np.zeros(0)
    mis_energy = pair.sum() - ((1 + z) / 2).sum()
    return Expectations(
        mean_zz_per_edge=float(zz.mean()) if graph.m else 0.0,
        mean_z_per_vertex=float(z.mean()),
        energy=float(energy),
        exp_cut_fraction=float((1 - zz.mean()) / 2) if graph.m else 0.0,
        exp_independence_objective=float(-mis_energy / n),
        z=z,
        zz=zz,
    )


def basis_cut_values(graph: GraphInstance) -> np.ndarray:
    """Number of cut edges for every bit assignment."""
    idx = np.arange(1 << graph.n, dtype=np.int64)
    out = np.zeros(idx.shape[0], dtype=np.int32)
    for u, v in graph.edges:
        out += ((idx >> u) ^ (idx >> v)) & 1
    return out


def basis_mis_energies(graph: GraphInstance, lam: float = 1.0) -> np.ndarray:
    """``lam * #(selected edges) - #selected`` for every assignment (bit 1 = selected)."""
    idx = np.arange(1 << graph.n, dtype=np.int64)
    conflicts = np.zeros(idx.shape[0], dtype=np.int32)
    for u, v in graph.edges:
        conflicts += (idx >> u) & (idx >> v) & 1
    size = np.zeros(idx.shape[0], dtype=np.int32)
    for i in range(graph.n):
        size += (idx >> i) & 1
    return lam * conflicts - size


def brute_force(graph: GraphInstance, objective: str) -> tuple[int, np.ndarray]:
    """Exhaustive optimum and one maximiser as a boolean vector."""
    if graph.n > BRUTE_FORCE_CAP:
        raise QubitCapExceeded(f"brute force limited to n <= {BRUTE_FORCE_CAP}")
    if objective == "maxcut":
        vals = basis_cut_values(graph)
    elif objective == "mis":
        idx = np.arange(1 << graph.n, dtype=np.int64)
        ok = np.ones(idx.shape[0], dtype=bool)
        for u, v in graph.edges:
            ok &= ((idx >> u) & (idx >> v) & 1) == 0
        vals = np.where(ok, np.bitwise_count(idx).astype(np.int64), -1)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    best = int(np.argmax(vals))
    witness = ((best >> np.arange(graph.n)) & 1).astype(bool)
    return int(vals[best]), witness


def spin_state_probs(state: np.ndarray) -> np.ndarray:
    """Probabilities re-indexed so that bit 1 marks spin +1 (selected vertex)."""
    probs = np.abs(state) ** 2
    n = int(round(math.log2(probs.shape[0])))
    # spin +1 is bit 0 in the state index; flip all bits
    return probs[np.arange(probs.shape[0]) ^ ((1 << n) - 1)]


def expected_pruned_size(state: np.ndarray, graph: GraphInstance) -> float:
    """Expected size guaranteed by pruning each sampled string.

    Per sample: ``-H`` (at lambda=1) when negative, otherwise one vertex if any
    is selected and zero for the empty string.
    """
    probs = spin_state_probs(state)
    e = basis_mis_energies(graph)
    guaranteed = np.where(e < 0, -e, 0)
    guaranteed[1:] = np.maximum(guaranteed[1:], 1)
    return float(probs @ guaranteed)


def sem(values: Iterable[float]) -> float:
    v = np.asarray(list(values), dtype=float)
    return float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else 0.0


def fixed_angle_experiment(
    d: int,
    p: int,
    n: int,
    n_instances: int,
    angles: AngleSchedule,
    seed: int,
    problem: str = "maxcut",
    baseline: str | None = None,
    roundings: int = 100,
    greedy_runs: int = 100,
) -> dict:
    """Fixed tree angles on sampled finite instances, with exact expectations.

    ``problem`` selects the field (0 for MaxCut, ``d-2`` for MIS) and the
    metric. The baseline defaults to GW for MaxCut and greedy for MIS.
    """
    from .baselines import greedy_mis_average, gw_maxcut

    if angles.p != p:
        raise ValueError(f"angles have depth {angles.p}, expected {p}")
    if problem not in ("maxcut", "mis"):
        raise ValueError(f"unknown problem {problem!r}")
    baseline = baseline or ("gw" if problem == "maxcut" else "greedy")
    h = 0.0 if problem == "maxcut" else float(d - 2)
    streams = np.random.SeedSequence(seed).spawn(n_instances)

    rows = []
    for k, ss in enumerate(streams):
        g_rng, b_rng = (np.random.default_rng(s) for s in ss.spawn(2))
        graph = random_regular(n, d, g_rng)
        psi = qaoa_state(graph, h, d, angles)
        ex = expectations(psi, graph, h, d)
        row = {"instance": k, "n": n, "m": graph.m}
        if problem == "maxcut":
            row["qaoa_cut_fraction"] = ex.exp_cut_fraction
            row["qaoa_expected_cut"] = ex.exp_cut_fraction * graph.m
            opt_key = "qaoa_expected_cut"
        else:
            row["qaoa_independence_objective"] = ex.exp_independence_objective
            row["qaoa_pruned_size"] = expected_pruned_size(psi, graph)
            opt_key = "qaoa_pruned_size"
        if baseline == "gw":
            gw = gw_maxcut(graph, roundings, b_rng)
            row.update(baseline_mean=gw.avg_cut, baseline_best=gw.best_cut, baseline_converged=gw.converged)
        elif baseline == "greedy":
            row["baseline_mean"] = greedy_mis_average(graph, greedy_runs, b_rng)
        else:
            raise ValueError(f"unknown baseline {baseline!r}")
        if n <= BRUTE_FORCE_CAP:
            opt, _ = brute_force(graph, problem)
            row["optimum"] = opt
            row["qaoa_ratio"] = row[opt_key] / opt if opt else float("nan")
            row["baseline_ratio"] = row["baseline_mean"] / opt if opt else float("nan")
        rows.append(row)

    agg = {}
    for key in rows[0]:
        if key in ("instance", "n", "baseline_converged"):
            continue
        vals = [r[key] for r in rows]
        agg[key] = {"mean": float(np.mean(vals)), "sem": sem(vals), "band3": 3 * sem(vals)}
    return {
        "config": {
            "d": d, "p": p, "n": n, "instances": n_instances, "seed": seed,
            "problem": problem, "baseline": baseline, "h": h,
            "gammas": list(angles.gammas), "betas": list(angles.betas),
            "roundings": roundings, "greedy_runs": greedy_runs,
        },
        "instances": rows,
        "aggregate": agg,
    }
