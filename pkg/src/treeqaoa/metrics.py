"""Problem-level performance figures derived from the tree correlators."""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .graph_lab import GraphInstance


@dataclass(frozen=True)
class Bounds:
    c_ub: float
    r_ub: float
    mu_star_lb: float | None = None


@dataclass(frozen=True)
class BoundsTable:
    version: int
    bounds: dict[int, Bounds]
    content_hash: str

    def __getitem__(self, d: int) -> Bounds:
        return self.bounds[d]

    def __contains__(self, d: int) -> bool:
        return d in self.bounds

    @classmethod
    def from_json(cls, text: str) -> "BoundsTable":
        raw = json.loads(text)
        table = {
            int(d): Bounds(rec["c_ub"], rec["r_ub"], rec.get("mu_star_lb"))
            for d, rec in raw["bounds"].items()
        }
        for d, b in table.items():
            if not 0 < b.r_ub < b.c_ub < 1:
                raise ValueError(f"inconsistent bounds for d={d}: {b}")
        return cls(int(raw["version"]), table, git_blob_hash(text.encode()))


def git_blob_hash(data: bytes) -> str:
    """Content hash computed the way ``git hash-object`` does."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def load_bounds(path: str | Path | None = None) -> BoundsTable:
    """Shipped table, or an override file with the same schema."""
    if path is None:
        text = resources.files("treeqaoa.data").joinpath("bounds.json").read_text()
    else:
        text = Path(path).read_text()
    return BoundsTable.from_json(text)


@dataclass(frozen=True)
class PerformanceRecord:
    d: int
    h: float
    p: int
    energy_density: float
    c_p: float
    r_p: float
    alpha_mc: float | None = None
    alpha_mis: float | None = None

    @property
    def mis_meaningful(self) -> bool:
        """The independence figure only describes real sets when positive."""
        return self.r_p > 0


def cut_fraction(zz: float) -> float:
    if not -1 - 1e-12 <= zz <= 1 + 1e-12:
        raise ValueError(f"correlator {zz} outside [-1, 1]")
    return (1 - zz) / 2


def independence_ratio(zz: float, z: float, d: int) -> float:
    return -d / 8 * zz + (2 - d) / 4 * z + (4 - d) / 8


def performance_record(d: int, h: float, p: int, energy: float, zz: float, z: float) -> PerformanceRecord:
    return PerformanceRecord(d, h, p, energy, cut_fraction(zz), independence_ratio(zz, z, d))


def approximation_ratios(rec: PerformanceRecord, bounds: BoundsTable | None = None) -> PerformanceRecord:
    """Fill in ratios against the upper bounds; left as None when ``d`` has no bound."""
    bounds = bounds or load_bounds()
    if rec.d not in bounds:
        return replace(rec, alpha_mc=None, alpha_mis=None)
    b = bounds[rec.d]
    return replace(rec, alpha_mc=rec.c_p / b.c_ub, alpha_mis=rec.r_p / b.r_ub)


def mis_field(d: int, lam: float) -> float:
    """Ising field equivalent to the independence penalty ``lam``."""
    h = d - 2 / lam
    if lam < 1:
        warnings.warn(f"lambda={lam} < 1: ground state need not be an independent set")
    return h


def mis_energy(graph: GraphInstance, bits: np.ndarray, lam: float) -> float:
    bits = np.asarray(bits, dtype=bool)
    if bits.shape != (graph.n,):
        raise ValueError(f"expected {graph.n} bits, got shape {bits.shape}")
    E = graph.edge_array()
    conflicts = int(np.sum(bits[E[:, 0]] & bits[E[:, 1]])) if len(E) else 0
    return lam * conflicts - int(bits.sum())


def prune(graph: GraphInstance, bits: np.ndarray, rng_seed=None) -> np.ndarray:
    """Repair a selection into an independent set.

    With negative energy (at lambda=1) each violated edge loses a random
    endpoint, which never raises the energy, so the result keeps at least
    ``-energy`` vertices. Otherwise a single selected vertex is kept.
    """
    rng = np.random.default_rng(rng_seed)
    out = np.array(bits, dtype=bool)
    E = graph.edge_array()
    if not len(E) or not np.any(out[E[:, 0]] & out[E[:, 1]]):
        return out
    if mis_energy(graph, out, 1.0) >= 0:
        keep = rng.choice(np.flatnonzero(out))
        out[:] = False
        out[keep] = True
        return out
    for k in rng.permutation(len(E)):
        u, v = E[k]
        if out[u] and out[v]:
            out[u if rng.random() < 0.5 else v] = False
    return out


def _gw_minimand(x: float) -> float:
    return 2 * math.acos(x) / (math.pi * (1 - x))


def gw_guarantee_constant() -> float:
    """``min 2 arccos(x) / (pi (1 - x))`` over ``x = cos(theta)`` in ``[-1, 1)``.

    The minimiser sits near ``x = -0.689``; on ``[0, 1)`` alone the minimum
    would be the endpoint value 1.
    """
    res = minimize_scalar(_gw_minimand, bounds=(-1.0, 0.99), method="bounded", options={"xatol": 1e-12})
    return float(res.fun)


def greedy_guarantee(d: int) -> float:
    if d < 3:
        raise ValueError("d must be >= 3")
    return 3 / (d + 2)
