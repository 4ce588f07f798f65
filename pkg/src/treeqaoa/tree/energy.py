"""Asymptotic energy density and backend dispatch."""

from __future__ import annotations

import enum
import math

from .blocks import contract_blocks
from .closed_form import p1_closed_form
from .core import AngleSchedule, ImaginaryPartError, TreeProblem
from .grown import contract_grown
from .naive import contract_naive

IMAG_TOL = 1e-8


class Backend(str, enum.Enum):
    NAIVE = "naive"
    GROWN = "grown"
    BLOCKS = "blocks"
    CLOSED_P1 = "closed_p1"


def correlators(
    problem: TreeProblem, angles: AngleSchedule, backend: Backend | str = Backend.BLOCKS
) -> tuple[complex, complex]:
    """``(<Z1 Z2>_2tree, <Z1>_1tree)`` from the selected backend."""
    backend = Backend(backend)
    if backend is Backend.NAIVE:
        return contract_naive(problem, angles)
    if backend is Backend.GROWN:
        return contract_grown(problem, angles)
    if backend is Backend.BLOCKS:
        return contract_blocks(problem, angles)
    if angles.p != 1 or problem.p != 1:
        raise ValueError("closed_p1 backend requires p = 1")
    return p1_closed_form(problem, angles.gammas[0], angles.betas[0])


def real_correlators(
    problem: TreeProblem, angles: AngleSchedule, backend: Backend | str = Backend.BLOCKS
) -> tuple[float, float]:
    zz, z = correlators(problem, angles, backend)
    if abs(zz.imag) > IMAG_TOL or abs(z.imag) > IMAG_TOL:
        raise ImaginaryPartError(
            f"non-real correlators zz={zz!r}, z={z!r} for {problem} ({backend})"
        )
    return zz.real, z.real


def energy_from_correlators(problem: TreeProblem, zz: float, z: float) -> float:
    rd = math.sqrt(problem.d)
    return rd / 2 * zz + problem.h / rd * z


def energy_density(
    problem: TreeProblem, angles: AngleSchedule, backend: Backend | str = Backend.BLOCKS
) -> float:
    """Per-vertex energy of the depth-``p`` state in the infinite-size limit."""
    zz, z = real_correlators(problem, angles, backend)
    return energy_from_correlators(problem, zz, z)
