"""Depth-one correlators in closed form."""

from __future__ import annotations

import math

from .core import TreeProblem


def p1_closed_form(problem: TreeProblem, gamma: float, beta: float) -> tuple[complex, complex]:
    if problem.p != 1:
        raise ValueError("closed form only exists for p = 1")
    d, h = problem.d, problem.h
    rd = math.sqrt(d)
    c = math.cos(2 * gamma / rd)
    zz = (
        -0.5 * math.sin(2 * beta) ** 2 * (math.cos(4 * h * gamma / rd) - 1) * c ** (2 * d - 2)
        + math.sin(4 * beta) * math.sin(2 * gamma / rd) * math.cos(2 * h * gamma / rd) * c ** (d - 1)
    )
    z = math.sin(2 * beta) * math.sin(2 * h * gamma / rd) * c**d
    return complex(zz), complex(z)
