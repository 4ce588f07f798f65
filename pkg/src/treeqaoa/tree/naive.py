"""Reference contraction over full-width basis strings.

Every level table has ``2**(2p+1)`` entries and every level sums over all
child strings, costing ``O((p+1) 2**(4p+2))``.

Phase arguments are accumulated pair by pair, ``g_j (a_j - a_-j)``, so the
contributions of symmetric pairs cancel exactly instead of up to rounding.
At large ``d`` the level powers amplify any phase error by about ``d`` per
level, which makes this grouping matter.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    _DENSE_BLOCK,
    AngleSchedule,
    TreeProblem,
    check_depth,
    f_weights,
    ipow,
    spin_table,
)

DEFAULT_CAP = 5


def _pairs(p: int) -> list[tuple[int, int]]:
    """Bit positions of ``(a_j, a_-j)`` in the full form, ``j = 1..p``."""
    return [(j - 1, 2 * p + 1 - j) for j in range(1, p + 1)]


def field_angles(spins: np.ndarray, gammas) -> np.ndarray:
    """``sum_j g_j (a_j - a_-j)`` for every full-form string."""
    p = len(gammas)
    out = np.zeros(spins.shape[0])
    for g, (fw, bw) in zip(gammas, _pairs(p)):
        out += g * (spins[:, fw] - spins[:, bw])
    return out


def paired_phase_matvec(spins: np.ndarray, gammas, scale: float, w: np.ndarray) -> np.ndarray:
    """``y[a] = sum_b exp(i scale sum_j g_j (a_j b_j - a_-j b_-j)) w[b]``."""
    p = len(gammas)
    n = spins.shape[0]
    out = np.empty(n, dtype=complex)
    step = max(1, _DENSE_BLOCK // n)
    for lo in range(0, n, step):
        rows = spins[lo : lo + step]
        theta = np.zeros((rows.shape[0], n))
        for g, (fw, bw) in zip(gammas, _pairs(p)):
            theta += g * (np.outer(rows[:, fw], spins[:, fw]) - np.outer(rows[:, bw], spins[:, bw]))
        out[lo : lo + step] = np.exp(1j * scale * theta) @ w
    return out


def level_brackets(problem: TreeProblem, angles: AngleSchedule) -> list[np.ndarray]:
    """Bracketed sums ``S^(1..p)`` before exponentiation.

    ``H^(m) = S^(m) ** (d-1)`` for ``m < p`` feeds the next level; the
    last bracket is raised to ``d-1`` (2-tree root) or ``d`` (1-tree root).
    """
    d, h, p = problem.d, problem.h, problem.p
    s = spin_table(2 * p + 1)
    f = f_weights(angles.betas)
    field = np.exp(1j * h / math.sqrt(d) * field_angles(s, angles.gammas))

    brackets = []
    H = np.ones(s.shape[0], dtype=complex)
    for _ in range(p):
        S = paired_phase_matvec(s, angles.gammas, 1 / math.sqrt(d), f * H * field)
        brackets.append(S)
        H = ipow(S, d - 1)
    return brackets


def contract_naive(
    problem: TreeProblem, angles: AngleSchedule, *, cap: int = DEFAULT_CAP
) -> tuple[complex, complex]:
    check_depth(problem, angles, cap, "naive")
    d, h, p = problem.d, problem.h, problem.p
    s = spin_table(2 * p + 1)
    f = f_weights(angles.betas)
    field = np.exp(1j * h / math.sqrt(d) * field_angles(s, angles.gammas))
    a0 = s[:, p]

    S_p = level_brackets(problem, angles)[-1]
    u = a0 * f * ipow(S_p, d - 1) * field
    zz = np.dot(u, paired_phase_matvec(s, angles.gammas, 1 / math.sqrt(d), u))
    z = np.sum(a0 * f * ipow(S_p, d) * field)
    return complex(zz), complex(z)
