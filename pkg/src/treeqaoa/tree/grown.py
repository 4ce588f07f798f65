"""Contraction with the basis grown by one layer per recursion level.

A node at height ``m`` only feels gates of layers ``1..m``, so its table is
indexed by the ``2m``-bit string ``(a_1..a_m, a_-m..a_-1)``. The sum over the
collapsed child bit ``b_m = b_-m`` is done in closed form, and the root's
``a_0`` is summed out analytically in the final step.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    AngleSchedule,
    TreeProblem,
    check_depth,
    dense_phase_matvec,
    g_weights,
    grown_gammas,
    ipow,
    mixer_matrix,
    spin_table,
)

DEFAULT_CAP = 7


def child_weights(m: int, H_prev: np.ndarray, problem: TreeProblem, angles: AngleSchedule):
    """Weights ``w_s(b)`` of the level-``m-1`` children for ``b_m = s = +-1``.

    Returns ``(w_plus, w_minus)``; for ``m == 1`` the child string is empty
    and both weights are the scalar 1/2.
    """
    if m == 1:
        half = np.full(1, 0.5, dtype=complex)
        return half, half
    d, h = problem.d, problem.h
    k = m - 1
    s = spin_table(2 * k)
    base = g_weights(k, angles.betas) * H_prev
    base = base * np.exp(1j * h / math.sqrt(d) * (s @ grown_gammas(k, angles.gammas)))
    beta = angles.betas[k - 1]
    fwd, bwd = s[:, k - 1], s[:, k]  # b_{m-1} and b_-(m-1)
    out = []
    for spin in (1, -1):
        link = mixer_matrix(fwd, spin, beta) * mixer_matrix(spin, bwd, -beta)
        out.append(0.5 * base * link)
    return out[0], out[1]


def level_from_children(m: int, v_plus: np.ndarray, v_minus: np.ndarray, rows, problem, angles):
    """Assemble ``S^(m)`` on grown strings ``rows`` (width ``2m`` spins).

    ``v_s`` are the child sums indexed by the parent's lower ``2m-2`` bits.
    """
    gm = angles.gammas[m - 1] / math.sqrt(problem.d)
    diff = rows[:, m - 1] - rows[:, m]  # a_m - a_-m
    return np.exp(1j * gm * diff) * v_plus + np.exp(-1j * gm * diff) * v_minus


def lower_code(codes: np.ndarray, m: int) -> np.ndarray:
    """Map grown codes of width ``2m`` to the width ``2m-2`` code of ``a^(m-1)``."""
    low = codes & ((1 << (m - 1)) - 1)
    high = codes >> (m + 1)
    return low | (high << (m - 1))


def level_brackets(problem: TreeProblem, angles: AngleSchedule) -> list[np.ndarray]:
    """``S^(m)`` for ``m = 1..p`` as dense arrays over width-``2m`` codes."""
    d, p = problem.d, problem.p
    brackets = []
    H_prev = np.ones(1, dtype=complex)
    for m in range(1, p + 1):
        w_plus, w_minus = child_weights(m, H_prev, problem, angles)
        if m == 1:
            v_plus, v_minus = w_plus, w_minus
        else:
            s_prev = spin_table(2 * (m - 1))
            coeffs = grown_gammas(m - 1, angles.gammas) / math.sqrt(d)
            v_plus = dense_phase_matvec(s_prev, s_prev, coeffs, w_plus)
            v_minus = dense_phase_matvec(s_prev, s_prev, coeffs, w_minus)
        rows = spin_table(2 * m)
        idx = lower_code(np.arange(rows.shape[0]), m)
        S = level_from_children(m, v_plus[idx], v_minus[idx], rows, problem, angles)
        brackets.append(S)
        H_prev = ipow(S, d - 1)
    return brackets


def root_weight(rows: np.ndarray, p: int, beta_p: float) -> np.ndarray:
    """``sum_{a_0} (a_0/2) <a_p|e^{i b X}|a_0><a_0|e^{-i b X}|a_-p>``."""
    out = np.zeros(rows.shape[0], dtype=complex)
    for a0 in (1, -1):
        out += 0.5 * a0 * mixer_matrix(rows[:, p - 1], a0, beta_p) * mixer_matrix(a0, rows[:, p], -beta_p)
    return out


def contract_grown(
    problem: TreeProblem, angles: AngleSchedule, *, cap: int = DEFAULT_CAP
) -> tuple[complex, complex]:
    check_depth(problem, angles, cap, "grown")
    d, h, p = problem.d, problem.h, problem.p
    rows = spin_table(2 * p)
    gam = grown_gammas(p, angles.gammas)
    S_p = level_brackets(problem, angles)[-1]
    common = g_weights(p, angles.betas) * np.exp(1j * h / math.sqrt(d) * (rows @ gam))
    common = common * root_weight(rows, p, angles.betas[p - 1])
    u = common * ipow(S_p, d - 1)
    zz = np.dot(u, dense_phase_matvec(rows, rows, gam / math.sqrt(d), u))
    z = np.sum(common * ipow(S_p, d))
    return complex(zz), complex(z)
