"""Contraction over reflection-symmetry blocks.

The label ``t`` of a grown string ``a^(m)`` is the largest ``j`` with
``a_j != a_-j`` (0 when the string is a palindrome). Two fixed-point rules
cut the work:

* ``t == 0``: the table value is exactly 1;
* ``t < m``: the value equals the level-``t`` value of the string pruned to
  ``a^(t)``.

So level ``m`` only evaluates strings with ``t == m``, and of those only one
per reflection pair, since ``S(R a) = conj(S(a))`` where ``R`` swaps the
forward and backward halves. Representatives are the strings with
``a_m = +1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    AngleSchedule,
    TreeProblem,
    check_depth,
    g_weights,
    grown_gammas,
    ipow,
    kron_phase_matvec,
    spin_table,
)
from .grown import child_weights, level_from_children, lower_code

DEFAULT_CAP = 8


def symmetry_label(code: int, m: int) -> int:
    """Label ``t`` of a width-``2m`` grown code."""
    for j in range(m, 0, -1):
        if ((code >> (j - 1)) & 1) != ((code >> (2 * m - j)) & 1):
            return j
    return 0


def reflect(code: int, m: int) -> int:
    """Swap ``a_j <-> a_-j``; on codes this reverses the ``2m`` bits."""
    return int(format(code, f"0{2 * m}b")[::-1], 2)


@dataclass(frozen=True)
class SymmetryBlock:
    t: int
    representatives: tuple[int, ...]


def block_sizes(m: int) -> dict[int, int]:
    """Number of width-``2m`` strings per label, by enumeration."""
    counts = dict.fromkeys(range(m + 1), 0)
    for code in range(1 << (2 * m)):
        counts[symmetry_label(code, m)] += 1
    return counts


@lru_cache(maxsize=None)
def representatives(m: int) -> np.ndarray:
    """Codes of the ``2**(2m-2)`` label-``m`` strings with ``a_m = +1``.

    Ordered so that entry ``i`` has lower string ``a^(m-1)`` with code ``i``.
    """
    low = np.arange(1 << (2 * m - 2))
    lo_half = low & ((1 << (m - 1)) - 1)
    hi_half = low >> (m - 1)
    # a_m = +1 (bit m-1 clear), a_-m = -1 (bit m set)
    out = lo_half | (1 << m) | (hi_half << (m + 1))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def expansion_index(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lookup for expanding stored blocks to all width-``2m`` codes.

    Returns ``(label, rep_index, conj)`` arrays: the value at code ``c`` is
    1 if ``label == 0``, otherwise the stored level-``label`` entry
    ``rep_index``, complex-conjugated where ``conj`` is set.
    """
    n = 1 << (2 * m)
    label = np.zeros(n, dtype=np.int64)
    rep = np.zeros(n, dtype=np.int64)
    conj = np.zeros(n, dtype=bool)
    for c in range(n):
        t = symmetry_label(c, m)
        label[c] = t
        if t == 0:
            continue
        # prune to a^(t): keep a_1..a_t and a_-t..a_-1
        low = c & ((1 << t) - 1)
        high = c >> (2 * m - t)
        pruned = low | (high << t)
        if (pruned >> (t - 1)) & 1:  # a_t = -1: stored partner is the reflection
            pruned = reflect(pruned, t)
            conj[c] = True
        # representative index is the code of its lower string a^(t-1)
        rep[c] = lower_code(np.array([pruned]), t)[0]
    for arr in (label, rep, conj):
        arr.flags.writeable = False
    return label, rep, conj


def expand(stored: list[np.ndarray], m: int) -> np.ndarray:
    """Dense bracket values on all width-``2m`` codes from the stored blocks."""
    label, rep, conj = expansion_index(m)
    out = np.ones(label.shape[0], dtype=complex)
    for t in range(1, m + 1):
        sel = label == t
        vals = stored[t - 1][rep[sel]]
        out[sel] = np.where(conj[sel], np.conj(vals), vals)
    return out


def level_brackets(problem: TreeProblem, angles: AngleSchedule) -> list[np.ndarray]:
    """Stored brackets: level ``m`` holds the ``2**(2m-2)`` representatives."""
    d, p = problem.d, problem.p
    stored: list[np.ndarray] = []
    H_prev = np.ones(1, dtype=complex)
    for m in range(1, p + 1):
        w_plus, w_minus = child_weights(m, H_prev, problem, angles)
        if m > 1:
            coeffs = grown_gammas(m - 1, angles.gammas) / math.sqrt(d)
            w_plus = kron_phase_matvec(coeffs, w_plus)
            w_minus = kron_phase_matvec(coeffs, w_minus)
        reps = representatives(m)
        rows = spin_table(2 * m)[reps]
        stored.append(level_from_children(m, w_plus, w_minus, rows, problem, angles))
        if m < p:
            H_prev = ipow(expand(stored, m), d - 1)
    return stored


def G_weight(spin: np.ndarray, t: int, betas) -> np.ndarray:
    """Root weight of a label-``t`` string, ``-(a_t/2) i sin(2b_t) prod_{j>t} cos(2b_j)``."""
    tail = math.prod(math.cos(2 * b) for b in betas[t:])
    return -0.5j * spin * math.sin(2 * betas[t - 1]) * tail


def G_tilde_weight(spin: np.ndarray, t: int, betas) -> np.ndarray:
    """Root weight of a string symmetric at ``t``, ``(a_t/2) prod_{j>=t} cos(2b_j)``."""
    tail = math.prod(math.cos(2 * b) for b in betas[t - 1 :])
    return 0.5 * spin * tail


def contract_blocks(
    problem: TreeProblem, angles: AngleSchedule, *, cap: int = DEFAULT_CAP
) -> tuple[complex, complex]:
    check_depth(problem, angles, cap, "blocks")
    d, h, p = problem.d, problem.h, problem.p
    betas = angles.betas
    stored = level_brackets(problem, angles)

    zz = 0j
    z = 0j
    for T in range(1, p + 1):
        label = expansion_index(T)[0]
        rows = spin_table(2 * T)
        gam = grown_gammas(T, angles.gammas)
        S = expand(stored, T)
        common = g_weights(T, betas) * np.exp(1j * h / math.sqrt(d) * (rows @ gam))
        top = label == T
        a_T = rows[:, T - 1]
        weight = np.where(top, G_weight(a_T, T, betas), G_tilde_weight(a_T, T, betas))
        u = common * weight * ipow(S, d - 1)
        u_top = np.where(top, u, 0)
        # pairs with both labels T, plus twice the pairs (T, < T)
        v = np.where(top, u, 2 * u)
        zz += np.dot(u_top, kron_phase_matvec(gam / math.sqrt(d), v))
        z += np.sum(np.where(top, common * weight * ipow(S, d), 0))
    return complex(zz), complex(z)
