"""Shared types and primitives for the tree contractions.

Basis strings are stored as integer codes. Bit ``k`` holds the ``k``-th
component of the string in the listed order, with bit value 0 meaning spin
+1 and bit value 1 meaning spin -1:

* full form (width ``2p+1``): ``(a_1, ..., a_p, a_0, a_-p, ..., a_-1)``
* grown form (width ``2m``):  ``(a_1, ..., a_m, a_-m, ..., a_-1)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

# Largest phase matrix block materialised at once by the dense contractions.
_DENSE_BLOCK = 1 << 22


class DepthCapExceeded(ValueError):
    """Requested depth is larger than a backend's configured cap."""


class ImaginaryPartError(ArithmeticError):
    """A correlator that must be real came back with a sizeable imaginary part."""


@dataclass(frozen=True)
class TreeProblem:
    d: int
    h: float
    p: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise ValueError(f"regularity must be an integer >= 3, got {self.d}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"depth must be an integer >= 1, got {self.p}")
        if not math.isfinite(self.h):
            raise ValueError("local field must be finite")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "h", float(self.h))


@dataclass(frozen=True)
class AngleSchedule:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gammas)
        b = tuple(float(x) for x in self.betas)
        if len(g) != len(b) or not g:
            raise ValueError("gammas and betas must be non-empty and of equal length")
        if not all(math.isfinite(x) for x in g + b):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "AngleSchedule":
        """Inverse of :meth:`as_vector`: first half gammas, second half betas."""
        x = list(x)
        p = len(x) // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    @classmethod
    def zeros(cls, p: int) -> "AngleSchedule":
        return cls((0.0,) * p, (0.0,) * p)

    def as_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    def padded_gammas(self) -> np.ndarray:
        """``(g_1..g_p, 0, -g_p..-g_1)``, aligned with the full-form bit order."""
        g = np.array(self.gammas)
        return np.concatenate([g, [0.0], -g[::-1]])


def check_depth(problem: TreeProblem, angles: AngleSchedule, cap: int, name: str) -> None:
    if angles.p != problem.p:
        raise ValueError(f"angle schedule has depth {angles.p}, problem has p={problem.p}")
    if problem.p > cap:
        raise DepthCapExceeded(f"{name} backend supports p <= {cap}, got p={problem.p}")


@lru_cache(maxsize=None)
def spin_table(width: int) -> np.ndarray:
    """``(2**width, width)`` array of +-1 spins; row ``c`` decodes code ``c``."""
    codes = np.arange(1 << width)
    bits = (codes[:, None] >> np.arange(width)) & 1
    out = 1 - 2 * bits
    out.flags.writeable = False
    return out


def mixer_element(b_in: int, b_out: int, beta: float) -> complex:
    """``<b_in| exp(i beta X) |b_out>`` for spins in {-1, +1}."""
    if b_in == b_out:
        return complex(math.cos(beta))
    return 1j * math.sin(beta)


def mixer_matrix(s_in: np.ndarray, s_out: np.ndarray, beta: float) -> np.ndarray:
    """Vectorised :func:`mixer_element`."""
    return np.where(s_in == s_out, math.cos(beta), 1j * math.sin(beta))


def f_weight(code: int, betas: Sequence[float]) -> complex:
    """Mixer weight of one full-form basis string of width ``2p+1``."""
    p = len(betas)
    if not 0 <= code < 1 << (2 * p + 1):
        raise ValueError(f"code {code} does not fit width {2 * p + 1}")
    spins = spin_table(2 * p + 1)[code]
    out = 0.5 + 0j
    for k in range(2 * p):
        beta = betas[k] if k < p else -betas[2 * p - 1 - k]
        out *= mixer_element(int(spins[k]), int(spins[k + 1]), beta)
    return out


def f_weights(betas: Sequence[float]) -> np.ndarray:
    """Mixer weights of all ``2**(2p+1)`` full-form strings."""
    p = len(betas)
    s = spin_table(2 * p + 1)
    out = np.full(s.shape[0], 0.5, dtype=complex)
    for k in range(2 * p):
        beta = betas[k] if k < p else -betas[2 * p - 1 - k]
        out *= mixer_matrix(s[:, k], s[:, k + 1], beta)
    return out


def g_weights(m: int, betas: Sequence[float]) -> np.ndarray:
    """Reduced mixer weight ``g`` on all grown strings of width ``2m``.

    Uses mixers ``1..m-1`` on both halves and no factor 1/2.
    """
    s = spin_table(2 * m)
    out = np.ones(s.shape[0], dtype=complex)
    for j in range(1, m):
        # forward a_j -> a_{j+1} at bits j-1, j; backward a_-(j+1) -> a_-j at bits 2m-j-1, 2m-j
        out *= mixer_matrix(s[:, j - 1], s[:, j], betas[j - 1])
        out *= mixer_matrix(s[:, 2 * m - j - 1], s[:, 2 * m - j], -betas[j - 1])
    return out


def grown_gammas(m: int, gammas: Sequence[float]) -> np.ndarray:
    """``(g_1..g_m, -g_m..-g_1)`` aligned with the grown bit order."""
    g = np.asarray(gammas[:m], dtype=float)
    return np.concatenate([g, -g[::-1]])


def ipow(z: np.ndarray, n: int) -> np.ndarray:
    """Integer power by repeated squaring; O(log n) complex multiplications."""
    if n < 0:
        raise ValueError("negative exponent")
    result = np.ones_like(z)
    base = np.array(z, copy=True)
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def dense_phase_matvec(
    rows: np.ndarray, cols: np.ndarray, coeffs: np.ndarray, w: np.ndarray
) -> np.ndarray:
    """``y[r] = sum_c exp(i * sum_k coeffs[k] rows[r,k] cols[c,k]) * w[c]``.

    Literal dense evaluation, processed in row blocks to bound memory.
    """
    scaled = rows * coeffs
    out = np.empty(rows.shape[0], dtype=complex)
    step = max(1, _DENSE_BLOCK // max(1, cols.shape[0]))
    for lo in range(0, rows.shape[0], step):
        theta = scaled[lo : lo + step] @ cols.T
        out[lo : lo + step] = np.exp(1j * theta) @ w
    return out


def kron_phase_matvec(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Same map as :func:`dense_phase_matvec` with rows = cols = all strings.

    The kernel ``exp(i sum_k c_k a_k b_k)`` factorises over bits into 2x2
    blocks ``[[e^{ic}, e^{-ic}], [e^{-ic}, e^{ic}]]``, so the product is a
    sequence of per-bit contractions costing ``O(L 2**L)``.
    """
    width = len(coeffs)
    t = np.asarray(w, dtype=complex).reshape((2,) * width)
    # reshape puts the highest bit first, so axis ``width-1-k`` is bit ``k``
    for k, c in enumerate(coeffs):
        axis = width - 1 - k
        e, ec = np.exp(1j * c), np.exp(-1j * c)
        kern = np.array([[e, ec], [ec, e]])
        t = np.moveaxis(np.tensordot(kern, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def tree_sizes(problem: TreeProblem) -> tuple[int, int]:
    """Vertex counts ``(N_2tree, N_1tree)`` of the depth-``p`` regular trees."""
    d, p = problem.d, problem.p
    n2 = 2 * ((d - 1) ** (p + 1) - 1) // (d - 2)
    n1 = 1 + d * ((d - 1) ** p - 1) // (d - 2)
    return n2, n1
