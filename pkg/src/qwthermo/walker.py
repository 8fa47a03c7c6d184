"""Discrete-time quantum walk on the line.

The state is a spinor field ``(a_k, b_k)`` over lattice sites, where the
upper component ``a`` is the left-moving chirality and ``b`` the
right-moving one. One step of the walk is

.. math::
   a_k(t+1) = a_{k+1}(t) \\cos\\theta + b_{k+1}(t) \\sin\\theta \\\\
   b_k(t+1) = a_{k-1}(t) \\sin\\theta - b_{k-1}(t) \\cos\\theta

The storage window grows by one site on each side per step, so the map of
the infinite line is represented exactly (no boundaries of any kind).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

HADAMARD_THETA = math.pi / 4


@dataclass(frozen=True)
class Coin:
    """Coin bias angle; ``theta = pi/4`` is the Hadamard coin."""

    theta: float = HADAMARD_THETA

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"coin angle theta={self.theta!r} outside [0, pi/2]")

    @property
    def is_hadamard(self) -> bool:
        return math.isclose(self.theta, HADAMARD_THETA, rel_tol=0.0, abs_tol=1e-15)


@dataclass(frozen=True)
class BlochAngles:
    """Point ``(gamma, phi)`` on the Bloch sphere of the coin."""

    gamma: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError(f"gamma={self.gamma!r} outside [0, pi]")
        if not 0.0 <= self.phi <= 2 * math.pi:
            raise ValueError(f"phi={self.phi!r} outside [0, 2*pi]")

    def spinor(self) -> tuple[complex, complex]:
        return (
            complex(math.cos(self.gamma / 2)),
            complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.gamma / 2),
        )


@dataclass(frozen=True)
class SpinorField:
    """Immutable snapshot of the walker.

    ``left[j]`` and ``right[j]`` are the amplitudes at site ``origin + j``.
    """

    origin: int
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)
    time: int = 0

    def __post_init__(self):
        left = np.array(self.left, dtype=np.complex128)
        right = np.array(self.right, dtype=np.complex128)
        if left.ndim != 1 or left.shape != right.shape:
            raise ValueError("left and right amplitudes must be 1-D arrays of equal length")
        left.flags.writeable = False
        right.flags.writeable = False
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.origin, self.origin + self.left.size)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.left) ** 2) + np.sum(np.abs(self.right) ** 2))

    def amplitude(self, site: int) -> tuple[complex, complex]:
        """``(a_k, b_k)`` at ``site``; zero outside the stored window."""
        j = site - self.origin
        if 0 <= j < self.left.size:
            return complex(self.left[j]), complex(self.right[j])
        return 0j, 0j

    def shifted(self, offset: int) -> "SpinorField":
        return SpinorField(self.origin + offset, self.left, self.right, self.time)


def init_localized(bloch: BlochAngles, site: int = 0) -> SpinorField:
    """Walker at ``site`` with coin state ``(cos(g/2), e^{i phi} sin(g/2))``."""
    a, b = bloch.spinor()
    return SpinorField(site, np.array([a]), np.array([b]), 0)


def basis_state(chirality: int, site: int = 0) -> SpinorField:
    """``|k,+>`` (``chirality=+1``) or ``|k,->`` (``chirality=-1``)."""
    if chirality not in (1, -1):
        raise ValueError("chirality must be +1 or -1")
    a, b = (1.0, 0.0) if chirality == 1 else (0.0, 1.0)
    return SpinorField(site, np.array([a]), np.array([b]), 0)


def _advance(a: np.ndarray, b: np.ndarray, cos_t: float, sin_t: float):
    # Acts on the last axis; output window is [origin-1, origin+n].
    shape = a.shape[:-1] + (a.shape[-1] + 2,)
    dtype = np.result_type(a, b, np.float64)
    na = np.zeros(shape, dtype=dtype)
    nb = np.zeros(shape, dtype=dtype)
    na[..., :-2] = a * cos_t + b * sin_t
    nb[..., 2:] = a * sin_t - b * cos_t
    return na, nb


def iterate_amplitudes(
    a: np.ndarray, b: np.ndarray, coin: Coin, n_steps: int
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(a, b)`` after each of ``n_steps`` steps.

    Works on stacked batches too (sites on the last axis). After ``s`` steps
    the yielded arrays have two more sites per step and start at
    ``origin - s``. Real input stays real (the coin is real).

    The yielded arrays are views into reused buffers: they are only valid
    until the next iteration. Copy anything that must outlive it.
    """
    c, s = math.cos(coin.theta), math.sin(coin.theta)
    a = np.asarray(a)
    b = np.asarray(b)
    dtype = np.result_type(a, b, np.float64)
    n = a.shape[-1]
    shape = a.shape[:-1] + (n + 2 * n_steps,)
    cur_a, cur_b, nxt_a, nxt_b = (np.zeros(shape, dtype=dtype) for _ in range(4))
    scratch = np.empty(shape, dtype=dtype)
    cur_a[..., :n] = a
    cur_b[..., :n] = b
    for _ in range(n_steps):
        src_a, src_b = cur_a[..., :n], cur_b[..., :n]
        tmp = scratch[..., :n]
        out_a = nxt_a[..., :n]
        np.multiply(src_a, c, out=out_a)
        np.multiply(src_b, s, out=tmp)
        out_a += tmp
        nxt_a[..., n : n + 2] = 0
        out_b = nxt_b[..., 2 : n + 2]
        np.multiply(src_a, s, out=out_b)
        np.multiply(src_b, c, out=tmp)
        out_b -= tmp
        nxt_b[..., :2] = 0
        n += 2
        cur_a, cur_b, nxt_a, nxt_b = nxt_a, nxt_b, cur_a, cur_b
        yield cur_a[..., :n], cur_b[..., :n]


def iterate_sublattice(
    a: np.ndarray, b: np.ndarray, coin: Coin, n_steps: int
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Like :func:`iterate_amplitudes` for fields living on one parity class.

    ``a[..., j]``, ``b[..., j]`` hold the amplitudes at sites
    ``origin + 2 j``; after each step the occupied sites shift by one and the
    arrays grow by one entry (``origin - s + 2 j`` after ``s`` steps). The
    skipped sites are exactly zero, so nothing is lost; half the work of the
    dense kernel.
    """
    c, s = math.cos(coin.theta), math.sin(coin.theta)
    a = np.asarray(a)
    b = np.asarray(b)
    dtype = np.result_type(a, b, np.float64)
    m = a.shape[-1]
    shape = a.shape[:-1] + (m + n_steps,)
    cur_a, cur_b, nxt_a, nxt_b = (np.zeros(shape, dtype=dtype) for _ in range(4))
    scratch = np.empty(shape, dtype=dtype)
    cur_a[..., :m] = a
    cur_b[..., :m] = b
    for _ in range(n_steps):
        src_a, src_b = cur_a[..., :m], cur_b[..., :m]
        tmp = scratch[..., :m]
        out_a = nxt_a[..., :m]
        np.multiply(src_a, c, out=out_a)
        np.multiply(src_b, s, out=tmp)
        out_a += tmp
        nxt_a[..., m] = 0
        out_b = nxt_b[..., 1 : m + 1]
        np.multiply(src_a, s, out=out_b)
        np.multiply(src_b, c, out=tmp)
        out_b -= tmp
        nxt_b[..., 0] = 0
        m += 1
        cur_a, cur_b, nxt_a, nxt_b = nxt_a, nxt_b, cur_a, cur_b
        yield cur_a[..., :m], cur_b[..., :m]


def step(state: SpinorField, coin: Coin = Coin()) -> SpinorField:
    a, b = _advance(state.left, state.right, math.cos(coin.theta), math.sin(coin.theta))
    return SpinorField(state.origin - 1, a, b, state.time + 1)


def evolve(state: SpinorField, coin: Coin = Coin(), n_steps: int = 1) -> SpinorField:
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    if n_steps == 0:
        return state
    for a, b in iterate_amplitudes(state.left, state.right, coin, n_steps):
        pass
    return SpinorField(state.origin - n_steps, a, b, state.time + n_steps)


def position_distribution(state: SpinorField) -> np.ndarray:
    """``P(k) = |a_k|^2 + |b_k|^2`` aligned with ``state.sites``."""
    return np.abs(state.left) ** 2 + np.abs(state.right) ** 2


def chirality_probabilities(state: SpinorField) -> tuple[float, float]:
    return (
        float(np.sum(np.abs(state.left) ** 2)),
        float(np.sum(np.abs(state.right) ** 2)),
    )


def interference_term(state: SpinorField) -> complex:
    """``Q = sum_k a_k conj(b_k)``."""
    return complex(np.sum(state.left * np.conj(state.right)))
