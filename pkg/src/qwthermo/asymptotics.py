"""Long-time chirality limits of the walk.

``P_L(t)`` and ``Q(t)`` converge for any localized start even though the
amplitudes themselves keep oscillating. The limits are available in closed
form for the Hadamard coin, and numerically (for any coin) by averaging the
observables over a tail window of a long run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walker import BlochAngles, Coin, init_localized, iterate_amplitudes, iterate_sublattice

PSD_TOL = 1e-12

# (1 - 1/sqrt(2)) / 2, the Hadamard interference scale.
Q0_SCALE = 0.5 * (1.0 - 1.0 / math.sqrt(2.0))

# Largest |Q0| reachable from a localized start with the Hadamard coin.
# The reachable set is the closed disk of this radius in the (mu, nu) plane.
REACHABLE_RADIUS = math.sqrt(2.0) * Q0_SCALE


class AnalyticFormUnavailable(ValueError):
    """Raised when a closed form is requested for a non-Hadamard coin."""


class InvalidDensity(ValueError):
    pass


@dataclass(frozen=True)
class InterferenceTerm:
    """Asymptotic interference term ``Q0 = mu + i nu``."""

    mu: float
    nu: float = 0.0

    def __post_init__(self):
        if self.mu**2 > 0.25 + PSD_TOL or 2 * self.mu**2 + self.nu**2 > 0.25 + PSD_TOL:
            raise InvalidDensity(
                f"Q0 = {self.mu} + {self.nu}i gives an unphysical chirality density"
            )

    @classmethod
    def from_complex(cls, q: complex) -> "InterferenceTerm":
        return cls(q.real, q.imag)

    @property
    def value(self) -> complex:
        return complex(self.mu, self.nu)

    def __abs__(self) -> float:
        return math.hypot(self.mu, self.nu)

    def is_reachable(self, tol: float = 1e-12) -> bool:
        return abs(self) <= REACHABLE_RADIUS + tol


@dataclass(frozen=True)
class ChiralityDensity:
    """2x2 reduced density matrix over the coin, ``[[pi_L, q], [q*, pi_R]]``."""

    pi_L: float
    pi_R: float
    q: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        if abs(self.pi_L + self.pi_R - 1.0) > PSD_TOL:
            raise InvalidDensity(f"trace {self.pi_L + self.pi_R!r} != 1")
        if self.pi_L < -PSD_TOL or self.pi_R < -PSD_TOL:
            raise InvalidDensity("negative diagonal entry")
        if abs(self.q) ** 2 > self.pi_L * self.pi_R + PSD_TOL:
            raise InvalidDensity(
                f"|q|^2 = {abs(self.q) ** 2!r} exceeds pi_L*pi_R = {self.pi_L * self.pi_R!r}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.pi_L, self.q], [self.q.conjugate(), self.pi_R]], dtype=np.complex128
        )


@dataclass(frozen=True)
class AsymptoticEstimate:
    q0: InterferenceTerm
    pi_L: float
    pi_R: float
    tail_std: float
    horizon: int

    @property
    def density(self) -> ChiralityDensity:
        return ChiralityDensity(self.pi_L, self.pi_R, self.q0.value)


def analytic_Q0(bloch: BlochAngles, coin: Coin = Coin()) -> InterferenceTerm:
    """Closed-form long-time limit of ``sum_k a_k conj(b_k)``, Hadamard coin only.

    The imaginary part is ``-sqrt(2) * scale * sin(gamma) * sin(phi)``; the
    sign follows the ``a conj(b)`` ordering (at ``t = 0`` the same product
    gives ``sin(gamma) e^{-i phi} / 2``). Quoting ``+i`` instead describes
    the conjugate quantity ``sum_k conj(a_k) b_k``.
    """
    if not coin.is_hadamard:
        raise AnalyticFormUnavailable(
            f"analytic form unavailable for theta={coin.theta!r}; only the Hadamard coin "
            "(theta=pi/4) has a closed form, use estimate_asymptotics instead"
        )
    g, p = bloch.gamma, bloch.phi
    mu = Q0_SCALE * (math.cos(g) + math.sin(g) * math.cos(p))
    nu = -Q0_SCALE * math.sqrt(2.0) * math.sin(g) * math.sin(p)
    return InterferenceTerm(mu, nu)


def stationary_chirality(q0: InterferenceTerm) -> tuple[float, float]:
    if not -0.5 <= q0.mu <= 0.5:
        raise ValueError(f"mu={q0.mu!r} outside [-1/2, 1/2]")
    return 0.5 + q0.mu, 0.5 - q0.mu


def rho1c(q0: InterferenceTerm) -> ChiralityDensity:
    pi_L, pi_R = stationary_chirality(q0)
    return ChiralityDensity(pi_L, pi_R, q0.value)


def tail_length(horizon: int, tail_fraction: float) -> int:
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if not 0.0 < tail_fraction <= 0.5:
        raise ValueError(f"tail_fraction={tail_fraction!r} outside (0, 1/2]")
    return max(1, int(round(tail_fraction * horizon)))


def tail_observables(
    a, b, coin: Coin, horizon: int, tail_fraction: float, weights=None, sublattice=False
):
    """Evolve ``(a, b)`` for ``horizon`` steps and record the tail series.

    With ``weights`` the arrays are a stacked batch of pure states and the
    recorded observables are the weighted sums over the batch. With
    ``sublattice`` the arrays hold one parity class only (see
    :func:`iterate_sublattice`). Returns arrays ``(P_L, P_R, Q)`` of length
    ``tail_length(horizon, tail_fraction)``.
    """
    iterate = iterate_sublattice if sublattice else iterate_amplitudes
    n_tail = tail_length(horizon, tail_fraction)
    start = horizon - n_tail
    pl = np.empty(n_tail)
    pr = np.empty(n_tail)
    qs = np.empty(n_tail, dtype=np.complex128)
    for t, (a, b) in enumerate(iterate(a, b, coin, horizon), start=1):
        if t <= start:
            continue
        i = t - start - 1
        if np.iscomplexobj(a):
            la = np.sum(a.real**2 + a.imag**2, axis=-1)
            lb = np.sum(b.real**2 + b.imag**2, axis=-1)
            q = np.sum(a * b.conj(), axis=-1)
        else:
            la = np.einsum("...i,...i->...", a, a)
            lb = np.einsum("...i,...i->...", b, b)
            q = np.einsum("...i,...i->...", a, b)
        if weights is None:
            pl[i], pr[i], qs[i] = la, lb, q
        else:
            pl[i], pr[i], qs[i] = weights @ la, weights @ lb, weights @ q
    return pl, pr, qs


def estimate_asymptotics(
    bloch: BlochAngles,
    coin: Coin = Coin(),
    horizon: int = 2000,
    tail_fraction: float = 0.5,
) -> AsymptoticEstimate:
    """Tail-averaged ``P_L``, ``P_R`` and ``Q`` from a simulated run.

    ``tail_std`` is the largest standard deviation among the tail series of
    ``P_L``, ``Re Q`` and ``Im Q``; it measures how settled the run is.
    """
    if horizon < 100:
        raise ValueError("horizon must be >= 100")
    state = init_localized(bloch)
    pl, pr, qs = tail_observables(
        state.left, state.right, coin, horizon, tail_fraction, sublattice=True
    )
    tail_std = max(float(np.std(pl)), float(np.std(qs.real)), float(np.std(qs.imag)))
    q = complex(np.mean(qs))
    return AsymptoticEstimate(
        q0=InterferenceTerm.from_complex(q),
        pi_L=float(np.mean(pl)),
        pi_R=float(np.mean(pr)),
        tail_std=tail_std,
        horizon=horizon,
    )


def max_modulus_on_grid(n_gamma: int = 181, n_phi: int = 361) -> tuple[float, float, float]:
    """Scan ``|Q0|`` over a Bloch grid; returns ``(max |Q0|, gamma, phi)``."""
    g, p = np.meshgrid(
        np.linspace(0.0, math.pi, n_gamma), np.linspace(0.0, 2 * math.pi, n_phi), indexing="ij"
    )
    mu = Q0_SCALE * (np.cos(g) + np.sin(g) * np.cos(p))
    nu = Q0_SCALE * math.sqrt(2.0) * np.sin(g) * np.sin(p)
    mod = np.hypot(mu, nu)
    i = np.unravel_index(np.argmax(mod), mod.shape)
    return float(mod[i]), float(g[i]), float(p[i])
