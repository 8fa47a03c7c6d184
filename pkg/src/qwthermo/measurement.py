"""Projective position+chirality measurement and the second stationary state.

After the measurement the walker is a classical mixture of basis states
``|k,+>`` and ``|k,->``. Because the walk is translation invariant, each
basis state relaxes to the same coin density whatever its site, so the
post-measurement density is a two-term mixture of the ``+`` and ``-``
branch densities. ``rho2c_bruteforce`` checks that by evolving every
member of the ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .asymptotics import (
    PSD_TOL,
    ChiralityDensity,
    InterferenceTerm,
    analytic_Q0,
    stationary_chirality,
    tail_observables,
)
from .walker import BlochAngles, Coin, SpinorField

PLUS, MINUS = 1, -1


@dataclass(frozen=True)
class MixedEnsemble:
    """Weights of a classical mixture over ``(site, chirality)`` basis states."""

    weights: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        w = dict(sorted(self.weights.items(), key=lambda kv: (kv[0][0], -kv[0][1])))
        for (site, chirality), p in w.items():
            if chirality not in (PLUS, MINUS):
                raise ValueError(f"chirality must be +1 or -1, got {chirality!r}")
            if p < 0:
                raise ValueError(f"negative weight {p!r} at site {site}")
        total = sum(w.values())
        if abs(total - 1.0) > PSD_TOL:
            raise ValueError(f"ensemble weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)

    def chirality_weights(self) -> tuple[float, float]:
        """Total weight of ``+`` and ``-`` members (``P_L``, ``P_R`` at collapse)."""
        plus = sum(p for (_, c), p in self.weights.items() if c == PLUS)
        minus = sum(p for (_, c), p in self.weights.items() if c == MINUS)
        return plus, minus

    def chirality_density(self) -> ChiralityDensity:
        """Coin density of the ensemble itself; diagonal, since coherences are gone."""
        plus, minus = self.chirality_weights()
        return ChiralityDensity(plus, minus, 0j)


@dataclass(frozen=True)
class BranchAsymptotics:
    pi_L: float
    pi_R: float
    q0: InterferenceTerm

    @property
    def density(self) -> ChiralityDensity:
        return ChiralityDensity(self.pi_L, self.pi_R, self.q0.value)


def collapse(state: SpinorField) -> MixedEnsemble:
    pa = (state.left * state.left.conj()).real
    pb = (state.right * state.right.conj()).real
    weights = {}
    for site, wa, wb in zip(state.sites.tolist(), pa.tolist(), pb.tolist()):
        if wa > 0.0:
            weights[(site, PLUS)] = wa
        if wb > 0.0:
            weights[(site, MINUS)] = wb
    return MixedEnsemble(weights)


def branch_asymptotics(chirality: int, coin: Coin = Coin()) -> BranchAsymptotics:
    """Long-time limits for a walker started in ``|k,+>`` or ``|k,->`` (any ``k``).

    The ``-`` branch is the exact chirality mirror of the ``+`` branch.
    """
    if chirality not in (PLUS, MINUS):
        raise ValueError("chirality must be +1 or -1")
    q0 = analytic_Q0(BlochAngles(0.0), coin)
    if chirality == MINUS:
        q0 = InterferenceTerm(-q0.mu, -q0.nu)
    pi_L, pi_R = stationary_chirality(q0)
    return BranchAsymptotics(pi_L, pi_R, q0)


def branch_density(chirality: int, coin: Coin = Coin()) -> ChiralityDensity:
    """``rho_L`` for ``chirality=+1``, ``rho_R`` for ``chirality=-1``."""
    return branch_asymptotics(chirality, coin).density


def _mix(w_plus: float, w_minus: float, coin: Coin) -> ChiralityDensity:
    # Deviation form: equal weights give exactly diag(1/2, 1/2).
    rl, rr = branch_density(PLUS, coin), branch_density(MINUS, coin)
    dev = w_plus * (rl.pi_L - 0.5) + w_minus * (rr.pi_L - 0.5)
    return ChiralityDensity(0.5 + dev, 0.5 - dev, w_plus * rl.q + w_minus * rr.q)


def rho2c_analytic(q0: InterferenceTerm, coin: Coin = Coin()) -> ChiralityDensity:
    """Second stationary density ``Pi_L rho_L + Pi_R rho_R``; depends on ``mu`` only."""
    pi_L, pi_R = stationary_chirality(q0)
    return _mix(pi_L, pi_R, coin)


def rho2c_from_ensemble(ensemble: MixedEnsemble, coin: Coin = Coin()) -> ChiralityDensity:
    """Same mixture, weighted by the chirality totals actually measured."""
    return _mix(*ensemble.chirality_weights(), coin)


def rho2c_bruteforce(
    ensemble: MixedEnsemble,
    coin: Coin = Coin(),
    horizon: int = 2000,
    tail_fraction: float = 0.5,
    literal: bool = True,
) -> ChiralityDensity:
    """Evolve the measured ensemble and tail-average its coin density.

    ``literal=True`` evolves every ``|k,+/->`` member on its own site (the
    oracle mode). ``literal=False`` uses translation invariance and evolves
    only ``|0,+>`` and ``|0,->`` weighted by the chirality totals.
    Works for any coin.
    """
    if horizon < 100:
        raise ValueError("horizon must be >= 100")
    if literal:
        # One batch per site parity so each runs on its own sublattice.
        groups = {}
        for key, p in ensemble.weights.items():
            groups.setdefault(key[0] % 2, []).append((key, p))
        batches = [groups[parity] for parity in sorted(groups)]
    else:
        plus, minus = ensemble.chirality_weights()
        batches = [[((0, PLUS), plus), ((0, MINUS), minus)]]
    total = None
    for batch in batches:
        lo = min(site for (site, _), _ in batch)
        width = (max(site for (site, _), _ in batch) - lo) // 2 + 1
        a = np.zeros((len(batch), width))
        b = np.zeros_like(a)
        for row, ((site, chirality), _) in enumerate(batch):
            (a if chirality == PLUS else b)[row, (site - lo) // 2] = 1.0
        w = np.array([p for _, p in batch])
        series = tail_observables(
            a, b, coin, horizon, tail_fraction, weights=w, sublattice=True
        )
        total = series if total is None else tuple(x + y for x, y in zip(total, series))
    pl, pr, qs = total
    return ChiralityDensity(float(np.mean(pl)), float(np.mean(pr)), complex(np.mean(qs)))
