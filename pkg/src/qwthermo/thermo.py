"""Entanglement thermodynamics of the coin density.

The reduced coin density is read as a two-level canonical ensemble with
energies ``+eps`` and ``-eps``: its eigenvalues fix an inverse temperature,
partition function and internal energy. Entropies are von Neumann entropies
in natural-log units with Boltzmann's constant set to 1.

Throughout, ``x`` denotes the eigenvalue half-gap of a 2x2 density, so that
the eigenvalues are ``1/2 + x`` and ``1/2 - x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import (
    PSD_TOL,
    ChiralityDensity,
    InterferenceTerm,
    InvalidDensity,
    rho1c,
    stationary_chirality,
)
from .measurement import PLUS, branch_density, rho2c_analytic
from .walker import Coin

LN2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)

# Below this |Q0| the process is treated as the null (Q0 = 0) case when
# deciding whether the bound inequalities must hold strictly.
NULL_Q0_TOL = 1e-6


@dataclass(frozen=True)
class EnergyScale:
    epsilon: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")


@dataclass(frozen=True)
class ThermoReport:
    """Canonical-ensemble reading of one coin density.

    ``temperature`` is ``math.inf`` for a maximally mixed density
    (``degenerate``) and ``0.0`` for a pure one (``pure``, where ``beta`` is
    ``-inf``). Otherwise it is finite and negative, since the more likely
    level is the upper one.
    """

    lambda_plus: float
    lambda_minus: float
    entropy: float
    beta: float
    temperature: float
    partition: float
    internal_energy: float
    degenerate: bool = False
    pure: bool = False


@dataclass(frozen=True)
class BoundsReport:
    q0: InterferenceTerm
    initial: ThermoReport = field(repr=False)
    final: ThermoReport = field(repr=False)
    branch_entropy: float
    dS_exact: float
    dS_approx: float
    S2_bound: float
    gap_exact: float
    gap_approx: float
    J1: float
    J2_exact: float
    J2_approx: float
    dU: float
    dU_closed_form: float
    dT: float
    heat: float
    work: float
    first_law_ok: bool
    second_law_ok: bool
    sandwich_ok: bool


def _half_gap(rho: ChiralityDensity) -> float:
    x = math.hypot(rho.pi_L - 0.5, abs(rho.q))
    if x > 0.5 + PSD_TOL:
        raise InvalidDensity(f"eigenvalue half-gap {x!r} > 1/2")
    return min(x, 0.5)


def density_eigenvalues(rho: ChiralityDensity) -> tuple[float, float]:
    """Eigenvalues ``(L+, L-)`` of a 2x2 density, ``L+ >= L-``."""
    x = _half_gap(rho)
    return 0.5 + x, 0.5 - x


def first_stage_eigenvalues(q0: InterferenceTerm) -> tuple[float, float]:
    x = math.sqrt(2 * q0.mu**2 + q0.nu**2)
    return 0.5 + x, 0.5 - x


def second_stage_eigenvalues(q0: InterferenceTerm) -> tuple[float, float]:
    x = abs(q0.mu) * (SQRT2 - 1)
    return 0.5 + x, 0.5 - x


def quoted_branch_eigenvalues() -> tuple[float, float]:
    """``1/2 +/- sqrt(3 - 3/sqrt(2)) / 2``, the literature closed form for the
    branch densities, ordered ``L+ >= L-``.

    This pair is *not* the spectrum of ``branch_density(+1)`` as built from
    the branch limits; that density has eigenvalues ``1/sqrt(2)`` and
    ``1 - 1/sqrt(2)``. Kept so the two can be compared.
    """
    x = 0.5 * math.sqrt(3 - 3 / SQRT2)
    return 0.5 + x, 0.5 - x


def _xlogx(p: float) -> float:
    return p * math.log(p) if p > 0 else 0.0


def entropy_from_eigenvalues(lam_plus: float, lam_minus: float) -> float:
    return -_xlogx(lam_plus) - _xlogx(lam_minus)


def binary_entropy(p: float) -> float:
    return -_xlogx(p) - _xlogx(1.0 - p)


def _deficit(x: float) -> float:
    # ln 2 - S for half-gap x, without cancellation near x = 0.
    term = (1 - 2 * x) * math.log1p(-2 * x) if x < 0.5 else 0.0
    return 0.5 * ((1 + 2 * x) * math.log1p(2 * x) + term)


def entropy(rho: ChiralityDensity) -> float:
    """Von Neumann entropy ``-tr(rho ln rho)``, in ``[0, ln 2]``."""
    return LN2 - _deficit(_half_gap(rho))


def mixture_upper_bound(q0: InterferenceTerm, coin: Coin = Coin()) -> float:
    """``S(rho_L) + H(Pi_L)``, the mixing bound on the second-stage entropy."""
    pi_L, _ = stationary_chirality(q0)
    return entropy(branch_density(PLUS, coin)) + binary_entropy(pi_L)


def thermo_state(rho: ChiralityDensity, scale: EnergyScale = EnergyScale()) -> ThermoReport:
    eps = scale.epsilon
    x = _half_gap(rho)
    lp, lm = 0.5 + x, 0.5 - x
    s = LN2 - _deficit(x)
    u = eps * (lp - lm)
    if x == 0.0:
        return ThermoReport(lp, lm, s, 0.0, math.inf, 2.0, u, degenerate=True)
    if lm == 0.0:
        return ThermoReport(lp, lm, s, -math.inf, 0.0, math.inf, u, pure=True)
    log_ratio = 2 * math.atanh(2 * x)
    beta = -log_ratio / (2 * eps)
    return ThermoReport(
        lambda_plus=lp,
        lambda_minus=lm,
        entropy=s,
        beta=beta,
        temperature=1.0 / beta,
        partition=2 * math.cosh(beta * eps),
        internal_energy=u,
    )


def _temperature_change(t1: ThermoReport, t2: ThermoReport) -> float:
    if t1.degenerate and t2.degenerate:
        return 0.0
    if t2.degenerate:
        return math.inf
    if t1.degenerate:
        return -math.inf
    return t2.temperature - t1.temperature


def process_report(
    q0: InterferenceTerm, scale: EnergyScale = EnergyScale(), coin: Coin = Coin()
) -> BoundsReport:
    """Entropy, energy and bound ledger for measure-and-relax from ``q0``.

    ``J2_exact`` is ``heat / T2`` from the exact spectra (zero when ``T2`` is
    infinite). ``J2_approx`` is the leading small-``Q0`` form
    ``(sqrt2-1)|mu| [sqrt(2mu^2+nu^2) - (sqrt2-1)|mu|]``, which undershoots
    the exact value by a factor close to 4.
    """
    mu, nu = q0.mu, q0.nu
    eps = scale.epsilon
    rho1 = rho1c(q0)
    rho2 = rho2c_analytic(q0, coin)
    x1, x2 = _half_gap(rho1), _half_gap(rho2)
    th1, th2 = thermo_state(rho1, scale), thermo_state(rho2, scale)

    s_branch = entropy(branch_density(PLUS, coin))
    pi_L, _ = stationary_chirality(q0)
    s2_bound = s_branch + binary_entropy(pi_L)

    dS = _deficit(x1) - _deficit(x2)
    dU = th2.internal_energy - th1.internal_energy
    heat, work = dU, 0.0
    j2 = heat * th2.beta if not th2.degenerate else 0.0
    j1 = s_branch + 2 * (mu**2 + nu**2)

    if abs(q0) > NULL_Q0_TOL:
        sandwich = j2 < dS < j1
        second = dS > j2
    else:
        sandwich = j2 - PSD_TOL <= dS <= j1 + PSD_TOL
        second = True

    return BoundsReport(
        q0=q0,
        initial=th1,
        final=th2,
        branch_entropy=s_branch,
        dS_exact=dS,
        dS_approx=2 * nu**2 + 2 * (2 * SQRT2 - 1) * mu**2,
        S2_bound=s2_bound,
        gap_exact=s2_bound - th2.entropy,
        gap_approx=s_branch - 4 * (SQRT2 - 1) * mu**2,
        J1=j1,
        J2_exact=j2,
        J2_approx=(SQRT2 - 1) * abs(mu) * (math.sqrt(2 * mu**2 + nu**2) - (SQRT2 - 1) * abs(mu)),
        dU=dU,
        dU_closed_form=2 * eps * ((SQRT2 - 1) * abs(mu) - math.sqrt(2 * mu**2 + nu**2)),
        dT=_temperature_change(th1, th2),
        heat=heat,
        work=work,
        first_law_ok=(heat == dU and work == 0.0),
        second_law_ok=second,
        sandwich_ok=sandwich,
    )


def j2_discrepancy(reports, mu_floor: float = 1e-3) -> dict:
    """Ratio ``J2_exact / J2_approx`` over reports with ``|mu| > mu_floor``."""
    ratios = np.array(
        [r.J2_exact / r.J2_approx for r in reports
         if abs(r.q0.mu) > mu_floor and r.J2_approx > 0]
    )
    if ratios.size == 0:
        return {"count": 0}
    return {
        "count": int(ratios.size),
        "min": float(ratios.min()),
        "max": float(ratios.max()),
        "mean": float(ratios.mean()),
    }
