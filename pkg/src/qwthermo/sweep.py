"""Protocol runs, parameter sweeps and figure data.

Every run produces a flat :class:`RunRecord` whose column set is fixed per
record kind (``protocol``, ``figure1``, ``figure2``) and versioned by
``SCHEMA_VERSION``. Output is CSV or JSON with floats at 12 significant
digits, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .asymptotics import (
    Q0_SCALE,
    REACHABLE_RADIUS,
    InterferenceTerm,
    analytic_Q0,
    estimate_asymptotics,
)
from .measurement import collapse, rho2c_analytic, rho2c_bruteforce
from .thermo import EnergyScale, ThermoReport, process_report
from .walker import BlochAngles, Coin, evolve, init_localized, position_distribution

SCHEMA_VERSION = 1

_THERMO_FIELDS = (
    "lambda_plus", "lambda_minus", "entropy", "beta", "temperature", "partition", "internal_energy",
)

COLUMNS = {
    "protocol": (
        "gamma", "phi", "mu_in", "nu_in", "theta", "t1", "horizon", "tail_fraction", "epsilon",
        "est_pi_L", "est_pi_R", "est_q0_re", "est_q0_im", "est_tail_std",
        "analytic_q0_re", "analytic_q0_im", "measured_P_L", "measured_P_R",
        "q0_re", "q0_im",
        "rho1_pi_L", "rho1_pi_R", "rho1_q_re", "rho1_q_im",
        "rho2_pi_L", "rho2_pi_R", "rho2_q_re", "rho2_q_im",
        "rho2_bf_pi_L", "rho2_bf_pi_R", "rho2_bf_q_re", "rho2_bf_q_im", "oracle_max_dev",
        *(f"{f}_1" for f in _THERMO_FIELDS),
        *(f"{f}_2" for f in _THERMO_FIELDS),
        "branch_entropy", "dS_exact", "dS_approx", "S2_bound", "gap_exact", "gap_approx",
        "J1", "J2_exact", "J2_paper", "dU", "dT", "heat", "work",
        "first_law_ok", "second_law_ok", "sandwich_ok", "skipped",
    ),
    "evolve": ("site", "a_re", "a_im", "b_re", "b_im", "prob"),
    "asymptotics": (
        "gamma", "phi", "theta", "horizon", "tail_fraction",
        "est_pi_L", "est_pi_R", "est_q0_re", "est_q0_im", "est_tail_std",
        "analytic_q0_re", "analytic_q0_im", "analytic_pi_L", "analytic_pi_R",
    ),
    "figure1": ("mu2", "dS_exact", "dS_approx", "gap_exact", "gap_approx"),
    "figure2": ("mu", "nu", "dS_exact", "J1", "J2_exact", "J2_paper", "skipped"),
}

# sha256 of the comma-joined columns; bump SCHEMA_VERSION when these change.
SCHEMA_FINGERPRINTS = {
    "evolve": "b6850622ebbdebe708bc42e286e6405a5f55b54866de212ce52f1b094ddb99fe",
    "asymptotics": "09b8351d1fbf0d900a66f28ce09b22482e36dea2277940572f0f742499ac220b",
    "protocol": "ca3c7275d4879162bc5b09c5003ea961eb4df4c1c2277ade1c3d6479d4f59166",
    "figure1": "bf52a91f53292cc071f05891987c3331bb13224a485d66cdfbd96ac4b0c42287",
    "figure2": "7c05ff684e924ace8776e5bde0ae17e5acbecebd73357496fbe8d24ea13cf275",
}


def schema_fingerprint(kind: str) -> str:
    return hashlib.sha256(",".join(COLUMNS[kind]).encode()).hexdigest()


@dataclass(frozen=True)
class ProtocolParams:
    theta: float = math.pi / 4
    t1: int = 400
    horizon: int = 2000
    tail_fraction: float = 0.5
    epsilon: float = 1.0
    oracle: bool = False

    def __post_init__(self):
        Coin(self.theta)
        EnergyScale(self.epsilon)
        if self.t1 < 0:
            raise ValueError(f"t1 must be >= 0, got {self.t1}")
        if self.horizon < 100:
            raise ValueError(f"horizon must be >= 100, got {self.horizon}")
        if not 0.0 < self.tail_fraction <= 0.5:
            raise ValueError(f"tail_fraction must be in (0, 0.5], got {self.tail_fraction}")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"axis {self.name!r} needs at least 2 points")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name:lo:hi:n``, e.g. ``gamma:0:3.14159:50``."""
        try:
            name, lo, hi, n = text.split(":")
            return cls(name, float(lo), float(hi), int(n))
        except ValueError as exc:
            raise ValueError(f"bad axis spec {text!r}, expected name:lo:hi:n ({exc})") from None

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class SweepGrid:
    axis1: Axis
    axis2: Axis
    mode: str = "bloch"

    def __post_init__(self):
        names = {"bloch": ("gamma", "phi"), "q0": ("mu", "nu")}
        if self.mode not in names:
            raise ValueError(f"mode must be 'bloch' or 'q0', got {self.mode!r}")
        got = (self.axis1.name, self.axis2.name)
        if got != names[self.mode]:
            raise ValueError(f"{self.mode} grid axes must be {names[self.mode]}, got {got}")

    def points(self) -> list[tuple[float, float]]:
        return [(float(u), float(v)) for u in self.axis1.points() for v in self.axis2.points()]


@dataclass
class RunRecord:
    kind: str
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.values) - set(COLUMNS[self.kind])
        if unknown:
            raise KeyError(f"unknown {self.kind} columns: {sorted(unknown)}")

    def row(self) -> dict:
        return {c: self.values.get(c, math.nan) for c in COLUMNS[self.kind]}

    def __getitem__(self, key):
        return self.row()[key]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return f"{float(v):.12g}"


def _json_value(v):
    if isinstance(v, (bool, int)):
        return v
    v = float(v)
    if not math.isfinite(v):
        return _fmt(v)
    return float(f"{v:.12g}")


def to_csv(records: Sequence[RunRecord], kind: str | None = None) -> str:
    kind = kind or (records[0].kind if records else "protocol")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS[kind])
    for r in records:
        w.writerow([_fmt(v) for v in r.row().values()])
    return buf.getvalue()


def to_json(records: Sequence[RunRecord], kind: str | None = None) -> str:
    kind = kind or (records[0].kind if records else "protocol")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "columns": list(COLUMNS[kind]),
        "records": [{k: _json_value(v) for k, v in r.row().items()} for r in records],
    }
    return json.dumps(doc, indent=1) + "\n"


def write_records(records: Sequence[RunRecord], path, fmt: str = "csv", kind: str | None = None):
    text = to_csv(records, kind) if fmt == "csv" else to_json(records, kind)
    if path is None or str(path) == "-":
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def _thermo_columns(th: ThermoReport, suffix: str) -> dict:
    return {f"{f}{suffix}": getattr(th, f) for f in _THERMO_FIELDS}


def _ledger_columns(q0: InterferenceTerm, params: ProtocolParams) -> dict:
    coin = Coin(params.theta)
    rep = process_report(q0, EnergyScale(params.epsilon), coin)
    rho2 = rho2c_analytic(q0, coin)
    return {
        "q0_re": q0.mu,
        "q0_im": q0.nu,
        "rho1_pi_L": 0.5 + q0.mu,
        "rho1_pi_R": 0.5 - q0.mu,
        "rho1_q_re": q0.mu,
        "rho1_q_im": q0.nu,
        "rho2_pi_L": rho2.pi_L,
        "rho2_pi_R": rho2.pi_R,
        "rho2_q_re": rho2.q.real,
        "rho2_q_im": rho2.q.imag,
        **_thermo_columns(rep.initial, "_1"),
        **_thermo_columns(rep.final, "_2"),
        "branch_entropy": rep.branch_entropy,
        "dS_exact": rep.dS_exact,
        "dS_approx": rep.dS_approx,
        "S2_bound": rep.S2_bound,
        "gap_exact": rep.gap_exact,
        "gap_approx": rep.gap_approx,
        "J1": rep.J1,
        "J2_exact": rep.J2_exact,
        "J2_paper": rep.J2_approx,
        "dU": rep.dU,
        "dT": rep.dT,
        "heat": rep.heat,
        "work": rep.work,
        "first_law_ok": rep.first_law_ok,
        "second_law_ok": rep.second_law_ok,
        "sandwich_ok": rep.sandwich_ok,
        "skipped": False,
    }


def _inputs(params: ProtocolParams, **kw) -> dict:
    return {
        "theta": params.theta,
        "t1": params.t1,
        "horizon": params.horizon,
        "tail_fraction": params.tail_fraction,
        "epsilon": params.epsilon,
        **kw,
    }


def run_protocol(bloch: BlochAngles, params: ProtocolParams = ProtocolParams()) -> RunRecord:
    """Evolve to ``t1``, measure, and compute both stationary states.

    The thermodynamic ledger uses the simulated (tail-averaged) ``Q0``. The
    closed-form ``Q0`` is recorded next to it. With ``params.oracle`` the
    second stationary density is also obtained by literal brute force from
    the measured ensemble, and ``oracle_max_dev`` is its largest entrywise
    deviation from the closed form.
    """
    coin = Coin(params.theta)
    est = estimate_asymptotics(bloch, coin, params.horizon, params.tail_fraction)
    q0_exact = analytic_Q0(bloch, coin)
    ensemble = collapse(evolve(init_localized(bloch), coin, params.t1))
    p_plus, p_minus = ensemble.chirality_weights()

    values = _inputs(params, gamma=bloch.gamma, phi=bloch.phi)
    values.update(
        est_pi_L=est.pi_L,
        est_pi_R=est.pi_R,
        est_q0_re=est.q0.mu,
        est_q0_im=est.q0.nu,
        est_tail_std=est.tail_std,
        analytic_q0_re=q0_exact.mu,
        analytic_q0_im=q0_exact.nu,
        measured_P_L=p_plus,
        measured_P_R=p_minus,
    )
    values.update(_ledger_columns(est.q0, params))
    if params.oracle:
        bf = rho2c_bruteforce(ensemble, coin, params.horizon, params.tail_fraction, literal=True)
        ref = rho2c_analytic(q0_exact, coin)
        values.update(
            rho2_bf_pi_L=bf.pi_L,
            rho2_bf_pi_R=bf.pi_R,
            rho2_bf_q_re=bf.q.real,
            rho2_bf_q_im=bf.q.imag,
            oracle_max_dev=float(np.max(np.abs(bf.matrix - ref.matrix))),
        )
    return RunRecord("protocol", values)


def evolve_records(state) -> list[RunRecord]:
    prob = position_distribution(state)
    return [
        RunRecord(
            "evolve",
            {"site": int(k), "a_re": a.real, "a_im": a.imag, "b_re": b.real, "b_im": b.imag, "prob": p},
        )
        for k, a, b, p in zip(state.sites, state.left, state.right, prob)
    ]


def asymptotics_record(bloch: BlochAngles, params: ProtocolParams = ProtocolParams()) -> RunRecord:
    """Simulated limits, plus the closed forms when the coin is Hadamard."""
    coin = Coin(params.theta)
    est = estimate_asymptotics(bloch, coin, params.horizon, params.tail_fraction)
    values = {
        "gamma": bloch.gamma,
        "phi": bloch.phi,
        "theta": params.theta,
        "horizon": params.horizon,
        "tail_fraction": params.tail_fraction,
        "est_pi_L": est.pi_L,
        "est_pi_R": est.pi_R,
        "est_q0_re": est.q0.mu,
        "est_q0_im": est.q0.nu,
        "est_tail_std": est.tail_std,
    }
    if coin.is_hadamard:
        q0 = analytic_Q0(bloch, coin)
        values.update(
            analytic_q0_re=q0.mu,
            analytic_q0_im=q0.nu,
            analytic_pi_L=0.5 + q0.mu,
            analytic_pi_R=0.5 - q0.mu,
        )
    return RunRecord("asymptotics", values)


def analytic_record(q0: InterferenceTerm, params: ProtocolParams, **inputs) -> RunRecord:
    values = _inputs(params, **inputs)
    values.update(_ledger_columns(q0, params))
    return RunRecord("protocol", values)


def _skipped(params: ProtocolParams, **inputs) -> RunRecord:
    return RunRecord("protocol", {**_inputs(params, **inputs), "skipped": True})


def _sweep_point(args) -> RunRecord:
    mode, u, v, params, simulate = args
    if mode == "bloch":
        bloch = BlochAngles(u, v)
        if simulate:
            return run_protocol(bloch, params)
        q0 = analytic_Q0(bloch, Coin(params.theta))
        return analytic_record(q0, params, gamma=u, phi=v)
    if not is_reachable(u, v):
        return _skipped(params, mu_in=u, nu_in=v)
    return analytic_record(InterferenceTerm(u, v), params, mu_in=u, nu_in=v)


def _map(fn, items: list, workers: int) -> list:
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def run_sweep(
    grid: SweepGrid,
    params: ProtocolParams = ProtocolParams(),
    simulate: bool = False,
    workers: int = 1,
) -> list[RunRecord]:
    """One record per grid point, row-major (``axis1`` outer).

    ``q0`` grids outside the reachable disk yield records flagged
    ``skipped``. ``simulate`` (bloch mode only) runs the full protocol per
    point instead of the closed forms. Output order does not depend on
    ``workers``.
    """
    if simulate and grid.mode != "bloch":
        raise ValueError("simulate requires a bloch grid")
    items = [(grid.mode, u, v, params, simulate) for u, v in grid.points()]
    return _map(_sweep_point, items, workers)


def is_reachable(mu: float, nu: float, tol: float = 1e-12) -> bool:
    return math.hypot(mu, nu) <= REACHABLE_RADIUS + tol


def reachable_grid(n: int) -> list[tuple[float, float, bool]]:
    """``n x n`` square grid over ``[-R, R]^2``, ``R`` the reachable radius.

    Returns ``(mu, nu, skipped)`` with ``skipped`` set outside the disk.
    """
    pts = np.linspace(-REACHABLE_RADIUS, REACHABLE_RADIUS, n)
    return [(float(m), float(v), not is_reachable(m, v)) for m in pts for v in pts]


def figure1(n_points: int = 200, mu2_max: float = 0.04, params: ProtocolParams = ProtocolParams()) -> list[RunRecord]:
    """Entropy change against ``mu^2`` along ``phi = 0``.

    With ``phi = 0``, ``mu = sqrt(2) * scale * sin(gamma + pi/4)`` and
    ``nu = 0``; ``gamma`` is chosen on ``[pi/4, 3pi/4]`` so that ``mu^2``
    is evenly spaced on ``[0, mu2_max]``.
    """
    if mu2_max > REACHABLE_RADIUS**2:
        raise ValueError(f"mu2_max must be <= {REACHABLE_RADIUS**2!r}")
    coin = Coin(params.theta)
    scale = EnergyScale(params.epsilon)
    records = []
    for mu2 in np.linspace(0.0, mu2_max, n_points):
        s = min(1.0, math.sqrt(mu2) / (math.sqrt(2.0) * Q0_SCALE))
        gamma = 3 * math.pi / 4 - math.asin(s)
        rep = process_report(analytic_Q0(BlochAngles(gamma, 0.0), coin), scale, coin)
        records.append(
            RunRecord(
                "figure1",
                {
                    "mu2": rep.q0.mu**2,
                    "dS_exact": rep.dS_exact,
                    "dS_approx": rep.dS_approx,
                    "gap_exact": rep.gap_exact,
                    "gap_approx": rep.gap_approx,
                },
            )
        )
    return records


def _figure2_point(args) -> RunRecord:
    mu, nu, skipped, params = args
    if skipped:
        return RunRecord("figure2", {"mu": mu, "nu": nu, "skipped": True})
    rep = process_report(InterferenceTerm(mu, nu), EnergyScale(params.epsilon), Coin(params.theta))
    return RunRecord(
        "figure2",
        {
            "mu": mu,
            "nu": nu,
            "dS_exact": rep.dS_exact,
            "J1": rep.J1,
            "J2_exact": rep.J2_exact,
            "J2_paper": rep.J2_approx,
            "skipped": False,
        },
    )


def figure2(n: int = 100, params: ProtocolParams = ProtocolParams(), workers: int = 1) -> list[RunRecord]:
    """Entropy change and its bounds over the reachable ``(mu, nu)`` disk."""
    items = [(m, v, s, params) for m, v, s in reachable_grid(n)]
    return _map(_figure2_point, items, workers)


def active(records: Iterable[RunRecord]) -> list[RunRecord]:
    return [r for r in records if not r.values.get("skipped", False)]
