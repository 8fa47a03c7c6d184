"""Invariant suite behind ``qwthermo verify``.

Each check records what was observed against what was expected. Checks
marked ``gating=False`` are known discrepancies in the quoted literature
values; they are reported with their numbers but do not fail the run.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .asymptotics import (
    REACHABLE_RADIUS,
    InterferenceTerm,
    analytic_Q0,
    estimate_asymptotics,
    max_modulus_on_grid,
    rho1c,
    stationary_chirality,
)
from .measurement import (
    MINUS,
    PLUS,
    branch_density,
    collapse,
    rho2c_analytic,
    rho2c_bruteforce,
    rho2c_from_ensemble,
)
from .sweep import SCHEMA_FINGERPRINTS, figure1, reachable_grid, schema_fingerprint, to_csv
from .thermo import (
    LN2,
    density_eigenvalues,
    entropy,
    entropy_from_eigenvalues,
    first_stage_eigenvalues,
    j2_discrepancy,
    mixture_upper_bound,
    process_report,
    quoted_branch_eigenvalues,
    second_stage_eigenvalues,
)
from .walker import BlochAngles, Coin, evolve, init_localized, iterate_amplitudes

# Frozen regression constant: |dS - (2 nu^2 + 2(2 sqrt2 - 1) mu^2)| <= C (2 mu^2 + nu^2)^2
# over the reachable disk. The observed supremum is about 1.55.
EXPANSION_C = 1.6


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    observed: object = None
    expected: object = None
    detail: str = ""
    gating: bool = True


def _bloch_grid(n_gamma: int, n_phi: int):
    # phi endpoint dropped: phi = 2 pi repeats phi = 0.
    for g in np.linspace(0.0, math.pi, n_gamma):
        for p in np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False):
            yield BlochAngles(float(g), float(p))


def _reachable_q0(n: int):
    return [InterferenceTerm(m, v) for m, v, skipped in reachable_grid(n) if not skipped]


def walker_checks(quick: bool = False) -> list[Check]:
    out = []
    n_steps = 1000
    worst = 0.0
    for theta, (g, p) in itertools.product((math.pi / 4, 0.3, 1.2), ((0.0, 0.0), (1.0, 2.0), (math.pi, 0.5))):
        state = init_localized(BlochAngles(g, p))
        for t, (a, b) in enumerate(iterate_amplitudes(state.left, state.right, Coin(theta), n_steps), 1):
            if t % 50 == 0:
                worst = max(worst, abs(float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)) - 1.0))
    out.append(Check("walker", "norm conservation over 1000 steps", worst <= 1e-12, worst, "<= 1e-12"))

    k0, t = 3, 60
    s = evolve(init_localized(BlochAngles(1.0, 2.0), k0), Coin(), t)
    nz = s.sites[(np.abs(s.left) > 0) | (np.abs(s.right) > 0)]
    cone = bool(np.all(np.abs(nz - k0) <= t))
    parity = bool(np.all((nz - k0 - t) % 2 == 0))
    out.append(Check("walker", "light cone", cone, [int(nz.min()), int(nz.max())], [k0 - t, k0 + t]))
    out.append(Check("walker", "support parity", parity))

    base = evolve(init_localized(BlochAngles(1.0, 2.0), 0), Coin(), 50)
    moved = evolve(init_localized(BlochAngles(1.0, 2.0), 7), Coin(), 50)
    same = (
        moved.origin - 7 == base.origin
        and np.array_equal(moved.left, base.left)
        and np.array_equal(moved.right, base.right)
    )
    out.append(Check("walker", "translation covariance (exact)", bool(same)))

    psi = init_localized(BlochAngles(0.4, 1.1))
    phi = init_localized(BlochAngles(2.2, 4.0))
    ref = np.vdot(psi.left, phi.left) + np.vdot(psi.right, phi.right)
    drift = 0.0
    for (a1, b1), (a2, b2) in zip(
        iterate_amplitudes(psi.left, psi.right, Coin(), 100),
        iterate_amplitudes(phi.left, phi.right, Coin(), 100),
    ):
        drift = max(drift, abs(np.vdot(a1, a2) + np.vdot(b1, b2) - ref))
    out.append(Check("walker", "inner product preserved over 100 steps", drift <= 1e-12, float(drift), "<= 1e-12"))
    return out


def asymptotics_checks(quick: bool = False) -> list[Check]:
    out = []
    grid = (3, 4) if quick else (9, 16)
    worst, where = 0.0, None
    for bloch in _bloch_grid(*grid):
        est = estimate_asymptotics(bloch, Coin(), 2000, 0.5)
        q0 = analytic_Q0(bloch)
        pi_L, _ = stationary_chirality(q0)
        err = max(abs(est.q0.mu - q0.mu), abs(est.q0.nu - q0.nu), abs(est.pi_L - pi_L))
        if err > worst:
            worst, where = err, (bloch.gamma, bloch.phi)
    out.append(
        Check("asymptotics", f"simulation vs closed form on {grid[0]}x{grid[1]} Bloch grid",
              worst <= 2e-3, worst, "<= 2e-3", f"worst at (gamma, phi) = {where}")
    )

    sums = [sum(stationary_chirality(q)) for q in _reachable_q0(20)]
    out.append(Check("asymptotics", "stationary chirality sums to 1", all(s == 1.0 for s in sums)))

    dev = max(
        max(abs(a - b) for a, b in zip(density_eigenvalues(rho1c(q)), first_stage_eigenvalues(q)))
        for q in _reachable_q0(50)
    )
    out.append(Check("asymptotics", "rho1c spectrum 1/2 +/- sqrt(2mu^2+nu^2)", dev <= 1e-12, dev, "<= 1e-12"))

    m, g, p = max_modulus_on_grid()
    out.append(
        Check("asymptotics", "max |Q0| over the Bloch sphere", m <= REACHABLE_RADIUS * (1 + 1e-12), m,
              REACHABLE_RADIUS, f"attained at gamma={g:.6f}, phi={p:.6f}")
    )
    quoted = 0.5 * (1 - 1 / math.sqrt(2))
    out.append(
        Check("asymptotics", "quoted bound |Q0| <= (1 - 1/sqrt2)/2", m <= quoted, m, quoted,
              "exceeded: the reachable maximum is sqrt(2) times larger", gating=False)
    )
    return out


def measurement_checks(quick: bool = False) -> list[Check]:
    out = []
    grid = (2, 2) if quick else (5, 8)
    worst, where, worst_ens = 0.0, None, 0.0
    for bloch in _bloch_grid(*grid):
        ens = collapse(evolve(init_localized(bloch), Coin(), 40))
        bf = rho2c_bruteforce(ens, Coin(), 1500, 0.5, literal=True)
        ref = rho2c_analytic(analytic_Q0(bloch))
        err = float(np.max(np.abs(bf.matrix - ref.matrix)))
        worst_ens = max(worst_ens, float(np.max(np.abs(bf.matrix - rho2c_from_ensemble(ens).matrix))))
        if err > worst:
            worst, where = err, (bloch.gamma, bloch.phi)
    out.append(
        Check("measurement", f"brute-force rho2c vs measured-weight mixture on {grid[0]}x{grid[1]} grid",
              worst_ens <= 5e-3, worst_ens, "<= 5e-3", "t1=40, horizon=1500")
    )
    out.append(
        Check("measurement", f"brute-force rho2c vs stationary-weight closed form on {grid[0]}x{grid[1]} grid",
              worst <= 5e-3, worst, "<= 5e-3",
              f"t1=40, horizon=1500; worst at {where}; P_L(t1) still oscillates about Pi_L",
              gating=False)
    )

    dev = 0.0
    for t1, bloch in itertools.product((0, 3, 10), (BlochAngles(1.0, 2.0), BlochAngles(0.3, 5.0))):
        ens = collapse(evolve(init_localized(bloch), Coin(), t1))
        lit = rho2c_bruteforce(ens, Coin(), 200, 0.5, literal=True)
        short = rho2c_bruteforce(ens, Coin(), 200, 0.5, literal=False)
        dev = max(dev, float(np.max(np.abs(lit.matrix - short.matrix))))
    out.append(Check("measurement", "translation shortcut equals literal", dev <= 1e-12, dev, "<= 1e-12"))

    ok = True
    for q in _reachable_q0(30):
        r = rho2c_analytic(q)
        mat = r.matrix
        lam = np.linalg.eigvalsh(mat)
        ok &= np.allclose(mat, mat.conj().T) and abs(np.trace(mat) - 1) < 1e-12 and lam.min() > -1e-12
        ok &= r.q.imag == 0.0
    out.append(Check("measurement", "rho2c Hermitian, unit trace, PSD, real off-diagonal", bool(ok)))

    ens = collapse(evolve(init_localized(BlochAngles(1.0, 2.0)), Coin(), 30))
    d = ens.chirality_density()
    pl = sum(p for (_, c), p in ens.weights.items() if c == PLUS)
    pr = sum(p for (_, c), p in ens.weights.items() if c == MINUS)
    out.append(Check("measurement", "collapse leaves diag(P_L, P_R)", d.q == 0 and d.pi_L == pl and d.pi_R == pr))
    return out


def thermo_checks(quick: bool = False) -> list[Check]:
    out = []
    qs = _reachable_q0(50)
    e33 = max(max(abs(a - b) for a, b in zip(density_eigenvalues(rho1c(q)), first_stage_eigenvalues(q))) for q in qs)
    e34 = max(
        max(abs(a - b) for a, b in zip(density_eigenvalues(rho2c_analytic(q)), second_stage_eigenvalues(q)))
        for q in qs
    )
    out.append(Check("thermo", "first-stage eigenvalue formula", e33 <= 1e-12, e33, "<= 1e-12"))
    out.append(Check("thermo", "second-stage eigenvalue formula", e34 <= 1e-12, e34, "<= 1e-12"))

    s_quoted = entropy_from_eigenvalues(*quoted_branch_eigenvalues())
    out.append(Check("thermo", "entropy of quoted branch eigenvalues ~ 0.139", abs(s_quoted - 0.139) <= 1e-3,
                     s_quoted, 0.139))
    lam_branch = density_eigenvalues(branch_density(PLUS))
    dev = max(abs(a - b) for a, b in zip(lam_branch, quoted_branch_eigenvalues()))
    out.append(
        Check("thermo", "branch density spectrum vs quoted closed form", dev <= 1e-12, list(lam_branch),
              list(quoted_branch_eigenvalues()),
              f"S(rho_L) of the branch density is {entropy(branch_density(PLUS)):.6f}", gating=False)
    )

    reports = [process_report(q) for q in _reachable_q0(100)]
    ents = [x for r in reports for x in (r.initial.entropy, r.final.entropy)]
    out.append(Check("thermo", "0 <= S <= ln 2", all(0 <= s <= LN2 + 1e-15 for s in ents),
                     [min(ents), max(ents)], [0, LN2]))
    out.append(Check("thermo", "mixture bound S2 >= S(rho2c)",
                     all(mixture_upper_bound(r.q0) >= r.final.entropy for r in reports)))
    bad = [r.q0 for r in reports if not r.sandwich_ok]
    out.append(Check("thermo", "J2 < dS < J1 on reachable grid", not bad, len(bad), 0))
    out.append(Check("thermo", "dS >= 0, dU <= 0, J2 >= 0",
                     all(r.dS_exact >= 0 and r.dU <= 0 and r.J2_exact >= 0 for r in reports)))
    out.append(Check("thermo", "first law: heat == dU, work == 0", all(r.first_law_ok for r in reports)))
    d = max(abs(r.dU - r.dU_closed_form) for r in reports)
    out.append(Check("thermo", "dU matches closed form", d <= 1e-12, d, "<= 1e-12"))
    ratio = max(
        abs(r.dS_exact - r.dS_approx) / (2 * r.q0.mu**2 + r.q0.nu**2) ** 2 for r in reports
    )
    out.append(Check("thermo", "quadratic entropy-change expansion", ratio <= EXPANSION_C, ratio,
                     f"<= {EXPANSION_C} (2mu^2+nu^2)^2"))

    fig = figure1()
    worst = max(abs(r["dS_exact"] - r["dS_approx"]) for r in fig)
    out.append(Check("thermo", "figure-1 curve within 2e-3 of the quadratic form", worst <= 2e-3, worst,
                     "<= 2e-3", "fails near mu^2 = 0.04 where quartic terms reach ~1e-2", gating=False))
    out.append(Check("thermo", "J2_exact / J2_quoted ratio", True, j2_discrepancy(reports), "reported only",
                     gating=False))
    return out


def schema_checks(quick: bool = False) -> list[Check]:
    out = []
    for kind, fp in SCHEMA_FINGERPRINTS.items():
        got = schema_fingerprint(kind)
        out.append(Check("schema", f"{kind} columns", got == fp, got[:12], fp[:12]))
    a = to_csv(figure1(20))
    b = to_csv(figure1(20))
    out.append(Check("schema", "byte-identical repeated output", a == b))
    return out


SUITES = (walker_checks, asymptotics_checks, measurement_checks, thermo_checks, schema_checks)


def run_verify(quick: bool = False) -> tuple[list[Check], bool]:
    checks = [c for suite in SUITES for c in suite(quick)]
    return checks, all(c.passed for c in checks if c.gating)


def format_text(checks: list[Check]) -> str:
    lines = []
    for c in checks:
        tag = "PASS" if c.passed else ("FAIL" if c.gating else "NOTE")
        line = f"[{tag}] {c.suite}: {c.name}"
        if c.observed is not None:
            line += f" (observed {c.observed}, expected {c.expected})"
        if c.detail:
            line += f" - {c.detail}"
        lines.append(line)
    return "\n".join(lines)


def format_json(checks: list[Check], ok: bool) -> str:
    def clean(v):
        if isinstance(v, (np.floating, np.integer)):
            return v.item()
        if isinstance(v, tuple):
            return list(v)
        return v

    return json.dumps(
        {"ok": ok, "checks": [{k: clean(v) for k, v in asdict(c).items()} for c in checks]},
        indent=1,
        default=str,
    )
