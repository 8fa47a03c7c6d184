import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwthermo.asymptotics import REACHABLE_RADIUS, ChiralityDensity, InterferenceTerm, rho1c
from qwthermo.measurement import PLUS, branch_density, rho2c_analytic
from qwthermo.thermo import (
    LN2,
    EnergyScale,
    binary_entropy,
    density_eigenvalues,
    entropy,
    entropy_from_eigenvalues,
    first_stage_eigenvalues,
    j2_discrepancy,
    mixture_upper_bound,
    process_report,
    quoted_branch_eigenvalues,
    second_stage_eigenvalues,
    thermo_state,
)

SQ2 = math.sqrt(2)
MU_PLUS = 0.5 - 1 / (2 * SQ2)
S_BRANCH = 0.6047219371592851


def disk_points(draw_mu, draw_phase):
    r = REACHABLE_RADIUS * math.sqrt(draw_mu)
    return InterferenceTerm(r * math.cos(draw_phase), r * math.sin(draw_phase))


q0s = st.builds(disk_points, st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi))


def oracle_entropy(rho: ChiralityDensity) -> float:
    lam = np.linalg.eigvalsh(rho.matrix)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


# ---- spectra ------------------------------------------------------------


def test_eigenvalues_examples():
    assert density_eigenvalues(ChiralityDensity(0.5, 0.5)) == (0.5, 0.5)
    lp, lm = density_eigenvalues(rho1c(InterferenceTerm(0.1464466, 0.0)))
    assert lp == pytest.approx(0.7071068, abs=1e-7)
    assert lm == pytest.approx(0.2928932, abs=1e-7)


def test_quoted_branch_pair():
    lp, lm = quoted_branch_eigenvalues()
    assert lp == pytest.approx(0.5 + 0.5 * math.sqrt(3 - 3 / SQ2), abs=1e-15)
    assert (lp, lm) == pytest.approx((0.96868957, 0.03131043), abs=1e-8)


def test_branch_density_spectrum_differs_from_quoted_pair():
    lam = density_eigenvalues(branch_density(PLUS))
    assert lam == pytest.approx((1 / SQ2, 1 - 1 / SQ2), abs=1e-15)
    assert abs(lam[0] - quoted_branch_eigenvalues()[0]) > 0.2


@given(q0s)
def test_closed_form_spectra(q):
    np.testing.assert_allclose(density_eigenvalues(rho1c(q)), first_stage_eigenvalues(q), atol=1e-12)
    np.testing.assert_allclose(density_eigenvalues(rho2c_analytic(q)), second_stage_eigenvalues(q), atol=1e-12)
    np.testing.assert_allclose(sorted(density_eigenvalues(rho1c(q))), np.linalg.eigvalsh(rho1c(q).matrix),
                               atol=1e-12)


# ---- entropy ------------------------------------------------------------


def test_entropy_examples():
    assert entropy(ChiralityDensity(0.5, 0.5)) == LN2
    assert entropy(ChiralityDensity(1.0, 0.0)) == 0.0
    assert entropy_from_eigenvalues(1.0, 0.0) == 0.0
    assert entropy_from_eigenvalues(*quoted_branch_eigenvalues()) == pytest.approx(0.139, abs=1e-3)
    assert entropy(branch_density(PLUS)) == pytest.approx(S_BRANCH, abs=1e-15)


@given(q0s)
def test_entropy_matches_oracle(q):
    for rho in (rho1c(q), rho2c_analytic(q)):
        s = entropy(rho)
        assert 0 <= s <= LN2
        assert s == pytest.approx(oracle_entropy(rho), abs=1e-12)


def test_entropy_near_maximal_mixing_keeps_precision():
    rho = ChiralityDensity(0.5 + 1e-9, 0.5 - 1e-9)
    assert LN2 - entropy(rho) == pytest.approx(2e-18, rel=1e-6)


def test_mixture_upper_bound():
    assert mixture_upper_bound(InterferenceTerm(0.0)) == pytest.approx(S_BRANCH + LN2, abs=1e-15)
    h = binary_entropy(1 - 1 / (2 * SQ2))
    assert h == pytest.approx(0.6496, abs=1e-4)
    assert mixture_upper_bound(InterferenceTerm(MU_PLUS)) == pytest.approx(S_BRANCH + h, abs=1e-15)


@given(q0s)
def test_mixture_bound_holds(q):
    assert entropy(rho2c_analytic(q)) <= mixture_upper_bound(q) + 1e-12


# ---- canonical reading --------------------------------------------------


def test_thermo_degenerate():
    t = thermo_state(ChiralityDensity(0.5, 0.5))
    assert t.degenerate and not t.pure
    assert (t.beta, t.temperature, t.internal_energy, t.partition) == (0.0, math.inf, 0.0, 2.0)


def test_thermo_pure():
    t = thermo_state(ChiralityDensity(1.0, 0.0))
    assert t.pure and t.temperature == 0.0 and t.entropy == 0.0


def test_thermo_first_stage_branch_point():
    t = thermo_state(rho1c(InterferenceTerm(0.1464466, 0.0)))
    assert t.temperature == pytest.approx(-2 / math.log(0.7071068 / 0.2928932), abs=1e-6)
    assert t.temperature == pytest.approx(-2.2692, abs=1e-4)
    assert t.internal_energy == pytest.approx(0.4142136, abs=1e-7)


def test_thermo_quoted_branch_energy():
    lp, lm = quoted_branch_eigenvalues()
    assert lp - lm == pytest.approx(math.sqrt(3 - 3 / SQ2), abs=1e-15)
    assert lp - lm == pytest.approx(0.9373791, abs=1e-7)


@given(q0s, st.floats(0.1, 10.0))
def test_canonical_consistency(q, eps):
    t = thermo_state(rho1c(q), EnergyScale(eps))
    if t.degenerate:
        return
    # Boltzmann weights reproduce the spectrum; the upper level is the likelier one.
    assert math.exp(-t.beta * eps) / t.partition == pytest.approx(t.lambda_plus, rel=1e-9)
    assert math.exp(t.beta * eps) / t.partition == pytest.approx(t.lambda_minus, rel=1e-9)
    assert t.temperature < 0
    assert t.internal_energy == pytest.approx(eps * (t.lambda_plus - t.lambda_minus))


def test_energy_scale_validation():
    with pytest.raises(ValueError):
        EnergyScale(0.0)


# ---- process ledger -----------------------------------------------------


def test_process_null():
    r = process_report(InterferenceTerm(0.0, 0.0))
    assert (r.dS_exact, r.dU, r.heat, r.J2_exact, r.work) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert r.initial.entropy == LN2 and r.final.entropy == LN2
    assert r.dT == 0.0
    assert r.sandwich_ok and r.first_law_ok and r.second_law_ok


def test_process_branch_mu():
    r = process_report(InterferenceTerm(0.1464466, 0.0))
    assert r.dU == pytest.approx(2 * ((SQ2 - 1) * 0.1464466 - SQ2 * 0.1464466), abs=1e-12)
    assert r.dU == pytest.approx(-0.2928932, abs=1e-7)
    assert r.dS_exact == pytest.approx(0.0811, abs=1e-4)
    assert r.J1 == pytest.approx(S_BRANCH + 2 * 0.1464466**2, abs=1e-12)
    assert r.J2_exact < r.dS_exact < r.J1
    assert r.sandwich_ok and r.second_law_ok and r.first_law_ok


def test_process_imaginary():
    r = process_report(InterferenceTerm(0.0, 0.1))
    assert r.dS_approx == pytest.approx(0.02, abs=1e-15)
    assert r.dU == pytest.approx(-0.2, abs=1e-12)
    assert r.J2_exact == 0.0
    assert r.final.degenerate and r.dT == math.inf


def test_process_oracle_entropies():
    q = InterferenceTerm(0.08, -0.11)
    r = process_report(q)
    assert r.dS_exact == pytest.approx(oracle_entropy(rho2c_analytic(q)) - oracle_entropy(rho1c(q)), abs=1e-12)


@given(q0s, st.floats(0.1, 10.0))
def test_process_laws(q, eps):
    r = process_report(q, EnergyScale(eps))
    assert r.dS_exact >= -1e-15
    assert r.dU <= 1e-15
    assert r.heat == r.dU and r.work == 0.0
    assert r.J2_exact >= 0
    assert r.dU == pytest.approx(r.dU_closed_form, abs=1e-12)
    assert r.sandwich_ok
    assert abs(r.dS_exact - r.dS_approx) <= 1.6 * (2 * q.mu**2 + q.nu**2) ** 2 + 1e-15


def test_j2_discrepancy_report():
    reports = [process_report(InterferenceTerm(mu, nu)) for mu in (0.05, 0.1) for nu in (0.0, 0.1)]
    rep = j2_discrepancy(reports)
    assert rep["count"] == 4
    assert 3.9 < rep["min"] <= rep["max"] < 4.2
    assert j2_discrepancy([process_report(InterferenceTerm(0.0, 0.1))]) == {"count": 0}
