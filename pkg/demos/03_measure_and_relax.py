"""Measure the walker, let it relax again, and read off the thermodynamics.

Measuring position and chirality destroys the coherences. Each measured
basis state then relaxes on its own, and the coin density relaxes to a
mixture of two branch densities. The entanglement entropy rises and the
internal energy drops.

Run: python demos/03_measure_and_relax.py
"""
import math

import numpy as np

from qwthermo import (
    BlochAngles,
    Coin,
    analytic_Q0,
    collapse,
    evolve,
    init_localized,
    process_report,
    rho1c,
    rho2c_analytic,
    rho2c_bruteforce,
)

bloch = BlochAngles(0.0)
q0 = analytic_Q0(bloch)

# %% First stationary state.
print("rho1c =\n", np.round(rho1c(q0).matrix.real, 7))

# %% Measure at t1 = 60 and relax every member of the ensemble.
ensemble = collapse(evolve(init_localized(bloch), Coin(), 60))
print(f"\nensemble members: {len(ensemble)}, measured P_L = {ensemble.chirality_weights()[0]:.6f}")
bf = rho2c_bruteforce(ensemble, Coin(), horizon=1500)
print("rho2c brute force =\n", np.round(bf.matrix.real, 5))
print("rho2c closed form =\n", np.round(rho2c_analytic(q0).matrix.real, 5))
print("(the residual tracks how far P_L(t1) still is from its limit)")

# %% Thermodynamic ledger of the process.
r = process_report(q0)
print(f"\nS1 = {r.initial.entropy:.6f}  S2 = {r.final.entropy:.6f}  dS = {r.dS_exact:.6f}")
print(f"T1 = {r.initial.temperature:.4f}  T2 = {r.final.temperature:.4f}  (negative: upper level favoured)")
print(f"dU = heat = {r.heat:.6f}, work = {r.work}")
print(f"bounds: J2 = {r.J2_exact:.6f} < dS = {r.dS_exact:.6f} < J1 = {r.J1:.6f}")

# %% The null case: no interference, nothing changes.
r0 = process_report(analytic_Q0(BlochAngles(math.pi / 4, math.pi)))
print(f"\nQ0 = 0 start: dS = {r0.dS_exact:.1e}, dU = {r0.dU:.1e}, both entropies ln 2 = {r0.final.entropy:.6f}")
