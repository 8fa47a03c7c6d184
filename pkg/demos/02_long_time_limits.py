"""Long-time chirality limits: simulation against the closed form.

The tail average of P_L and of Q = sum a conj(b) settles to values fixed
by the initial coin state alone.

Run: python demos/02_long_time_limits.py
"""
import math

from qwthermo import BlochAngles, Coin, analytic_Q0, estimate_asymptotics, stationary_chirality

# %% A few Bloch points, including the two where Q0 vanishes.
points = [(0.0, 0.0), (math.pi / 2, math.pi / 2), (3 * math.pi / 4, 0.0), (math.pi / 4, math.pi), (2.0, 4.0)]
print(f"{'gamma':>7} {'phi':>7} | {'sim P_L':>9} {'exact':>9} | {'sim Q0':>22} {'exact Q0':>22}")
for g, p in points:
    b = BlochAngles(g, p)
    est = estimate_asymptotics(b, Coin(), horizon=2000)
    q = analytic_Q0(b)
    pl, _ = stationary_chirality(q)
    print(f"{g:7.4f} {p:7.4f} | {est.pi_L:9.6f} {pl:9.6f} | "
          f"{est.q0.value.real:+.6f}{est.q0.value.imag:+.6f}i {q.mu:+.6f}{q.nu:+.6f}i")

# %% Without a closed form (non-Hadamard coin) the simulation still works.
est = estimate_asymptotics(BlochAngles(0.0), Coin(0.3), horizon=2000)
print(f"\ntheta=0.3: P_L -> {est.pi_L:.6f}, Q -> {est.q0.value:.6f} (tail std {est.tail_std:.1e})")
