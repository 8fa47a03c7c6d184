"""A Hadamard walker spreads ballistically, not diffusively.

Run: python demos/01_walk_spreading.py
"""
import math

import numpy as np

from qwthermo import BlochAngles, Coin, evolve, init_localized, position_distribution

# %% Start in |0,+> and take 100 steps.
state = evolve(init_localized(BlochAngles(0.0)), Coin(), 100)
p = position_distribution(state)
k = state.sites
print(f"norm after 100 steps: {p.sum():.15f}")

# %% Odd sites are empty: the walker alternates sublattices every step.
print("mass on odd sites:", p[k % 2 != 0].sum())

# %% The spread grows like t, with peaks near t / sqrt(2).
sigma = math.sqrt(np.sum(p * k**2) - np.sum(p * k) ** 2)
print(f"standard deviation {sigma:.2f} vs classical sqrt(t) = 10")
print("largest peaks at sites", sorted(k[np.argsort(p)[-2:]].tolist()), "; t/sqrt2 =", round(100 / math.sqrt(2), 1))

# %% Coarse text histogram of the distribution.
bins = np.linspace(-100, 100, 21)
hist, _ = np.histogram(k, bins=bins, weights=p)
for lo, h in zip(bins[:-1], hist):
    print(f"{int(lo):5d} {'#' * int(200 * h)}")
