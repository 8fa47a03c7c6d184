"""Produce the data behind the two standard plots and summarise them.

Writes figure1.csv and figure2.csv into the current directory.

Run: python demos/04_figure_data.py
"""
import numpy as np

from qwthermo.sweep import active, figure1, figure2, write_records
from qwthermo.thermo import j2_discrepancy, process_report
from qwthermo.asymptotics import InterferenceTerm

# %% Entropy change against mu^2 at phi = 0.
f1 = figure1(200, 0.04)
write_records(f1, "figure1.csv", "csv")
dev = np.array([abs(r["dS_exact"] - r["dS_approx"]) for r in f1])
mu2 = np.array([r["mu2"] for r in f1])
print(f"figure1: {len(f1)} rows; quadratic form within 2e-3 up to mu^2 = {mu2[dev <= 2e-3].max():.4f}")
print(f"         worst deviation {dev.max():.4f} at mu^2 = {mu2[dev.argmax()]:.3f}")

# %% Entropy change and bounds over the reachable disk.
f2 = figure2(100)
write_records(f2, "figure2.csv", "csv")
live = active(f2)
print(f"\nfigure2: {len(f2)} rows, {len(live)} inside the disk")
print("J2 < dS < J1 everywhere:", all(r["J2_exact"] < r["dS_exact"] < r["J1"] for r in live))

# %% The small-Q0 lower bound formula undershoots by about 4.
reports = [process_report(InterferenceTerm(r["mu"], r["nu"])) for r in live]
print("J2_exact / J2_paper:", {k: round(v, 4) for k, v in j2_discrepancy(reports).items()})

# %% Plotting, if matplotlib is around:
#   import csv, matplotlib.pyplot as plt
#   rows = list(csv.DictReader(open("figure1.csv")))
#   plt.plot([float(r["mu2"]) for r in rows], [float(r["dS_exact"]) for r in rows])
