#!/usr/bin/env python3
"""Regenerates the synthetic photoassociation inputs in this directory.

The raw line positions behind the published v=4 binding energy are not
available, so these files are built from b = -18.2 MHz with the forward law
delta = b - 2 mu B0 / h - 3 k_B T / h plus Gaussian scatter (fixed seed).

Run:  python3 data/generate_synthetic.py
"""

from pathlib import Path

import numpy as np
import scipy.constants as sc

HERE = Path(__file__).resolve().parent
rng = np.random.default_rng(20020101)

B_V4 = -18.2
MU = 2 * sc.physical_constants["Bohr magneton"][0] * 1e-4 / sc.h * 1e-6  # MHz/G
KT = sc.k * 1e-6 / sc.h * 1e-6  # MHz/uK

# reduced to b_v by the affine law
rows = ["# synthetic v=4 line positions, see generate_synthetic.py",
        "v,delta_mhz,b0_gauss,t_uk,n_cm3"]
for b0, t, n in [(0.8, 6.0, 2e13), (1.0, 8.5, 3e13), (1.2, 11.0, 5e13),
                 (1.5, 14.0, 6e13), (1.8, 18.0, 8e13), (2.1, 22.0, 1e14),
                 (0.9, 27.0, 4e13), (1.3, 30.0, 7e13)]:
    delta = B_V4 - 2 * MU * b0 - 3 * KT * t + rng.normal(0.0, 0.3)
    rows.append(f"4,{delta:.3f},{b0:.2f},{t:.1f},{n:.1e}")
(HERE / "v4_measurements.csv").write_text("\n".join(rows) + "\n")

# temperature of the cloud after the photoassociation pulse: heating peak
rows = ["# synthetic v=4 scan at B0 = 0, T -> 0 (line centre = b_v)",
        "detuning_mhz,temperature_uk"]
for x in np.linspace(-26.0, -10.0, 33):
    y = 4.0 + 6.0 * 1.4**2 / ((x - B_V4) ** 2 + 1.4**2)
    rows.append(f"{x:.2f},{y * (1 + rng.normal(0.0, 0.03)):.3f}")
(HERE / "v4_scan.csv").write_text("\n".join(rows) + "\n")

# thermally corrected line positions against B0, slope -2.02 mu
rows = ["# synthetic corrected line positions, slope -2.02 in units of mu B0/h",
        "b0_gauss,detuning_mhz,sigma_mhz"]
for b0 in np.linspace(0.5, 4.0, 8):
    y = B_V4 - 2.02 * MU * b0 + rng.normal(0.0, 0.15)
    rows.append(f"{b0:.2f},{y:.3f},0.15")
(HERE / "zeeman_points.csv").write_text("\n".join(rows) + "\n")
