#!/usr/bin/env python3
"""
Singly and doubly dressed resonance-fluorescence lineshapes at T = 0.

Without phonons and without the weak field the spectrum is a Mollow-type
triplet: a central line of half width Gamma/2 and sidebands at +/- 2 Omega
of half width 3 Gamma/4.  The weak field (2G = 2 pi x 2 rad/ns, M = 40)
leaves the central line alone and spreads each sideband over a fan of
sub-lines weighted by |phi_M(lambda / sqrt 2)|^2.

Run:  python demos/02_lineshapes.py [output-dir]
"""

import sys
from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from dressed_rf import REFERENCE_BATH, REFERENCE_DRIVE, DriveMode, ScenarioConfig, peak_analysis, thermal_spectrum  # noqa: E402

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-output")
out.mkdir(parents=True, exist_ok=True)
gamma, omega = REFERENCE_DRIVE.gamma_rad, REFERENCE_DRIVE.omega_rabi_half
free = replace(REFERENCE_BATH, alpha=0.0)

spectra = {}
for mode in DriveMode:
    cfg = ScenarioConfig(bath=free, drive_mode=mode, normalize=False)
    spectra[mode] = thermal_spectrum(cfg, 0.0)

print("peaks without phonons (rad/ns):")
for mode, spec in spectra.items():
    report = peak_analysis(spec)
    cells = ", ".join(f"{p.center:+8.3f} (hwhm {p.hwhm:6.3f}, height {p.height:.4f})" for p in report.peaks)
    print(f"  {mode.value:6s}: {cells}")

single = peak_analysis(spectra[DriveMode.SINGLE])
print(f"\nexpected hwhm: central {gamma / 2:.4f}, sidebands {0.75 * gamma:.4f} at +/- {2 * omega:.4f}")
print(f"central / sideband height ratio {single[1].height / single[2].height:.3f} "
      "(6 for this lineshape; the canonical Mollow value is 3)")

double = peak_analysis(spectra[DriveMode.DOUBLE])
print(f"central line, double vs single drive: height {double[1].height / single[1].height - 1:+.3%}, "
      f"hwhm {double[1].hwhm / single[1].hwhm - 1:+.3%}")
print(f"sideband area, double vs single: {double[2].area / single[2].area:.4f}")

fig, ax = plt.subplots(figsize=(7, 3.5))
for mode, style in ((DriveMode.SINGLE, "--"), (DriveMode.DOUBLE, "-")):
    s = spectra[mode]
    ax.plot(s.detunings, s.values / np.max(s.values), style, lw=1, label=f"{mode.value} drive")
ax.set_xlabel("detuning (rad/ns)")
ax.set_ylabel("normalised intensity")
ax.set_yscale("log")
ax.set_ylim(1e-3, 1.2)
ax.legend(frameon=False)
fig.tight_layout()
path = out / "lineshapes.svg"
fig.savefig(path, metadata={"Date": None})
print(f"\nwrote {path}")
