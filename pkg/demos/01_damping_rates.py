#!/usr/bin/env python3
"""
Phonon damping rates of the dressed quantum dot versus temperature.

Three models for the extra dephasing rate are compared at the reference
parameter point (2 Omega = 2 pi x 5 rad/ns):

  weak       Born-Markov rate at the bare Rabi frequency
  onephonon  the same closed form at the renormalised Omega_r = Omega B
  polaron    full polaron rate Gamma_y + Gamma_z, multiphonon included

Run:  python demos/01_damping_rates.py
"""

import time

import numpy as np

from dressed_rf import REFERENCE_BATH, REFERENCE_DRIVE, ScenarioConfig, rate_table
from dressed_rf.storage import TableCache, default_cache_dir

temps = (0.0, 4.2, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0, 60.0)
cache = TableCache(default_cache_dir())

start = time.perf_counter()
rows = rate_table(ScenarioConfig(temperatures=temps), cache)
print(f"rate table for {len(temps)} temperatures in {time.perf_counter() - start:.1f} s "
      f"(cache: {cache.directory})\n")

print(f"{'T [K]':>6} {'B':>8} {'Omega_r':>8} {'Gamma_W':>9} {'Gamma_1ph':>9} {'Gamma_p':>9} {'Gamma_y':>9} {'Gamma_z':>9}")
for r in rows:
    print(f"{r['temperature_k']:6.1f} {r['b_factor']:8.5f} {r['omega_r']:8.4f} {r['gamma_w']:9.5f} "
          f"{r['gamma_1ph']:9.5f} {r['gamma_p']:9.5f} {r['gamma_y']:9.5f} {r['gamma_z']:9.5f}")

# low temperature: all three agree to within a few percent
low = rows[1]
print(f"\nat {low['temperature_k']} K the polaron rate is {low['gamma_p'] / low['gamma_w']:.3f} x the weak-coupling one")

# high temperature: the weak-coupling rate is linear in T (coth -> 2 k_B T / hbar Omega)
hot = [r for r in rows if r["temperature_k"] >= 40]
t = np.array([r["temperature_k"] for r in hot])
gw = np.array([r["gamma_w"] for r in hot])
c = (gw @ t) / (t @ t)
print(f"Gamma_W ~ {c:.5f} T above 40 K, worst residual {np.max(np.abs(gw - c * t) / gw):.2%}")

# ... while Omega_r = Omega B shrinks fast enough that Gamma_1ph turns over
g1 = [r["gamma_1ph"] for r in rows]
print(f"Gamma_1ph peaks at {temps[int(np.argmax(g1))]:g} K and falls to {g1[-1]:.4f} at 60 K")
r60 = rows[-1]
print(f"at 60 K: Gamma_p {r60['gamma_p']:.4f}, Gamma_1ph {r60['gamma_1ph']:.4f}, Gamma_W {r60['gamma_w']:.4f}")
print(f"(radiative Gamma = {REFERENCE_DRIVE.gamma_rad} rad/ns, alpha = {REFERENCE_BATH.alpha:g} ns^2)")
