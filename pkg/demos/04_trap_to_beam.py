"""From trap settings to the outcoupled beam.

A Rb-87 condensate in a cigar-shaped magnetic trap is outcoupled by an rf
field tuned slightly below the bottom-of-trap resonance.  The detuning fixes
the extraction height z_r, which in turn sets the coherence length.  The
falling wave has an envelope decreasing as zeta^(-1/4) and a local
velocity that matches free fall from z_r.
"""

import math

import numpy as np

from selffocus import (
    TrapConfig,
    coherence_length,
    derive_trap_quantities,
    evaluate_psi0,
    local_velocity,
    lookup_species,
)
from selffocus.constants import DEFAULT_CONSTANTS as C

rb = lookup_species("Rb87")
B0 = 1e-4                                   # 1 G bias field
f_res = 0.5 * C.mu_B * B0 / C.hbar / (2 * math.pi)

for offset_hz in (0.0, -20.0, -50.0, -100.0):
    cfg = TrapConfig(
        species=rb,
        atom_number=1e6,
        omega_x=2 * math.pi * 20.0,
        omega_perp=2 * math.pi * 150.0,
        B_rf=1e-7,
        B_0=B0,
        omega_rf=2 * math.pi * (f_res + offset_hz),
    )
    dq = derive_trap_quantities(cfg)
    res = coherence_length(dq)
    print(f"rf offset {offset_hz:+7.1f} Hz: mu/h = {dq.mu / C.hbar / 2 / math.pi:8.1f} Hz, "
          f"eta = {dq.eta:.4f}, z_r = {dq.z_r * 1e6:.3f} um, "
          f"coherence length = {res.coherence_length * 1e6:.4f} um")

# beam profile below the extraction point for the last configuration
print("\n  z (um)   zeta_r   |psi0|^2 sqrt(zeta)   v (mm/s)   sqrt(2 g (z+z_r)) (mm/s)")
for z in np.linspace(0.5e-6, 20e-6, 5):
    p = evaluate_psi0(dq, cfg, 0.0, 0.0, z)
    print(f"{z * 1e6:8.2f} {p.zeta_r:8.3f} {p.density * math.sqrt(p.zeta_r):20.6g}"
          f" {local_velocity(dq, z) * 1e3:10.4f} {math.sqrt(2 * C.g * (z + dq.z_r)) * 1e3:14.4f}")
