"""Coherence length of an atom laser for Li-7, Na-23 and Rb-87.

A beam outcoupled at height z_r falls with local wavenumber
k(z) = sqrt(z + z_r) / l^(3/2).  Asking the wave at z to be back in phase
with the wave at the extraction point gives

    (sqrt(z + z_r) - sqrt(2 z_r)) z = 2 n pi l^(3/2)

whose first root is the coherence length.  With z_r = 0 the root is
(2 pi n)^(2/3) l exactly.
"""

import numpy as np

from selffocus import DerivedTrapQuantities, coherence_length, lookup_species
from selffocus.atomlaser import with_geometry

published_um = {"Na23": 2.4622, "Rb87": 1.0299, "Li7": 5.4461}

print("species   l (um)    L (um)   published   diff")
for name, ref in published_um.items():
    dq = DerivedTrapQuantities.at_extraction_point(lookup_species(name), 0.0)
    L = coherence_length(dq).coherence_length * 1e6
    print(f"{name:7s} {dq.l * 1e6:8.4f} {L:9.4f} {ref:10.4f}   {100 * (L - ref) / ref:+.2f}%")

# the coherence length grows with the extraction height
na = DerivedTrapQuantities.at_extraction_point(lookup_species("Na23"), 0.0)
print("\nNa23, coherence length vs extraction height")
for zr_over_l in np.linspace(0, 3, 7):
    L = coherence_length(with_geometry(na, z_r=zr_over_l * na.l)).coherence_length
    print(f"  z_r = {zr_over_l:4.1f} l   L = {L * 1e6:.4f} um")

# higher re-phasing orders follow n^(2/3) at z_r = 0
rb = DerivedTrapQuantities.at_extraction_point(lookup_species("Rb87"), 0.0)
L1 = coherence_length(rb).coherence_length
for n in (1, 2, 8, 27):
    print(f"Rb87 n={n:2d}: L_n / L_1 = {coherence_length(rb, n).coherence_length / L1:.6f}"
          f"  (n^(2/3) = {n ** (2 / 3):.6f})")
