"""Optical coherence length from the laser bandwidth.

Requiring two frequency components of a light beam to come back in phase
along the axis gives the textbook coherence length c / bandwidth; higher
orders n sit at integer multiples.
"""

from selffocus import coherence_length_optical

# a few representative sources: narrow-line lasers down to a broadband LED
sources = {
    "stabilised HeNe (1 MHz)": 1e6,
    "diode laser (5 MHz)": 5e6,
    "multimode HeNe (1.5 GHz)": 1.5e9,
    "LED (~10 THz)": 1e13,
}

for label, bandwidth in sources.items():
    L = coherence_length_optical(bandwidth)
    print(f"{label:28s} coherence length {L:12.6g} m")

# second and third re-phasing points of the 5 MHz source
for n in (1, 2, 3):
    print(f"n={n}: {coherence_length_optical(5e6, n):.4f} m")
