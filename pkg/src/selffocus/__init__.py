"""Self-focusing and coherence lengths of photon and atom-laser beams."""

from .atomlaser import (
    DerivedTrapQuantities,
    TrapConfig,
    chemical_potential,
    coherence_length,
    derive_trap_quantities,
    evaluate_psi0,
    gravitational_length,
    local_velocity,
    local_wavenumber,
)
from .beamsim import (
    MomentumSpectrum,
    coherence_length_matter,
    coherence_length_optical,
    current_density_fd,
    current_density_spectral,
    focus_positions,
    locate_foci_numeric,
    synthesize_wavefunction,
)
from .constants import DEFAULT_CONSTANTS, PhysicalConstants, Species, lookup_species
from .numerics import central_difference, expand_bracket, find_root

__version__ = "0.1.0"
