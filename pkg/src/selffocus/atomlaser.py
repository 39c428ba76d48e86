"""rf-outcoupled atom laser falling from a harmonically trapped condensate.

Atoms are transferred by an rf field from the trapped m = -1 sublevel to the
untrapped m = 0 sublevel at the extraction height ``z_r`` and then fall under
gravity.  In the weak-coupling limit the outcoupled wave is an Airy-type
falling wave whose local wavenumber grows as ``sqrt(z + z_r)``; the first
point where the phase accumulated between the extraction point and ``z`` is
``2 pi`` is the coherence length of the beam.

Conventions: ``z`` is measured downwards from the extraction point and the
dimensionless height is ``zeta_r = (z + z_r) / l`` with the gravitational
length ``l = (hbar^2 / 2 M^2 g)^(1/3)``.
"""

from __future__ import annotations

import cmath
import dataclasses
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .constants import DEFAULT_CONSTANTS, PhysicalConstants, Species, lookup_species
from .numerics import DEFAULT_REL_TOL, expand_bracket, find_root

__all__ = [
    "TrapConfig",
    "DerivedTrapQuantities",
    "BeamPoint",
    "CoherenceResult",
    "NegativeExtractionError",
    "OutsideCondensateError",
    "TurningPointError",
    "gravitational_length",
    "chemical_potential",
    "derive_trap_quantities",
    "evaluate_psi0",
    "local_velocity",
    "local_wavenumber",
    "coherence_residual",
    "coherence_length",
    "with_geometry",
    "load_trap_config",
    "TRAP_FILE_KEYS",
]

# roundoff allowance on eta before a negative value is reported
_ETA_NOISE = 64 * sys.float_info.epsilon


class NegativeExtractionError(ValueError):
    """The detuning places the extraction point above the trap centre (eta < 0)."""


class OutsideCondensateError(ValueError):
    pass


class TurningPointError(ValueError):
    pass


@dataclass(frozen=True)
class TrapConfig:
    """Magnetic trap and rf output-coupler settings (SI, angular frequencies).

    ``offset_curvature`` is the K of the offset potential
    ``V_off = mu_B B_0 / 2 + K z^2 / 2``.  ``E_minus1`` only enters the time
    dependent phase of the outcoupled wave and must be given explicitly when
    that phase is evaluated at t != 0.
    """

    species: Species
    atom_number: float
    omega_x: float
    omega_perp: float
    B_rf: float
    B_0: float
    omega_rf: float
    offset_curvature: float = 0.0
    coupling_factor: float = 1.0
    E_minus1: float | None = None

    def __post_init__(self):
        if not self.atom_number >= 1:
            raise ValueError(f"atom_number must be >= 1, got {self.atom_number!r}")
        for name in ("omega_x", "omega_perp", "omega_rf"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("B_rf", "B_0"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)!r}")
        if not math.isfinite(self.coupling_factor):
            raise ValueError("coupling_factor must be finite")


@dataclass(frozen=True)
class DerivedTrapQuantities:
    """Quantities derived from a trap configuration.

    Only ``l`` and ``z_r`` (plus the mass and g they were computed with) are
    needed for velocities and coherence lengths; the trap fields are ``None``
    when the extraction point was given directly.
    """

    species: str
    mass: float
    g: float
    l: float
    z_r: float
    mu: float | None = None
    x0: float | None = None
    y0: float | None = None
    z0: float | None = None
    eta: float | None = None
    Omega_rf: float | None = None
    delta_rf: float | None = None
    U: float | None = None
    sigma: float | None = None
    omega_bar: float | None = None
    hbar: float = DEFAULT_CONSTANTS.hbar

    @classmethod
    def at_extraction_point(cls, species: Species, z_r: float,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS,
                            ) -> "DerivedTrapQuantities":
        """Geometry for a beam leaving at a given ``z_r`` without trap data."""
        if not z_r >= 0:
            raise NegativeExtractionError(f"z_r must be >= 0, got {z_r!r}")
        return cls(species=species.name, mass=species.mass, g=constants.g,
                   l=gravitational_length(species.mass, constants), z_r=float(z_r),
                   hbar=constants.hbar)


@dataclass(frozen=True)
class BeamPoint:
    z: float
    zeta_r: float
    phi_minus1: float
    amplitude: float
    psi0: complex
    density: float
    v: float
    k: float


@dataclass(frozen=True)
class CoherenceResult:
    species: str
    l: float
    z_r: float
    n: int
    coherence_length: float
    residual: float
    iterations: int = 0


def gravitational_length(mass: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """``(hbar^2 / (2 M^2 g))^(1/3)``, about 0.30 um for Rb-87."""
    return (constants.hbar**2 / (2.0 * mass * mass * constants.g)) ** (1.0 / 3.0)


def chemical_potential(cfg: TrapConfig, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Thomas-Fermi chemical potential ``(hbar w/2) (15 a N / sigma)^(2/5)`` (J).

    ``w`` is the geometric-mean trap frequency and ``sigma`` the
    corresponding oscillator length.
    """
    hbar = constants.hbar
    M = cfg.species.mass
    a = cfg.species.scattering_length
    omega_bar = (cfg.omega_x * cfg.omega_perp**2) ** (1.0 / 3.0)
    sigma = math.sqrt(hbar / (M * omega_bar))
    return 0.5 * hbar * omega_bar * (15.0 * a * cfg.atom_number / sigma) ** 0.4


def _eta(v_off, hbar_omega_rf, mu, M, g, z0):
    denom = 2.0 * M * g * z0
    eta = (2.0 * (v_off - hbar_omega_rf) + 4.0 * mu / 7.0) / denom
    # cancellation in v_off - hbar omega_rf sets the rounding floor
    noise = _ETA_NOISE * (2.0 * (abs(v_off) + abs(hbar_omega_rf)) + 4.0 * mu / 7.0) / denom
    if eta < 0 and -eta <= noise:
        eta = 0.0
    return eta


def derive_trap_quantities(cfg: TrapConfig,
                           constants: PhysicalConstants = DEFAULT_CONSTANTS,
                           z_r_override: float | None = None) -> DerivedTrapQuantities:
    """Compute mu, l, Thomas-Fermi radii, Rabi frequency, detuning, eta, z_r.

    With a nonzero offset curvature K the detuning depends on z_r itself;
    it is resolved with a single pass: eta is first computed with K = 0,
    then the detuning and eta are recomputed once with ``K z_r^2 / 2``.

    ``z_r_override`` replaces the derived extraction point (the detuning
    and eta are still reported as derived).

    Raises:
        NegativeExtractionError: eta < 0 beyond roundoff.
    """
    hbar, g, muB = constants.hbar, constants.g, constants.mu_B
    M = cfg.species.mass
    a = cfg.species.scattering_length
    N = cfg.atom_number

    omega_bar = (cfg.omega_x * cfg.omega_perp**2) ** (1.0 / 3.0)
    sigma = math.sqrt(hbar / (M * omega_bar))
    mu = chemical_potential(cfg, constants)
    l = gravitational_length(M, constants)
    x0 = math.sqrt(2.0 * mu / (M * cfg.omega_x**2))
    y0 = math.sqrt(2.0 * mu / (M * cfg.omega_perp**2))
    z0 = y0
    U = 4.0 * math.pi * hbar**2 * a * N / M
    Omega_rf = muB * cfg.B_rf / (2.0 * math.sqrt(2.0) * hbar)

    def v_off(z_r):
        return 0.5 * muB * cfg.B_0 + 0.5 * cfg.offset_curvature * z_r**2

    hbar_omega_rf = hbar * cfg.omega_rf
    delta_rf = (v_off(0.0) - hbar_omega_rf) / hbar
    eta = _eta(v_off(0.0), hbar_omega_rf, mu, M, g, z0)
    if cfg.offset_curvature != 0.0:
        z_r_first = eta * z0 / 2.0
        delta_rf = (v_off(z_r_first) - hbar_omega_rf) / hbar
        eta = _eta(v_off(z_r_first), hbar_omega_rf, mu, M, g, z0)

    if z_r_override is not None:
        if not z_r_override >= 0:
            raise NegativeExtractionError(f"z_r override must be >= 0, got {z_r_override!r}")
        z_r = float(z_r_override)
    else:
        if eta < 0:
            raise NegativeExtractionError(
                f"eta = {eta:.6g} < 0: rf detuning puts the extraction point at "
                f"z_r = {eta * z0 / 2:.6g} m, above the trap centre"
            )
        z_r = eta * z0 / 2.0

    if l > 0.1 * min(x0, y0, z0):
        warnings.warn(
            f"gravitational length {l:.3g} m is not small against the condensate "
            f"radii (min {min(x0, y0, z0):.3g} m)",
            RuntimeWarning,
            stacklevel=2,
        )

    return DerivedTrapQuantities(
        species=cfg.species.name, mass=M, g=g, l=l, z_r=z_r,
        mu=mu, x0=x0, y0=y0, z0=z0, eta=eta, Omega_rf=Omega_rf, delta_rf=delta_rf,
        U=U, sigma=sigma, omega_bar=omega_bar, hbar=hbar,
    )


def _height(dq: DerivedTrapQuantities, z: float) -> float:
    s = z + dq.z_r
    if s < 0:
        raise ValueError(f"z + z_r = {s!r} < 0: point lies above the classical turning point")
    return s


def local_wavenumber(dq: DerivedTrapQuantities, z: float) -> float:
    """``sqrt(z + z_r) / l^(3/2)`` (rad/m)."""
    return math.sqrt(_height(dq, z)) / dq.l**1.5


def local_velocity(dq: DerivedTrapQuantities, z: float) -> float:
    """Local beam velocity ``hbar k / M`` (m/s); equals ``sqrt(2 g (z + z_r))``."""
    return dq.hbar * local_wavenumber(dq, z) / dq.mass


def evaluate_psi0(dq: DerivedTrapQuantities, cfg: TrapConfig, x: float, y: float, z: float,
                  t: float = 0.0) -> BeamPoint:
    """Outcoupled wave at (x, y, z, t) below the extraction point.

    Transverse dependence enters only through the condensate amplitude at the
    extraction height; the longitudinal envelope is ``zeta_r^(-1/4)`` with
    phase ``(2/3) zeta_r^(3/2) - E_-1 t / hbar``.
    """
    if dq.mu is None:
        raise ValueError("evaluate_psi0 needs trap-derived quantities (mu, radii, Omega_rf)")
    zeta = (z + dq.z_r) / dq.l
    if not zeta > 0:
        raise TurningPointError(f"zeta_r = {zeta!r} <= 0; the turning region is not modelled")
    inside = 1.0 - (x / dq.x0) ** 2 - (y / dq.y0) ** 2 - (dq.z_r / dq.z0) ** 2
    if inside < 0:
        raise OutsideCondensateError(
            f"(x, y, z_r) = ({x!r}, {y!r}, {dq.z_r!r}) lies outside the Thomas-Fermi ellipsoid"
        )
    if t != 0.0 and cfg.E_minus1 is None:
        raise ValueError("E_minus1 must be set to evaluate the phase at t != 0")
    phi = math.sqrt(dq.mu / dq.U) * math.sqrt(inside)
    amp = (-math.sqrt(math.pi) * dq.hbar * dq.Omega_rf / (dq.mass * dq.g * dq.l)
           * phi * cfg.coupling_factor)
    energy_phase = cfg.E_minus1 * t / dq.hbar if t != 0.0 else 0.0
    psi = amp * cmath.exp(1j * (2.0 / 3.0 * zeta**1.5 - energy_phase)) / zeta**0.25
    k = local_wavenumber(dq, z)
    return BeamPoint(z=z, zeta_r=zeta, phi_minus1=phi, amplitude=amp, psi0=psi,
                     density=abs(psi) ** 2, v=dq.hbar * k / dq.mass, k=k)


def coherence_residual(dq: DerivedTrapQuantities, z: float, n: int = 1) -> float:
    """``(sqrt(z + z_r) - sqrt(2 z_r)) z - 2 n pi l^(3/2)`` in m^(3/2)."""
    return ((math.sqrt(z + dq.z_r) - math.sqrt(2.0 * dq.z_r)) * z
            - 2.0 * n * math.pi * dq.l**1.5)


def coherence_length(dq: DerivedTrapQuantities, n: int = 1,
                     rel_tol: float = DEFAULT_REL_TOL) -> CoherenceResult:
    """First (n = 1) or n-th focus distance of the falling beam.

    The residual is negative on ``[0, z_r]`` and increasing beyond, so there
    is exactly one root; it is bracketed by doubling from ``l``.

    >>> from selffocus.constants import lookup_species
    >>> dq = DerivedTrapQuantities.at_extraction_point(lookup_species("Rb87"), 0.0)
    >>> round(coherence_length(dq).coherence_length * 1e6, 4)
    1.0243
    """
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"order n must be a positive integer, got {n!r}")
    if not dq.z_r >= 0:
        raise NegativeExtractionError(f"z_r must be >= 0, got {dq.z_r!r}")

    def f(z):
        return coherence_residual(dq, z, n)

    res = find_root(f, expand_bracket(f, dq.l), rel_tol)
    return CoherenceResult(species=dq.species, l=dq.l, z_r=dq.z_r, n=n,
                           coherence_length=res.root, residual=res.residual,
                           iterations=res.iterations)


def with_geometry(dq: DerivedTrapQuantities, *, l: float | None = None,
                  z_r: float | None = None) -> DerivedTrapQuantities:
    """Copy of ``dq`` with a replaced gravitational length and/or extraction point."""
    changes = {}
    if l is not None:
        changes["l"] = l
    if z_r is not None:
        changes["z_r"] = z_r
    return dataclasses.replace(dq, **changes)


TRAP_FILE_KEYS = (
    "species", "atom_number", "omega_x_hz", "omega_perp_hz", "B_rf_T", "B_0_T",
    "omega_rf_hz", "K_J_per_m2", "F", "E_minus1_J", "z_r_override_m",
)
_REQUIRED_TRAP_KEYS = TRAP_FILE_KEYS[:7]


def load_trap_config(path: str | Path, registry: Mapping[str, Species] | None = None,
                     species: str | None = None) -> tuple[TrapConfig, float | None]:
    """Read a JSON trap file; returns the config and the optional z_r override.

    Frequencies in the file are ordinary frequencies (Hz) and are converted
    to angular frequencies.  ``species`` overrides the file's species label.
    """
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: trap file must hold a JSON object")
    unknown = sorted(set(raw) - set(TRAP_FILE_KEYS))
    if unknown:
        raise ValueError(f"{path}: unknown keys {unknown}; allowed: {list(TRAP_FILE_KEYS)}")
    if species is not None:
        raw = {**raw, "species": species}
    missing = [k for k in _REQUIRED_TRAP_KEYS if k not in raw]
    if missing:
        raise ValueError(f"{path}: missing keys {missing}")
    two_pi = 2.0 * math.pi
    cfg = TrapConfig(
        species=lookup_species(raw["species"], registry),
        atom_number=float(raw["atom_number"]),
        omega_x=two_pi * float(raw["omega_x_hz"]),
        omega_perp=two_pi * float(raw["omega_perp_hz"]),
        B_rf=float(raw["B_rf_T"]),
        B_0=float(raw["B_0_T"]),
        omega_rf=two_pi * float(raw["omega_rf_hz"]),
        offset_curvature=float(raw.get("K_J_per_m2", 0.0)),
        coupling_factor=float(raw.get("F", 1.0)),
        E_minus1=None if raw.get("E_minus1_J") is None else float(raw["E_minus1_J"]),
    )
    z_r = raw.get("z_r_override_m")
    return cfg, (None if z_r is None else float(z_r))
