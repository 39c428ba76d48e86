"""Longitudinal beam built from a discrete momentum spectrum.

A beam is a finite superposition of plane waves with real amplitudes along
the propagation axis z.  Its probability current splits into a
z-independent *incoherent* part, coming from each component on its own, and
a *coherent* part made of the pairwise cross terms.  The coherent part peaks
where every pair is back in phase; those peaks are the longitudinal foci.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .numerics import central_difference

__all__ = [
    "MATTER",
    "LIGHT",
    "MomentumSpectrum",
    "CurrentProfile",
    "FocusSet",
    "DegeneratePairError",
    "SpectrumParseError",
    "synthesize_wavefunction",
    "current_density_fd",
    "current_density_spectral",
    "focus_positions",
    "coherence_length_matter",
    "coherence_length_optical",
    "locate_foci_numeric",
    "load_spectrum",
    "parse_spectrum",
    "write_profile_csv",
]

MATTER = "matter"
LIGHT = "vacuum-light"
_DISPERSIONS = (MATTER, LIGHT)


class DegeneratePairError(ValueError):
    """Two equal wavenumbers have no finite focus."""


class SpectrumParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True, eq=False)
class MomentumSpectrum:
    """Discrete set of plane-wave components.

    Attributes:
        k: wavenumbers (rad/m), all distinct.
        amplitude: real amplitudes, one per wavenumber.
        particle_mass: mass entering the current prefactor hbar/m (kg).
        dispersion: ``"matter"`` (omega = hbar k^2 / 2m) or
            ``"vacuum-light"`` (omega = c k).
    """

    k: np.ndarray
    amplitude: np.ndarray
    particle_mass: float
    dispersion: str = MATTER

    def __post_init__(self):
        k = np.asarray(self.k)
        amp = np.asarray(self.amplitude)
        if np.iscomplexobj(k):
            raise TypeError("wavenumbers must be real")
        if np.iscomplexobj(amp):
            raise TypeError("amplitudes must be real; complex spectral phases are not supported")
        k = np.atleast_1d(k.astype(float))
        amp = np.atleast_1d(amp.astype(float))
        if k.ndim != 1 or k.shape != amp.shape:
            raise ValueError("k and amplitude must be 1-d arrays of equal length")
        if k.size == 0:
            raise ValueError("spectrum needs at least one component")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(amp))):
            raise ValueError("spectrum contains non-finite values")
        if np.unique(k).size != k.size:
            raise ValueError("wavenumbers must be distinct")
        if not self.particle_mass > 0:
            raise ValueError(f"particle mass must be positive, got {self.particle_mass!r}")
        if self.dispersion not in _DISPERSIONS:
            raise ValueError(f"dispersion must be one of {_DISPERSIONS}, got {self.dispersion!r}")
        k.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "amplitude", amp)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], particle_mass: float,
                   dispersion: str = MATTER) -> "MomentumSpectrum":
        pairs = list(pairs)
        k = [p[0] for p in pairs]
        a = [p[1] for p in pairs]
        return cls(np.array(k, dtype=float), np.array(a), particle_mass, dispersion)

    def __len__(self):
        return self.k.size

    def omega(self, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> np.ndarray:
        if self.dispersion == MATTER:
            return constants.hbar * self.k**2 / (2.0 * self.particle_mass)
        return constants.c * self.k

    def scaled(self, factor: float) -> "MomentumSpectrum":
        return MomentumSpectrum(self.k, factor * self.amplitude, self.particle_mass,
                                self.dispersion)


@dataclass(frozen=True, eq=False)
class CurrentProfile:
    """Probability current sampled on a z grid, split into its two parts."""

    z_grid: np.ndarray
    incoherent: np.ndarray
    coherent: np.ndarray
    total: np.ndarray


@dataclass(frozen=True)
class FocusSet:
    pair: tuple[float, float]
    orders: tuple[int, ...]
    positions: tuple[float, ...]


def synthesize_wavefunction(spectrum: MomentumSpectrum, z, t: float = 0.0,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Sum of ``A exp(i(k z - omega t))`` over the components.

    ``z`` may be a scalar or an array; the return value has the same shape.
    """
    z_arr = np.asarray(z, dtype=float)
    omega = spectrum.omega(constants)
    psi = np.zeros(z_arr.shape, dtype=complex)
    for k, a, w in zip(spectrum.k, spectrum.amplitude, omega):
        psi = psi + a * np.exp(1j * (k * z_arr - w * t))
    if psi.ndim == 0:
        return complex(psi)
    return psi


def current_density_fd(spectrum: MomentumSpectrum, z: float, t: float = 0.0,
                       h: float | None = None,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Current ``(hbar/2mi)(psi* psi' - psi psi*')`` with a numerical gradient.

    The default step is ``1e-4 * 2 pi / max|k|``.
    """
    if h is None:
        kmax = float(np.max(np.abs(spectrum.k)))
        h = 1e-4 * 2.0 * math.pi / kmax if kmax > 0 else 1e-6
    psi = synthesize_wavefunction(spectrum, z, t, constants)
    dpsi = central_difference(lambda s: synthesize_wavefunction(spectrum, s, t, constants), z, h)
    # (psi* dpsi - psi dpsi*) / 2i == Im(psi* dpsi)
    return constants.hbar / spectrum.particle_mass * (psi.conjugate() * dpsi).imag


def current_density_spectral(spectrum: MomentumSpectrum, z_grid: Sequence[float],
                             constants: PhysicalConstants = DEFAULT_CONSTANTS) -> CurrentProfile:
    """Closed-form current at t = 0 from the spectral double sum.

    incoherent = (hbar/m) sum_k k A_k^2
    coherent(z) = (hbar/m) sum_{k'} sum_{k != k'} A_k' A_k k cos((k' - k) z)

    Each grid point is accumulated over ordered pairs in a fixed order, so
    evaluating any sub-grid gives bitwise-identical values.
    """
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("z grid must be a non-empty 1-d sequence")
    if np.any(np.diff(z) < 0):
        raise ValueError("z grid must be sorted")
    pref = constants.hbar / spectrum.particle_mass
    k, a = spectrum.k, spectrum.amplitude
    incoherent = np.full(z.shape, pref * float(np.sum(k * a * a)))
    coherent = np.zeros(z.shape)
    for j in range(k.size):
        for i in range(k.size):
            if i == j:
                continue
            coherent += (a[j] * a[i] * k[i]) * np.cos((k[j] - k[i]) * z)
    coherent *= pref
    return CurrentProfile(z, incoherent, coherent, incoherent + coherent)


def focus_positions(k: float, k_prime: float, n_max: int = 1) -> FocusSet:
    """Foci of a component pair: ``z_n = 2 pi n / |k' - k|`` for n = 1..n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    dk = abs(k_prime - k)
    if dk == 0:
        raise DegeneratePairError(
            "equal wavenumbers: zero momentum spread, no focus can be localized on the axis"
        )
    orders = tuple(range(1, n_max + 1))
    return FocusSet((k, k_prime), orders, tuple(2.0 * math.pi * n / dk for n in orders))


def _require_positive(**values):
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v!r}")


def coherence_length_matter(mass: float, delta_v: float, n: int = 1,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Focus distance ``2 n pi hbar / (m dv)`` for a velocity spread ``dv``."""
    _require_positive(mass=mass, delta_v=delta_v, n=n)
    return 2.0 * n * math.pi * constants.hbar / (mass * delta_v)


def coherence_length_optical(delta_nu: float, n: int = 1,
                             constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Optical coherence length ``n c / bandwidth`` (m)."""
    _require_positive(delta_nu=delta_nu, n=n)
    return n * constants.c / delta_nu


def locate_foci_numeric(profile: CurrentProfile) -> list[float]:
    """Grid positions of strict local maxima of the coherent current."""
    c = profile.coherent
    if c.size < 3:
        return []
    idx = np.nonzero((c[1:-1] > c[:-2]) & (c[1:-1] > c[2:]))[0] + 1
    return [float(profile.z_grid[i]) for i in idx]


def parse_spectrum(lines: Iterable[str], particle_mass: float,
                   dispersion: str = MATTER) -> MomentumSpectrum:
    """Parse ``k_rad_per_m amplitude`` lines; ``#`` starts a comment."""
    pairs = []
    seen = {}
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        cols = text.split()
        if len(cols) != 2:
            raise SpectrumParseError(f"expected 2 columns, found {len(cols)}", lineno)
        try:
            k, a = float(cols[0]), float(cols[1])
        except ValueError:
            raise SpectrumParseError(f"not a number in {text!r}", lineno) from None
        if not (math.isfinite(k) and math.isfinite(a)):
            raise SpectrumParseError("non-finite value", lineno)
        if k in seen:
            raise SpectrumParseError(f"wavenumber {k!r} already given on line {seen[k]}", lineno)
        seen[k] = lineno
        pairs.append((k, a))
    if not pairs:
        raise SpectrumParseError("spectrum file has no components")
    return MomentumSpectrum.from_pairs(pairs, particle_mass, dispersion)


def load_spectrum(path: str | Path, particle_mass: float,
                  dispersion: str = MATTER) -> MomentumSpectrum:
    with open(path) as fh:
        return parse_spectrum(fh, particle_mass, dispersion)


def write_profile_csv(profile: CurrentProfile, fh) -> None:
    """Write ``z_m,incoherent,coherent,total`` rows at round-trip precision."""
    fh.write("z_m,incoherent,coherent,total\n")
    for row in zip(profile.z_grid, profile.incoherent, profile.coherent, profile.total):
        fh.write(",".join(repr(float(v)) for v in row) + "\n")
