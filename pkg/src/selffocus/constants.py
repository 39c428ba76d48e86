"""Physical constants and the alkali-species registry.

Everything is SI. Constants default to CODATA values as shipped with
:mod:`scipy.constants`; the gravitational acceleration is overridable because
the atom-laser results are sensitive to it at the percent level.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from scipy import constants as _codata

__all__ = [
    "PhysicalConstants",
    "Species",
    "UnknownSpeciesError",
    "DEFAULT_CONSTANTS",
    "load_registry",
    "default_registry",
    "lookup_species",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Bundle of the constants used by every SI computation.

    Attributes:
        hbar: reduced Planck constant (J s).
        g: gravitational acceleration (m/s^2).
        mu_B: Bohr magneton (J/T).
        c: speed of light in vacuum (m/s).
        amu: atomic mass unit (kg).
    """

    hbar: float = _codata.hbar
    g: float = 9.80665
    mu_B: float = _codata.physical_constants["Bohr magneton"][0]
    c: float = _codata.c
    amu: float = _codata.physical_constants["atomic mass constant"][0]

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not value > 0:
                raise ValueError(f"{field.name} must be strictly positive, got {value!r}")

    def with_g(self, g: float) -> "PhysicalConstants":
        return dataclasses.replace(self, g=g)


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class Species:
    """An atomic species: label, mass (kg) and s-wave scattering length (m)."""

    name: str
    mass: float
    scattering_length: float
    source: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"{self.name}: mass must be positive, got {self.mass!r}")
        if not self.scattering_length > 0:
            raise ValueError(
                f"{self.name}: scattering length must be positive, got {self.scattering_length!r}"
            )

    @property
    def mass_amu(self) -> float:
        return self.mass / DEFAULT_CONSTANTS.amu


class UnknownSpeciesError(KeyError):
    def __init__(self, name: str, known):
        self.name = name
        self.known = sorted(known)
        super().__init__(name)

    def __str__(self):
        listing = ", ".join(self.known) if self.known else "(registry is empty)"
        return f"unknown species {self.name!r}; known species: {listing}"


def _parse_registry(raw: Mapping, origin: str) -> dict[str, Species]:
    if not isinstance(raw, Mapping):
        raise ValueError(f"{origin}: species registry must be a mapping of label -> record")
    registry = {}
    for name, record in raw.items():
        try:
            mass_amu = float(record["mass_amu"])
            a_nm = float(record["scattering_length_nm"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{origin}: bad record for species {name!r}: {exc}") from None
        registry[name] = Species(
            name=name,
            mass=mass_amu * DEFAULT_CONSTANTS.amu,
            scattering_length=a_nm * 1e-9,
            source=str(record.get("source", "")),
        )
    return registry


def load_registry(path: str | Path) -> dict[str, Species]:
    """Read a species registry from a JSON file.

    The file maps labels to ``{"mass_amu", "scattering_length_nm", "source"}``.
    """
    path = Path(path)
    with path.open() as fh:
        raw = json.load(fh)
    return _parse_registry(raw, str(path))


_DEFAULT_REGISTRY: dict[str, Species] | None = None


def default_registry() -> dict[str, Species]:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        text = resources.files("selffocus").joinpath("data/species.json").read_text()
        _DEFAULT_REGISTRY = _parse_registry(json.loads(text), "bundled species.json")
    return dict(_DEFAULT_REGISTRY)


def lookup_species(name: str, registry: Mapping[str, Species] | None = None) -> Species:
    """Return the registry record for ``name``.

    >>> lookup_species("Rb87").scattering_length
    5e-09
    """
    if registry is None:
        registry = default_registry()
    try:
        return registry[name]
    except KeyError:
        raise UnknownSpeciesError(name, registry.keys()) from None
