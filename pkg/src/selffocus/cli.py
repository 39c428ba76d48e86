"""Command-line frontend.

Usage:
    selffocus optical --bandwidth-hz 5e6
    selffocus atom --species Rb87 --zr 0
    selffocus atom --trap trap.json
    selffocus simulate spectrum.txt --z-min 0.5 --z-max 1.5 --samples 1001
    selffocus species list

Global flags (accepted before or after the subcommand): ``--json`` for the
machine-readable envelope, ``--registry PATH`` to replace the species
registry, ``--g VALUE`` to override the gravitational acceleration.

Exit codes: 0 success, 2 input error, 3 physical-domain error, 4 solver failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from importlib import metadata

import numpy as np

from . import __version__
from .atomlaser import (
    DerivedTrapQuantities,
    NegativeExtractionError,
    coherence_length,
    derive_trap_quantities,
    load_trap_config,
)
from .beamsim import (
    LIGHT,
    MATTER,
    SpectrumParseError,
    current_density_spectral,
    focus_positions,
    load_spectrum,
    locate_foci_numeric,
    write_profile_csv,
)
from .beamsim import coherence_length_optical
from .constants import (
    DEFAULT_CONSTANTS,
    UnknownSpeciesError,
    default_registry,
    load_registry,
    lookup_species,
)
from .numerics import NumericsError

__all__ = ["main", "build_parser", "CliError"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_SOLVER = 4

# cap on predicted focus orders listed per pair in the CSV footer
_MAX_LISTED_ORDERS = 100


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - running from a checkout
        return __version__


def _envelope(command, inputs, results):
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "artifact_version": _version(),
    }


def _dump(envelope) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


def _auto_length(metres: float) -> str:
    for unit, scale in (("km", 1e3), ("m", 1.0), ("mm", 1e-3)):
        if abs(metres) >= scale:
            return f"{metres / scale:.4f} {unit}"
    return f"{metres / 1e-6:.4f} um"


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true",
                   default=argparse.SUPPRESS if suppress else False,
                   help="print the machine-readable JSON envelope")
    p.add_argument("--registry", metavar="PATH", default=default,
                   help="species registry JSON file (replaces the bundled one)")
    p.add_argument("--g", type=float, metavar="M_PER_S2", default=default,
                   help="gravitational acceleration (default 9.80665)")
    return p


def build_parser() -> argparse.ArgumentParser:
    sub_globals = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="selffocus",
        description="Self-focusing positions and coherence lengths of photon and atom-laser beams.",
        parents=[_global_flags(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optical", parents=[sub_globals],
                       help="optical coherence length n c / bandwidth")
    p.add_argument("--bandwidth-hz", type=float, required=True)
    p.add_argument("--n", type=_positive_int, default=1)

    p = sub.add_parser("atom", parents=[sub_globals], help="atom-laser coherence length")
    p.add_argument("--species", help="registry label, e.g. Rb87")
    p.add_argument("--zr", type=float, metavar="METRES",
                   help="extraction point z_r in metres (takes precedence over --trap)")
    p.add_argument("--trap", metavar="PATH", help="trap configuration JSON file")
    p.add_argument("--n", type=_positive_int, default=1)

    p = sub.add_parser("simulate", parents=[sub_globals],
                       help="current-density profile of a discrete spectrum (CSV)")
    p.add_argument("spectrum", help="two-column file: k_rad_per_m amplitude")
    p.add_argument("--z-min", type=float, required=True)
    p.add_argument("--z-max", type=float, required=True)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--species", default="Rb87", help="particle species for hbar/m (default Rb87)")
    p.add_argument("--mass-kg", type=float, help="particle mass, overrides --species")
    p.add_argument("--dispersion", choices=(MATTER, LIGHT), default=MATTER)

    p = sub.add_parser("species", parents=[sub_globals], help="species registry")
    species_sub = p.add_subparsers(dest="species_command", required=True)
    species_sub.add_parser("list", parents=[sub_globals], help="list registry entries")
    return parser


def _constants(args):
    if args.g is None:
        return DEFAULT_CONSTANTS
    if not (math.isfinite(args.g) and args.g > 0):
        raise CliError(f"--g must be a positive number, got {args.g!r}")
    return DEFAULT_CONSTANTS.with_g(args.g)


def _registry(args):
    if args.registry is None:
        return default_registry()
    try:
        return load_registry(args.registry)
    except (OSError, ValueError) as exc:
        raise CliError(f"--registry: {exc}") from None


def cmd_optical(args, out, err):
    if not (math.isfinite(args.bandwidth_hz) and args.bandwidth_hz > 0):
        raise CliError(f"--bandwidth-hz must be positive, got {args.bandwidth_hz!r}")
    constants = _constants(args)
    dz = coherence_length_optical(args.bandwidth_hz, args.n, constants)
    inputs = {"bandwidth_hz": args.bandwidth_hz, "n": args.n, "c_m_per_s": constants.c}
    results = {"coherence_length_m": dz}
    if args.json:
        out.write(_dump(_envelope("optical", inputs, results)))
    else:
        out.write(f"optical coherence length (n={args.n}, bandwidth {args.bandwidth_hz!r} Hz)\n")
        out.write(f"  coherence_length: {_auto_length(dz)} ({dz!r} m)\n")


def cmd_atom(args, out, err):
    constants = _constants(args)
    registry = _registry(args)
    if args.zr is None and args.trap is None:
        raise CliError("atom: give --zr or --trap")
    if args.zr is not None and not (math.isfinite(args.zr) and args.zr >= 0):
        raise CliError(f"--zr must be a non-negative number of metres, got {args.zr!r}")

    derived = None
    if args.trap is not None:
        try:
            cfg, file_zr = load_trap_config(args.trap, registry, species=args.species)
        except (OSError, ValueError, TypeError) as exc:
            raise CliError(f"--trap: {exc}") from None
        if args.zr is not None:
            err.write("warning: --zr overrides the extraction point derived from --trap\n")
        override = args.zr if args.zr is not None else file_zr
        zr_source = "trap" if override is None else "override"
        dq = derive_trap_quantities(cfg, constants, z_r_override=override)
        derived = dq
    else:
        if args.species is None:
            raise CliError("atom: --species is required without --trap")
        species = lookup_species(args.species, registry)
        zr_source = "override"
        dq = DerivedTrapQuantities.at_extraction_point(species, args.zr, constants)

    res = coherence_length(dq, args.n)
    inputs = {
        "species": dq.species,
        "n": args.n,
        "g_m_per_s2": constants.g,
        "z_r_source": zr_source,
    }
    if args.zr is not None:
        inputs["z_r_m"] = args.zr
    if args.trap is not None:
        inputs["trap_file"] = str(args.trap)
    results = {
        "l_m": res.l,
        "z_r_m": res.z_r,
        "coherence_length_m": res.coherence_length,
        "coherence_length_um": res.coherence_length * 1e6,
        "residual_m3_2": res.residual,
    }
    if derived is not None:
        results.update({
            "mu_J": derived.mu,
            "eta_dimensionless": derived.eta,
            "x0_m": derived.x0,
            "y0_m": derived.y0,
            "z0_m": derived.z0,
            "Omega_rf_rad_per_s": derived.Omega_rf,
            "delta_rf_rad_per_s": derived.delta_rf,
        })
    if args.json:
        out.write(_dump(_envelope("atom", inputs, results)))
        return
    out.write(f"atom laser coherence length ({dq.species}, n={args.n}, g={constants.g!r} m/s^2)\n")
    out.write(f"  l: {res.l * 1e6:.4f} um ({res.l!r} m)\n")
    out.write(f"  z_r: {res.z_r * 1e6:.4f} um ({res.z_r!r} m)\n")
    out.write(f"  coherence_length: {res.coherence_length * 1e6:.4f} um "
              f"({res.coherence_length!r} m)\n")
    out.write(f"  residual: {res.residual!r} m^(3/2)\n")


def _predictions(spectrum, z_min, z_max):
    rows = []
    k = spectrum.k
    for i in range(k.size):
        for j in range(i + 1, k.size):
            dk = abs(k[j] - k[i])
            n_hi = min(int(math.floor(z_max * dk / (2.0 * math.pi))), _MAX_LISTED_ORDERS)
            fs = focus_positions(float(k[i]), float(k[j]), max(n_hi, 1))
            pairs = [(n, z) for n, z in zip(fs.orders, fs.positions) if z >= z_min and z <= z_max]
            if not pairs:
                pairs = [(fs.orders[0], fs.positions[0])]
            rows.append((float(k[i]), float(k[j]), pairs))
    return rows


def cmd_simulate(args, out, err):
    constants = _constants(args)
    if not (math.isfinite(args.z_min) and math.isfinite(args.z_max) and args.z_min < args.z_max):
        raise CliError(f"bad range: need --z-min < --z-max, got {args.z_min!r}, {args.z_max!r}")
    if args.samples < 2:
        raise CliError(f"--samples must be >= 2, got {args.samples}")
    if args.mass_kg is not None:
        if not args.mass_kg > 0:
            raise CliError(f"--mass-kg must be positive, got {args.mass_kg!r}")
        mass = args.mass_kg
    else:
        mass = lookup_species(args.species, _registry(args)).mass
    try:
        spectrum = load_spectrum(args.spectrum, mass, args.dispersion)
    except SpectrumParseError as exc:
        raise CliError(f"{args.spectrum}: {exc}") from None
    except OSError as exc:
        raise CliError(f"{args.spectrum}: {exc.strerror}") from None

    z = np.linspace(args.z_min, args.z_max, args.samples)
    profile = current_density_spectral(spectrum, z, constants)
    foci = locate_foci_numeric(profile)
    predictions = _predictions(spectrum, args.z_min, args.z_max)

    if args.json:
        inputs = {
            "spectrum_file": str(args.spectrum),
            "z_min_m": args.z_min,
            "z_max_m": args.z_max,
            "samples": args.samples,
            "particle_mass_kg": mass,
            "dispersion": args.dispersion,
        }
        results = {
            "z_m": profile.z_grid.tolist(),
            "incoherent_m_per_s": profile.incoherent.tolist(),
            "coherent_m_per_s": profile.coherent.tolist(),
            "total_m_per_s": profile.total.tolist(),
            "foci_detected_m": foci,
            "foci_predicted": [
                {"k_rad_per_m": k1, "k_prime_rad_per_m": k2,
                 "orders": [n for n, _ in pairs], "positions_m": [zz for _, zz in pairs]}
                for k1, k2, pairs in predictions
            ],
        }
        out.write(_dump(_envelope("simulate", inputs, results)))
        return

    write_profile_csv(profile, out)
    if len(spectrum) == 1:
        out.write("# no foci (single component)\n")
        return
    if foci:
        out.write("# foci detected (coherent-term maxima), z_m: "
                  + ", ".join(repr(f) for f in foci) + "\n")
    else:
        out.write("# foci detected: none in range\n")
    for k1, k2, pairs in predictions:
        listed = ", ".join(f"n={n} z_m={zz!r}" for n, zz in pairs)
        out.write(f"# predicted 2*pi*n/|k'-k| for k={k1!r} k'={k2!r}: {listed}\n")


def cmd_species_list(args, out, err):
    registry = _registry(args)
    entries = [registry[name] for name in sorted(registry)]
    if args.json:
        results = {
            "species": [
                {"name": s.name, "mass_kg": s.mass, "mass_amu": s.mass / DEFAULT_CONSTANTS.amu,
                 "scattering_length_m": s.scattering_length, "source": s.source}
                for s in entries
            ]
        }
        inputs = {"registry": args.registry or "bundled"}
        out.write(_dump(_envelope("species list", inputs, results)))
        return
    out.write(f"{'name':<8} {'mass_amu':>14} {'a_nm':>8}  source\n")
    for s in entries:
        out.write(f"{s.name:<8} {s.mass / DEFAULT_CONSTANTS.amu:>14.9f} "
                  f"{s.scattering_length * 1e9:>8.4f}  {s.source}\n")


_COMMANDS = {
    "optical": cmd_optical,
    "atom": cmd_atom,
    "simulate": cmd_simulate,
    "species": cmd_species_list,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args, out, err)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except UnknownSpeciesError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NegativeExtractionError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except NumericsError as exc:
        err.write(f"error: solver failure: {exc}\n")
        return EXIT_SOLVER
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def run(argv=None) -> tuple[int, str, str]:
    """Run the CLI in-process and capture ``(exit_code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
