import dataclasses
import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selffocus.atomlaser import (
    DerivedTrapQuantities,
    NegativeExtractionError,
    OutsideCondensateError,
    TrapConfig,
    TurningPointError,
    chemical_potential,
    coherence_length,
    coherence_residual,
    derive_trap_quantities,
    evaluate_psi0,
    gravitational_length,
    load_trap_config,
    local_velocity,
    local_wavenumber,
    with_geometry,
)
from selffocus.constants import DEFAULT_CONSTANTS, Species, lookup_species

HBAR = DEFAULT_CONSTANTS.hbar
MU_B = DEFAULT_CONSTANTS.mu_B
RB = lookup_species("Rb87")
TWO_PI = 2 * math.pi

# mpmath (50 digits) evaluation of (hbar w/2)(15 a N / sigma)^(2/5) for
# Rb-87, a = 5 nm, w_x = w_perp = 2 pi 100 rad/s, N = 1e5
MU_RB_100HZ_1E5 = 1.1406022689948736e-30


def make_cfg(species=RB, N=1e6, fx=20.0, fperp=150.0, detuning_over_mu=0.1, **kw):
    """Trap whose rf detuning is hbar*delta = detuning_over_mu * mu."""
    B0 = 1e-4
    probe = TrapConfig(species, N, TWO_PI * fx, TWO_PI * fperp, 1e-7, B0, 1.0)
    mu = chemical_potential(probe)
    omega_rf = (0.5 * MU_B * B0 - detuning_over_mu * mu) / HBAR
    return TrapConfig(species, N, TWO_PI * fx, TWO_PI * fperp, 1e-7, B0, omega_rf, **kw)


# --- chemical potential ----------------------------------------------------

def test_mu_pinned_regression():
    cfg = TrapConfig(RB, 1e5, TWO_PI * 100, TWO_PI * 100, 0.0, 0.0, 1.0)
    assert chemical_potential(cfg) == pytest.approx(MU_RB_100HZ_1E5, rel=1e-12)


def test_mu_doubles():
    cfg = make_cfg()
    big = dataclasses.replace(cfg, atom_number=cfg.atom_number * 2**2.5)
    assert chemical_potential(big) == pytest.approx(2 * chemical_potential(cfg), rel=1e-13)


def test_mu_vanishes_with_interaction():
    weak = Species("weak", RB.mass, 1e-40)
    cfg = dataclasses.replace(make_cfg(), species=weak)
    assert chemical_potential(cfg) < 1e-40


@given(st.floats(0.1, 10.0))
@settings(max_examples=30)
def test_mu_scalings(lam):
    cfg = make_cfg()
    mu = chemical_potential(cfg)
    sp = Species("x", RB.mass, RB.scattering_length * lam)
    assert chemical_potential(dataclasses.replace(cfg, species=sp)) == pytest.approx(
        lam**0.4 * mu, rel=1e-12)
    assert chemical_potential(dataclasses.replace(cfg, atom_number=cfg.atom_number * lam)) == \
        pytest.approx(lam**0.4 * mu, rel=1e-12)
    # w -> lam w: hbar w/2 gives lam, (1/sigma)^(2/5) gives lam^(1/5)
    scaled = dataclasses.replace(cfg, omega_x=cfg.omega_x * lam, omega_perp=cfg.omega_perp * lam)
    assert chemical_potential(scaled) == pytest.approx(lam**1.2 * mu, rel=1e-12)


# --- derived quantities ----------------------------------------------------

def test_gravitational_length_rb87():
    l = gravitational_length(RB.mass)
    assert l == pytest.approx(0.3008e-6, abs=1e-10)
    assert abs(l - 0.28e-6) / 0.28e-6 < 0.10


def test_derived_quantities_formulas():
    cfg = make_cfg()
    dq = derive_trap_quantities(cfg)
    M = RB.mass
    mu = chemical_potential(cfg)
    assert dq.mu == mu
    assert dq.x0 == pytest.approx(math.sqrt(2 * mu / (M * cfg.omega_x**2)), rel=1e-15)
    assert dq.y0 == dq.z0 == pytest.approx(math.sqrt(2 * mu / (M * cfg.omega_perp**2)), rel=1e-15)
    assert dq.U == pytest.approx(4 * math.pi * HBAR**2 * RB.scattering_length * 1e6 / M, rel=1e-15)
    assert HBAR * dq.Omega_rf == pytest.approx(MU_B * cfg.B_rf / (2 * math.sqrt(2)), rel=1e-15)
    assert HBAR * dq.delta_rf == pytest.approx(0.1 * mu, rel=1e-6)
    eta = (2 * 0.1 * mu + 4 * mu / 7) / (2 * M * DEFAULT_CONSTANTS.g * dq.z0)
    assert dq.eta == pytest.approx(eta, rel=1e-6)
    assert dq.z_r == pytest.approx(dq.eta * dq.z0 / 2, rel=1e-15)
    assert dq.omega_bar == pytest.approx((cfg.omega_x * cfg.omega_perp**2) ** (1 / 3), rel=1e-15)
    assert dq.sigma == pytest.approx(math.sqrt(HBAR / (M * dq.omega_bar)), rel=1e-15)
    assert dq.l < 0.1 * min(dq.x0, dq.y0, dq.z0)


def test_isotropic_trap_radii():
    dq = derive_trap_quantities(make_cfg(fx=100.0, fperp=100.0))
    assert dq.x0 == dq.y0 == dq.z0


def test_eta_zero():
    # hbar delta = -2 mu / 7 makes 2 hbar delta + 4 mu / 7 vanish
    dq = derive_trap_quantities(make_cfg(detuning_over_mu=-2 / 7))
    assert dq.eta == pytest.approx(0.0, abs=1e-9)
    assert dq.z_r == pytest.approx(0.0, abs=1e-9 * dq.z0)


def test_negative_eta_reported():
    with pytest.raises(NegativeExtractionError):
        derive_trap_quantities(make_cfg(detuning_over_mu=-1.0))


def test_negative_eta_with_override_is_allowed():
    dq = derive_trap_quantities(make_cfg(detuning_over_mu=-1.0), z_r_override=0.0)
    assert dq.eta < 0 and dq.z_r == 0.0


def test_offset_curvature_single_pass():
    K = 1e-20
    base = derive_trap_quantities(make_cfg())
    dq = derive_trap_quantities(make_cfg(offset_curvature=K))
    z_r0 = base.eta * base.z0 / 2
    assert HBAR * dq.delta_rf == pytest.approx(HBAR * base.delta_rf + K * z_r0**2 / 2, rel=1e-9)
    assert dq.eta > base.eta


def test_warns_for_tiny_condensate():
    with pytest.warns(RuntimeWarning, match="gravitational length"):
        derive_trap_quantities(make_cfg(N=1, fx=2000.0, fperp=2000.0))


def test_trap_config_validation():
    with pytest.raises(ValueError):
        TrapConfig(RB, 0, 1.0, 1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        TrapConfig(RB, 10, -1.0, 1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        TrapConfig(RB, 10, 1.0, 1.0, -1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        TrapConfig(RB, 10, 1.0, 1.0, 0.0, 0.0, 1.0, coupling_factor=math.inf)


# --- outcoupled wavefunction -----------------------------------------------

def test_psi0_centre_amplitude():
    cfg = make_cfg(detuning_over_mu=-2 / 7)
    dq = derive_trap_quantities(cfg, z_r_override=0.0)
    p = evaluate_psi0(dq, cfg, 0.0, 0.0, 2e-6)
    assert p.phi_minus1 == pytest.approx(math.sqrt(dq.mu / dq.U), rel=1e-15)
    expected_amp = -math.sqrt(math.pi) * HBAR * dq.Omega_rf / (RB.mass * dq.g * dq.l) * p.phi_minus1
    assert p.amplitude == pytest.approx(expected_amp, rel=1e-15)
    assert abs(p.psi0) == pytest.approx(abs(expected_amp) / p.zeta_r**0.25, rel=1e-14)


def test_psi0_envelope_law():
    cfg = make_cfg(coupling_factor=0.3)
    dq = derive_trap_quantities(cfg)
    vals = [evaluate_psi0(dq, cfg, 1e-6, -2e-7, z).density * ((z + dq.z_r) / dq.l) ** 0.5
            for z in np.linspace(1e-7, 5e-5, 20)]
    assert vals == pytest.approx([vals[0]] * len(vals), rel=1e-12)


def test_psi0_phase():
    cfg = make_cfg(E_minus1=3e-31)
    dq = derive_trap_quantities(cfg)
    z, t = 4e-6, 2e-3
    p = evaluate_psi0(dq, cfg, 0.0, 0.0, z, t)
    zeta = (z + dq.z_r) / dq.l
    ref = p.amplitude * np.exp(1j * (2 / 3 * zeta**1.5 - 3e-31 * t / HBAR)) / zeta**0.25
    assert p.psi0 == pytest.approx(ref, rel=1e-12)


def test_psi0_needs_energy_for_time_dependence():
    cfg = make_cfg()
    dq = derive_trap_quantities(cfg)
    with pytest.raises(ValueError, match="E_minus1"):
        evaluate_psi0(dq, cfg, 0.0, 0.0, 1e-6, 1e-3)


def test_psi0_thomas_fermi_edge():
    cfg = make_cfg(detuning_over_mu=-2 / 7)
    dq = derive_trap_quantities(cfg, z_r_override=0.0)
    p = evaluate_psi0(dq, cfg, dq.x0, 0.0, 1e-6)
    assert p.phi_minus1 == 0.0 and p.psi0 == 0.0
    with pytest.raises(OutsideCondensateError):
        evaluate_psi0(dq, cfg, 1.01 * dq.x0, 0.0, 1e-6)


def test_psi0_turning_point():
    cfg = make_cfg()
    dq = derive_trap_quantities(cfg)
    with pytest.raises(TurningPointError):
        evaluate_psi0(dq, cfg, 0.0, 0.0, -dq.z_r)


def test_psi0_fills_velocity():
    cfg = make_cfg()
    dq = derive_trap_quantities(cfg)
    p = evaluate_psi0(dq, cfg, 0.0, 0.0, 3e-6)
    assert p.k == local_wavenumber(dq, 3e-6)
    assert p.v == local_velocity(dq, 3e-6)


# --- velocity and wavenumber -----------------------------------------------

def rb_geometry(z_r=0.0):
    return DerivedTrapQuantities.at_extraction_point(RB, z_r)


def test_turning_point_zero():
    dq = rb_geometry(2e-6)
    assert local_velocity(dq, -2e-6) == 0.0
    assert local_wavenumber(dq, -2e-6) == 0.0
    with pytest.raises(ValueError):
        local_velocity(dq, -3e-6)


def test_unit_zeta():
    dq = rb_geometry(0.0)
    assert local_wavenumber(dq, dq.l) == pytest.approx(1 / dq.l, rel=1e-15)


def test_wavenumber_rb87_one_micron():
    # sqrt(1e-6) / (0.3008e-6)^1.5
    assert local_wavenumber(rb_geometry(0.0), 1e-6) == pytest.approx(6.0606e6, rel=1e-4)


def test_sqrt_scaling():
    dq = rb_geometry(0.0)
    assert local_velocity(dq, 4e-6) == pytest.approx(2 * local_velocity(dq, 1e-6), rel=1e-15)


@given(st.floats(0, 1e-3), st.floats(0, 1e-4), st.sampled_from(["Li7", "Na23", "Rb87"]),
       st.floats(1.0, 30.0))
def test_free_fall_and_de_broglie(z, z_r, name, g):
    from selffocus.constants import DEFAULT_CONSTANTS as C
    dq = DerivedTrapQuantities.at_extraction_point(lookup_species(name), z_r, C.with_g(g))
    v = local_velocity(dq, z)
    assert v * v == pytest.approx(2 * g * (z + z_r), rel=1e-12, abs=0)
    k = local_wavenumber(dq, z)
    assert abs(HBAR * k - dq.mass * v) <= 2 * math.ulp(HBAR * k)


# --- coherence-length equation ---------------------------------------------

def test_residual_at_zero():
    dq = rb_geometry(1e-6)
    assert coherence_residual(dq, 0.0, 2) == pytest.approx(-4 * math.pi * dq.l**1.5, rel=1e-15)


def test_residual_closed_form_root():
    dq = rb_geometry(0.0)
    for n in (1, 2, 5):
        z = (2 * n * math.pi) ** (2 / 3) * dq.l
        assert abs(coherence_residual(dq, z, n)) <= 1e-14 * 2 * n * math.pi * dq.l**1.5


def test_residual_monotone_zr0_scan():
    dq = rb_geometry(0.0)
    z = np.linspace(1e-12, 100 * dq.l, 20001)
    vals = np.array([coherence_residual(dq, zz) for zz in z])
    assert np.all(np.diff(vals) > 0)


def test_residual_shape_with_offset():
    # negative on (0, z_r], strictly increasing beyond z_r
    dq = rb_geometry(2 * rb_geometry().l)
    below = np.linspace(1e-12, dq.z_r, 500)
    assert all(coherence_residual(dq, z) < 0 for z in below)
    above = np.linspace(dq.z_r, 100 * dq.l, 5000)
    assert np.all(np.diff([coherence_residual(dq, z) for z in above]) > 0)


@pytest.mark.parametrize("name, value_um", [("Rb87", 1.0243), ("Na23", 2.4858), ("Li7", 5.4840)])
def test_species_coherence_lengths(name, value_um):
    # closed form (2 pi)^(2/3) l at z_r = 0
    res = coherence_length(DerivedTrapQuantities.at_extraction_point(lookup_species(name), 0.0))
    assert res.coherence_length * 1e6 == pytest.approx(value_um, abs=5e-5)
    assert res.n == 1 and res.z_r == 0.0 and res.species == name
    assert abs(res.residual) <= 1e-12 * 2 * math.pi * res.l**1.5


def test_order_law():
    dq = rb_geometry(0.0)
    base = coherence_length(dq).coherence_length
    for n in (2, 3, 8):
        assert coherence_length(dq, n).coherence_length == pytest.approx(
            n ** (2 / 3) * base, rel=1e-11)


def test_zr_monotone():
    l = rb_geometry().l
    roots = [coherence_length(rb_geometry(zr)).coherence_length
             for zr in np.linspace(0, 10 * l, 41)]
    assert np.all(np.diff(roots) > 0)


@given(st.floats(0.01, 100.0), st.floats(0.0, 10.0))
@settings(max_examples=50)
def test_homogeneity(lam, zr_over_l):
    dq = rb_geometry(zr_over_l * rb_geometry().l)
    scaled = with_geometry(dq, l=lam * dq.l, z_r=lam * dq.z_r)
    a = coherence_length(dq).coherence_length
    b = coherence_length(scaled).coherence_length
    assert b == pytest.approx(lam * a, rel=1e-10)


def test_rejects_bad_order_and_zr():
    dq = rb_geometry()
    with pytest.raises(ValueError):
        coherence_length(dq, 0)
    with pytest.raises(NegativeExtractionError):
        coherence_length(with_geometry(dq, z_r=-1e-7))
    with pytest.raises(NegativeExtractionError):
        rb_geometry(-1e-7)


def test_derived_trap_coherence():
    dq = derive_trap_quantities(make_cfg())
    res = coherence_length(dq)
    assert res.coherence_length > coherence_length(rb_geometry()).coherence_length
    assert res.z_r == dq.z_r


# --- trap files ------------------------------------------------------------

def trap_doc(**overrides):
    doc = {"species": "Rb87", "atom_number": 1e5, "omega_x_hz": 13.0, "omega_perp_hz": 330.0,
           "B_rf_T": 1e-7, "B_0_T": 1e-4, "omega_rf_hz": 699e3}
    doc.update(overrides)
    return doc


def test_load_trap_config(tmp_path):
    path = tmp_path / "trap.json"
    path.write_text(json.dumps(trap_doc(F=0.5, z_r_override_m=1e-6)))
    cfg, zr = load_trap_config(path)
    assert cfg.species == RB
    assert cfg.omega_x == pytest.approx(TWO_PI * 13.0)
    assert cfg.omega_rf == pytest.approx(TWO_PI * 699e3)
    assert cfg.coupling_factor == 0.5 and cfg.offset_curvature == 0.0
    assert zr == 1e-6


def test_load_trap_config_errors(tmp_path):
    path = tmp_path / "trap.json"
    doc = trap_doc()
    del doc["B_0_T"]
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="B_0_T"):
        load_trap_config(path)
    path.write_text(json.dumps(trap_doc(colour="blue")))
    with pytest.raises(ValueError, match="colour"):
        load_trap_config(path)
