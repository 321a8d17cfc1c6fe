//! Two-atom Hamiltonians and their three-level reductions.
//!
//! Single-atom levels are indexed `0:|0⟩, 1:|1⟩, 2:|p⟩, 3:|r⟩, 4:|d⟩`; a
//! two-atom index is `5·control + target`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::noise::thermal::ThermalSample;
use crate::pulses::PulseEnvelope;
use crate::units::mhz;

pub const LEVELS: usize = 5;
pub const DIM: usize = LEVELS * LEVELS;

pub const G0: usize = 0;
pub const G1: usize = 1;
pub const P: usize = 2;
pub const R: usize = 3;
pub const D: usize = 4;

/// Two-atom basis index.
#[inline]
pub const fn pair(control: usize, target: usize) -> usize {
    LEVELS * control + target
}

/// Indices of |00⟩, |01⟩, |10⟩, |11⟩.
pub const QUBIT_INDICES: [usize; 4] = [pair(G0, G0), pair(G0, G1), pair(G1, G0), pair(G1, G1)];

/// Atoms closer than this make the blockade shift meaningless.
pub const MIN_SEPARATION: f64 = 0.1;

/// D-line data for the trap-depth estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineConstants {
    /// D2 wavelength, μm.
    pub d2_wavelength: f64,
    /// D1 wavelength, μm.
    pub d1_wavelength: f64,
    /// Natural linewidth Γ of the D2 line, rad/μs.
    pub linewidth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeciesParams {
    pub name: String,
    /// Intermediate-state lifetime, μs.
    pub tau_p: f64,
    /// Rydberg lifetime, μs.
    pub tau_r: f64,
    pub b0p: f64,
    pub b1p: f64,
    pub bdp: f64,
    pub b0r: f64,
    pub b1r: f64,
    pub bdr: f64,
    pub bpr: f64,
    /// van der Waals coefficient, rad/μs·μm⁶ (sign included). The blockade
    /// shift is `−C₆/l⁶`.
    pub c6: Option<f64>,
    /// Lower-leg wavevector along z, rad/μm.
    pub k1z: f64,
    /// Upper-leg wavevector along z, rad/μm.
    pub k2z: f64,
    pub g_r: f64,
    pub g_1: f64,
    pub m_r: f64,
    pub m_1: f64,
    /// Atomic mass in atomic mass units.
    pub mass_amu: f64,
    pub lines: LineConstants,
}

impl SpeciesParams {
    pub fn rb87() -> Self {
        Self {
            name: "rb87".into(),
            tau_p: 0.118,
            tau_r: 353.0,
            b0p: 1.0 / 8.0,
            b1p: 1.0 / 8.0,
            bdp: 3.0 / 4.0,
            b0r: 1.0 / 16.0,
            b1r: 1.0 / 16.0,
            bdr: 3.0 / 8.0,
            bpr: 1.0 / 2.0,
            c6: Some(-mhz(56.171e6)),
            k1z: 2.0 * PI * 2.381,
            k2z: 2.0 * PI * 0.989,
            g_r: 2.0,
            g_1: 0.5,
            m_r: 0.5,
            m_1: 0.0,
            mass_amu: 86.909_180_531,
            lines: LineConstants {
                d2_wavelength: 0.780_241,
                d1_wavelength: 0.794_979,
                linewidth: mhz(6.0666),
            },
        }
    }

    /// Cesium with 459 nm / 1038 nm excitation. No C₆ is tabulated, so motion
    /// campaigns need one supplied by the caller.
    pub fn cs133() -> Self {
        Self {
            name: "cs133".into(),
            tau_p: 0.155,
            tau_r: 592.0,
            b0p: 1.0 / 16.0,
            b1p: 1.0 / 16.0,
            bdp: 7.0 / 8.0,
            b0r: 1.0 / 32.0,
            b1r: 1.0 / 32.0,
            bdr: 7.0 / 16.0,
            bpr: 1.0 / 2.0,
            c6: None,
            k1z: 2.0 * PI / 0.459,
            k2z: 2.0 * PI / 1.038,
            g_r: 2.0,
            g_1: 0.5,
            m_r: 0.5,
            m_1: 0.0,
            mass_amu: 132.905_451_961,
            lines: LineConstants {
                d2_wavelength: 0.852_347,
                d1_wavelength: 0.894_593,
                linewidth: mhz(5.234),
            },
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rb87" | "rb" | "87rb" => Some(Self::rb87()),
            "cs133" | "cs" | "133cs" => Some(Self::cs133()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_p > 0.0 && self.tau_r > 0.0) {
            return Err(Error::InvalidParameter("lifetimes must be positive".into()));
        }
        let from_p = self.b0p + self.b1p + self.bdp;
        let from_r = self.b0r + self.b1r + self.bdr + self.bpr;
        let ratios = [
            self.b0p, self.b1p, self.bdp, self.b0r, self.b1r, self.bdr, self.bpr,
        ];
        if ratios.iter().any(|b| !(*b >= 0.0)) {
            return Err(Error::InvalidParameter("branching ratios must be nonnegative".into()));
        }
        if (from_p - 1.0).abs() > 1e-9 || (from_r - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "branching ratios must sum to 1 (|p⟩: {from_p}, |r⟩: {from_r})"
            )));
        }
        Ok(())
    }

    /// Blockade shift `−C₆/l⁶` at separation `l` (μm).
    pub fn blockade_shift(&self, l: f64) -> Result<f64> {
        let c6 = self.c6.ok_or_else(|| {
            Error::InvalidParameter(format!("species {} has no C6 coefficient", self.name))
        })?;
        if l < MIN_SEPARATION {
            return Err(Error::Singularity { distance: l });
        }
        Ok(-c6 / l.powi(6))
    }

    /// Atomic mass in kg.
    pub fn mass_kg(&self) -> f64 {
        self.mass_amu * crate::units::ATOMIC_MASS_UNIT
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    /// Upper-leg Rabi amplitude, rad/μs.
    pub omega2: f64,
    /// Intermediate detuning, rad/μs (signed).
    pub delta: f64,
    /// Blockade shift, rad/μs.
    pub u_rr: f64,
    /// Lower-leg envelope; its peak is Ω₀.
    pub pulse: PulseEnvelope,
    /// Interatomic separation, μm.
    pub separation: f64,
    pub species: SpeciesParams,
}

impl GateParams {
    /// Rb87, `Ω₀/2π = 160 MHz`, `Ω₂/2π = 200 MHz`, `Δ/2π = 1 GHz`,
    /// `U_rr/2π = 2 GHz`, Gaussian with `T = 0.157 μs`, atoms 5.5 μm apart.
    pub fn baseline() -> Self {
        Self {
            omega2: mhz(200.0),
            delta: mhz(1000.0),
            u_rr: mhz(2000.0),
            pulse: PulseEnvelope::gaussian(mhz(160.0), 0.157),
            separation: 5.5,
            species: SpeciesParams::rb87(),
        }
    }

    pub fn omega0(&self) -> f64 {
        self.pulse.peak()
    }

    pub fn with_pulse(mut self, pulse: PulseEnvelope) -> Self {
        self.pulse = pulse;
        self
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.pulse = self.pulse.with_peak(omega0);
        self
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.pulse = self.pulse.with_width(width);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_species(mut self, species: SpeciesParams) -> Self {
        self.species = species;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega2 > 0.0) {
            return Err(Error::InvalidParameter("Ω₂ must be positive".into()));
        }
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(Error::DivisionByZero);
        }
        if !(self.separation > 0.0) {
            return Err(Error::InvalidParameter("separation must be positive".into()));
        }
        if !self.u_rr.is_finite() {
            return Err(Error::InvalidParameter("U_rr must be finite".into()));
        }
        self.pulse.validate()?;
        self.species.validate()
    }

    pub fn gate_time(&self) -> f64 {
        self.pulse.duration()
    }
}

/// Couplings seen by one atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomDrive {
    /// Complex lower-leg Rabi amplitude (coefficient of `|p⟩⟨1|` is half of it).
    pub lower: C64,
    /// Complex upper-leg Rabi amplitude (coefficient of `|r⟩⟨p|` is half of it).
    pub upper: C64,
    /// Intermediate detuning; `|p⟩⟨p|` carries `−Δ`.
    pub delta: f64,
    /// Two-photon detuning δ, entering as `−(δ/2)(|1⟩⟨1| − |r⟩⟨r|)`.
    pub two_photon: f64,
}

impl AtomDrive {
    pub fn real(lower: f64, upper: f64, delta: f64) -> Self {
        Self {
            lower: C64::new(lower, 0.0),
            upper: C64::new(upper, 0.0),
            delta,
            two_photon: 0.0,
        }
    }

    fn single_atom_entries(&self) -> [(usize, usize, C64); 7] {
        let half = 0.5;
        [
            (P, G1, self.lower * half),
            (G1, P, self.lower.conj() * half),
            (R, P, self.upper * half),
            (P, R, self.upper.conj() * half),
            (P, P, C64::new(-self.delta, 0.0)),
            (G1, G1, C64::new(-0.5 * self.two_photon, 0.0)),
            (R, R, C64::new(0.5 * self.two_photon, 0.0)),
        ]
    }
}

/// `h_c ⊗ 1 + 1 ⊗ h_t + U_rr|rr⟩⟨rr|`.
pub fn two_atom_hamiltonian(control: &AtomDrive, target: &AtomDrive, u_rr: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(DIM);
    for (a, b, v) in control.single_atom_entries() {
        for spectator in 0..LEVELS {
            h[(pair(a, spectator), pair(b, spectator))] += v;
        }
    }
    for (a, b, v) in target.single_atom_entries() {
        for spectator in 0..LEVELS {
            h[(pair(spectator, a), pair(spectator, b))] += v;
        }
    }
    h[(pair(R, R), pair(R, R))] += C64::new(u_rr, 0.0);
    h
}

/// Full 25-level Hamiltonian at time `t`.
pub fn h_full(params: &GateParams, t: f64) -> Result<ComplexMatrix> {
    let omega1 = params.pulse.evaluate(t)?;
    let drive = AtomDrive::real(omega1, params.omega2, params.delta);
    Ok(two_atom_hamiltonian(&drive, &drive, params.u_rr))
}

/// `h_full` with `Ω₁ → Ω₁ + δΩ₁` and `Ω₂ → Ω₂ + δΩ₂`.
pub fn h_intensity_noise(
    params: &GateParams,
    d_omega1: f64,
    d_omega2: f64,
    t: f64,
) -> Result<ComplexMatrix> {
    let omega1 = params.pulse.evaluate(t)?;
    let drive = AtomDrive::real(omega1 + d_omega1, params.omega2 + d_omega2, params.delta);
    Ok(two_atom_hamiltonian(&drive, &drive, params.u_rr))
}

/// `h_full` plus a two-photon detuning δ on both atoms.
pub fn h_detuned(params: &GateParams, two_photon: f64, t: f64) -> Result<ComplexMatrix> {
    let omega1 = params.pulse.evaluate(t)?;
    let drive = AtomDrive {
        two_photon,
        ..AtomDrive::real(omega1, params.omega2, params.delta)
    };
    Ok(two_atom_hamiltonian(&drive, &drive, params.u_rr))
}

/// Hamiltonian of two moving atoms: control nominally at the origin, target at
/// `(r, 0, 0)`, beams counter-propagating along z. The blockade shift follows
/// the instantaneous separation through `−C₆/l(t)⁶`.
pub fn h_doppler(params: &GateParams, sample: &ThermalSample, t: f64) -> Result<ComplexMatrix> {
    let omega1 = params.pulse.evaluate(t)?;
    let rc = sample.control.position_at([0.0, 0.0, 0.0], t);
    let rt = sample.target.position_at([params.separation, 0.0, 0.0], t);
    let l = ((rc[0] - rt[0]).powi(2) + (rc[1] - rt[1]).powi(2) + (rc[2] - rt[2]).powi(2)).sqrt();
    let u_rr = params.species.blockade_shift(l)?;
    let sp = &params.species;
    let drive_at = |z: f64| AtomDrive {
        lower: C64::from_polar(omega1, sp.k1z * z),
        upper: C64::from_polar(params.omega2, -sp.k2z * z),
        delta: params.delta,
        two_photon: 0.0,
    };
    Ok(two_atom_hamiltonian(&drive_at(rc[2]), &drive_at(rt[2]), u_rr))
}

/// Gaussian-beam amplitude at `position` for a beam along z focused at the
/// origin with waists `(ω_x, ω_y)` and the given wavelength (all μm).
pub fn rabi_at_position(
    omega_center: f64,
    position: [f64; 3],
    waists: (f64, f64),
    wavelength: f64,
) -> f64 {
    let [x, y, z] = position;
    let (wx, wy) = waists;
    let lx = PI * wx * wx / wavelength;
    let ly = PI * wy * wy / wavelength;
    let gx = 1.0 + (z / lx).powi(2);
    let gy = 1.0 + (z / ly).powi(2);
    let exponent = x * x / (wx * wx * gx) + y * y / (wy * wy * gy);
    omega_center * (-exponent).exp() / (gx * gy).powf(0.25)
}

/// 01 manifold `{|01⟩, |0p⟩, |0r⟩}` for a given lower-leg amplitude.
pub fn h01_matrix(omega1: f64, omega2: f64, delta: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(3);
    h[(0, 1)] = C64::new(0.5 * omega1, 0.0);
    h[(1, 0)] = h[(0, 1)];
    h[(1, 1)] = C64::new(-delta, 0.0);
    h[(1, 2)] = C64::new(0.5 * omega2, 0.0);
    h[(2, 1)] = h[(1, 2)];
    h
}

/// Effective 11 manifold `{|11⟩, |A⟩, |B⟩}` with `|A⟩ = (|1p⟩+|p1⟩)/√2`,
/// `|B⟩ = (|1r⟩+|r1⟩)/√2`, including the `Ω₁²/4Δ` shift on `|B⟩`.
pub fn h11_matrix(omega1: f64, omega2: f64, delta: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(3);
    h[(0, 1)] = C64::new(SQRT_2 * 0.5 * omega1, 0.0);
    h[(1, 0)] = h[(0, 1)];
    h[(1, 1)] = C64::new(-delta, 0.0);
    h[(1, 2)] = C64::new(0.5 * omega2, 0.0);
    h[(2, 1)] = h[(1, 2)];
    h[(2, 2)] = C64::new(omega1 * omega1 / (4.0 * delta), 0.0);
    h
}

pub fn h01(params: &GateParams, t: f64) -> Result<ComplexMatrix> {
    Ok(h01_matrix(params.pulse.evaluate(t)?, params.omega2, params.delta))
}

pub fn h11(params: &GateParams, t: f64) -> Result<ComplexMatrix> {
    if params.delta == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(h11_matrix(params.pulse.evaluate(t)?, params.omega2, params.delta))
}
