//! Thermal motion of trapped atoms: trap geometry, position and velocity
//! spreads, and Box–Muller sampling.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hamiltonians::SpeciesParams;
use crate::units::BOLTZMANN;

/// Optical tweezer holding one atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    /// Trap wavelength, μm.
    pub wavelength: f64,
    /// Beam power, W.
    pub power: f64,
    /// Beam waist (1/e² intensity radius), μm.
    pub waist: f64,
    /// Trap depth as a temperature, μK.
    pub depth: f64,
    /// Atomic temperature, μK.
    pub temperature: f64,
}

impl Default for TrapParams {
    /// 830 nm, 174 μW, 1.2 μm waist, 50 μK deep, atoms at 5.2 μK.
    fn default() -> Self {
        Self {
            wavelength: 0.83,
            power: 174e-6,
            waist: 1.2,
            depth: 50.0,
            temperature: 5.2,
        }
    }
}

impl TrapParams {
    pub fn at_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Standard deviations of the thermal distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalWidths {
    /// Across the tweezer axis, μm.
    pub transverse: f64,
    /// Along the tweezer axis, μm.
    pub axial: f64,
    /// Per velocity component, μm/μs.
    pub velocity: f64,
}

impl ThermalWidths {
    /// `σ⊥ = (ω_f/2)√(T_a/U)`, `σ∥ = (π ω_f²/√2 λ_f)√(T_a/U)`, `σ_v = √(k_B T_a/m)`.
    pub fn new(trap: &TrapParams, species: &SpeciesParams) -> Self {
        let ratio = (trap.temperature / trap.depth).max(0.0);
        let w = trap.waist;
        let velocity_m_per_s = (BOLTZMANN * trap.temperature * 1e-6 / species.mass_kg()).sqrt();
        Self {
            transverse: 0.5 * w * ratio.sqrt(),
            axial: (PI * PI * w.powi(4) / (2.0 * trap.wavelength.powi(2)) * ratio).sqrt(),
            // 1 m/s is 1 μm/μs.
            velocity: velocity_m_per_s,
        }
    }

    fn position_sigmas(&self, trap_axis: Axis) -> [f64; 3] {
        let mut s = [self.transverse; 3];
        s[trap_axis.index()] = self.axial;
        s
    }
}

/// Displacement from the nominal site and velocity of one atom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AtomMotion {
    /// μm.
    pub displacement: [f64; 3],
    /// μm/μs.
    pub velocity: [f64; 3],
}

impl AtomMotion {
    /// `R + δR + v t`.
    pub fn position_at(&self, nominal: [f64; 3], t: f64) -> [f64; 3] {
        [0, 1, 2].map(|k| nominal[k] + self.displacement[k] + self.velocity[k] * t)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThermalSample {
    pub control: AtomMotion,
    pub target: AtomMotion,
}

impl ThermalSample {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Both atoms scaled by the same factor. Scaling by `√(T′/T)` maps a draw
    /// at temperature T onto temperature T′.
    pub fn scaled(&self, position: f64, velocity: f64) -> Self {
        let s = |m: &AtomMotion| AtomMotion {
            displacement: m.displacement.map(|x| x * position),
            velocity: m.velocity.map(|v| v * velocity),
        };
        Self {
            control: s(&self.control),
            target: s(&self.target),
        }
    }
}

/// One normal deviate `σ√(−2 ln ξ₁) cos(2πξ₂)`.
pub fn box_muller<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    // ξ₁ ∈ (0, 1] keeps the logarithm finite.
    let xi1: f64 = 1.0 - rng.random::<f64>();
    let xi2: f64 = rng.random::<f64>();
    sigma * (-2.0 * xi1.ln()).sqrt() * (2.0 * PI * xi2).cos()
}

/// Draws both atoms from the thermal distribution of a tweezer whose axis is
/// `trap_axis`.
pub fn sample_thermal<R: Rng + ?Sized>(
    widths: &ThermalWidths,
    trap_axis: Axis,
    rng: &mut R,
) -> ThermalSample {
    let sigmas = widths.position_sigmas(trap_axis);
    let mut atom = || AtomMotion {
        displacement: sigmas.map(|s| box_muller(rng, s)),
        velocity: [0; 3].map(|_| box_muller(rng, widths.velocity)),
    };
    let control = atom();
    let target = atom();
    ThermalSample { control, target }
}
