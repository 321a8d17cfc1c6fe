//! Experimental imperfections: thermal motion, beam profiles, laser
//! fluctuations, dephasing and readout errors.

pub mod budget;
pub mod campaigns;
pub mod detection;
pub mod sensitivity;
pub mod thermal;
pub mod trap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{khz, mhz};

pub use budget::{error_budget, BudgetRow, ErrorBudget};
pub use campaigns::{
    run_doppler_mc, run_inhomogeneous_mc, run_scalar_fluctuation_mc, CampaignResult,
    ScalarChannel,
};
pub use detection::{
    detection_correct, detection_measure, detection_penalty, measured_fidelity,
    MeasuredPopulations, RawPopulations,
};
pub use sensitivity::{sensitivity_grid, SensitivityGrid};
pub use thermal::{sample_thermal, AtomMotion, Axis, ThermalSample, ThermalWidths, TrapParams};
pub use trap::{ionization_rate, trap_depth};

/// Where the atoms sit relative to the excitation beams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    /// One pair of beams per atom, atoms separated along x, tweezers along z.
    IndividualZ,
    /// A single wide beam pair centered between atoms separated along x.
    GlobalXSeparation,
    /// A single wide beam pair with the atoms separated along the beam axis;
    /// tweezers along x.
    GlobalZSeparation,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [
        Geometry::IndividualZ,
        Geometry::GlobalXSeparation,
        Geometry::GlobalZSeparation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::IndividualZ => "individual-z",
            Geometry::GlobalXSeparation => "global-x-separation",
            Geometry::GlobalZSeparation => "global-z-separation",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn default_separation(self) -> f64 {
        match self {
            Geometry::GlobalXSeparation => 3.6,
            _ => 5.5,
        }
    }

    pub fn default_waists(self) -> LegWaists {
        match self {
            Geometry::GlobalXSeparation => LegWaists {
                lower: 8.3,
                upper: 7.8,
            },
            _ => LegWaists {
                lower: 4.2,
                upper: 3.9,
            },
        }
    }

    pub fn trap_axis(self) -> Axis {
        match self {
            Geometry::GlobalZSeparation => Axis::X,
            _ => Axis::Z,
        }
    }

    /// Nominal atom positions in the beam frame (beams along z).
    pub fn positions(self, r: f64) -> [[f64; 3]; 2] {
        match self {
            Geometry::IndividualZ => [[0.0, 0.0, 0.0], [r, 0.0, 0.0]],
            Geometry::GlobalXSeparation => [[-0.5 * r, 0.0, 0.0], [0.5 * r, 0.0, 0.0]],
            Geometry::GlobalZSeparation => [[0.0, 0.0, -0.5 * r], [0.0, 0.0, 0.5 * r]],
        }
    }

    /// Focus of the beams addressing each atom.
    pub fn beam_centers(self, r: f64) -> [[f64; 3]; 2] {
        match self {
            Geometry::IndividualZ => self.positions(r),
            _ => [[0.0; 3]; 2],
        }
    }
}

/// 1/e² intensity radius of each excitation leg, μm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegWaists {
    pub lower: f64,
    pub upper: f64,
}

/// How a fluctuating laser parameter varies during one gate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseTiming {
    /// One draw held for the whole gate.
    #[default]
    QuasiStatic,
    /// Independent draws every `time` μs, linearly interpolated.
    Correlated { time: f64 },
}

/// Settings for every Monte Carlo campaign and the error budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    pub trials: usize,
    pub seed: u64,
    /// Integrator step, μs.
    pub dt: f64,
    /// Target phase of the gate being scored.
    pub theta: f64,
    pub geometry: Geometry,
    /// Interatomic separation, μm.
    pub separation: f64,
    pub waists: LegWaists,
    /// Spontaneous emission from |p⟩ and |r⟩.
    pub decay: bool,
    pub doppler: bool,
    pub inhomogeneous: bool,
    /// Standard deviation of the Rabi amplitude offsets, as a fraction of Ω₀
    /// on the lower leg and of Ω₂ on the upper leg.
    pub intensity_sigma: f64,
    /// Standard deviation of the two-photon detuning, rad/μs.
    pub detuning_sigma: f64,
    pub timing: NoiseTiming,
    /// Dephasing rates of the lower and upper legs, rad/μs.
    pub dephasing: [f64; 2],
    /// False-positive detection probabilities to report.
    pub detection_epsilons: Vec<f64>,
    /// False-negative detection probability.
    pub detection_epsilon_prime: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self::for_geometry(Geometry::IndividualZ)
    }
}

impl NoiseConfig {
    pub fn for_geometry(geometry: Geometry) -> Self {
        Self {
            trials: 100,
            seed: 2021,
            dt: crate::dynamics::DEFAULT_DT,
            theta: std::f64::consts::PI,
            geometry,
            separation: geometry.default_separation(),
            waists: geometry.default_waists(),
            decay: true,
            doppler: true,
            inhomogeneous: true,
            intensity_sigma: 0.05,
            detuning_sigma: khz(500.0),
            timing: NoiseTiming::default(),
            dephasing: [khz(10.0), khz(10.0)],
            detection_epsilons: vec![0.01, 0.03],
            detection_epsilon_prime: 0.0047,
        }
    }

    /// Every channel off.
    pub fn quiet() -> Self {
        Self {
            decay: false,
            doppler: false,
            inhomogeneous: false,
            intensity_sigma: 0.0,
            detuning_sigma: 0.0,
            dephasing: [0.0, 0.0],
            detection_epsilons: Vec::new(),
            detection_epsilon_prime: 0.0,
            ..Self::default()
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.trials == 0 {
            return bad("trial count must be at least 1");
        }
        if !(self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.separation > 0.0) {
            return bad("separation must be positive");
        }
        if !(self.waists.lower > 0.0 && self.waists.upper > 0.0) {
            return bad("beam waists must be positive");
        }
        if !(self.intensity_sigma >= 0.0 && self.detuning_sigma >= 0.0) {
            return bad("fluctuation widths must be nonnegative");
        }
        if self.dephasing.iter().any(|g| !(*g >= 0.0)) {
            return bad("dephasing rates must be nonnegative");
        }
        if let NoiseTiming::Correlated { time } = self.timing {
            if !(time > 0.0) {
                return bad("correlation time must be positive");
            }
        }
        let in_unit = |e: f64| (0.0..1.0).contains(&e);
        if !self.detection_epsilons.iter().all(|e| in_unit(*e)) || !in_unit(self.detection_epsilon_prime)
        {
            return bad("detection errors must lie in [0, 1)");
        }
        Ok(())
    }
}

/// Default two-photon detuning spread used by the sensitivity grid, rad/μs.
pub fn default_detuning_span() -> f64 {
    mhz(1.0)
}
