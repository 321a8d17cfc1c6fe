//! Scenario files and their resolution into concrete simulation settings.
//!
//! A scenario is a TOML file; every field is optional and falls back to the
//! baseline gate. Command-line flags are applied on top and always win.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use rydberg_cz::calibration::solve_width;
use rydberg_cz::circuits::qaoa::reference_angles;
use rydberg_cz::circuits::TwoQubitScheme;
use rydberg_cz::dynamics::DEFAULT_DT;
use rydberg_cz::hamiltonians::{GateParams, SpeciesParams};
use rydberg_cz::noise::{Geometry, NoiseConfig, NoiseTiming, TrapParams};
use rydberg_cz::pulses::PulseEnvelope;
use rydberg_cz::units::{parse_angle, parse_frequency, parse_temperature};

/// A number, or text with a unit. Bare numbers are MHz for frequencies,
/// radians for angles and μK for temperatures.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    fn text(&self) -> String {
        match self {
            Quantity::Number(x) => x.to_string(),
            Quantity::Text(s) => s.clone(),
        }
    }

    fn frequency(&self, what: &str) -> Result<f64> {
        parse_frequency(&self.text()).ok_or_else(|| anyhow!("{what}: cannot read {:?} as a frequency", self.text()))
    }

    fn angle(&self, what: &str) -> Result<f64> {
        parse_angle(&self.text()).ok_or_else(|| anyhow!("{what}: cannot read {:?} as an angle", self.text()))
    }

    fn temperature(&self, what: &str) -> Result<f64> {
        parse_temperature(&self.text())
            .ok_or_else(|| anyhow!("{what}: cannot read {:?} as a temperature", self.text()))
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub species: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub gate: GateSection,
    pub pulse: PulseSection,
    pub noise: NoiseSection,
    pub circuit: CircuitSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateSection {
    pub theta: Option<Quantity>,
    pub omega0: Option<Quantity>,
    pub omega2: Option<Quantity>,
    pub delta: Option<Quantity>,
    pub u_rr: Option<Quantity>,
    pub separation: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    pub shape: Option<PulseShape>,
    pub width: Option<f64>,
    pub step: Option<f64>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub trials: Option<usize>,
    pub geometry: Option<String>,
    pub temperature: Option<Quantity>,
    pub separation: Option<f64>,
    pub intensity_sigma: Option<f64>,
    pub detuning_sigma: Option<Quantity>,
    pub dephasing: Option<[Quantity; 2]>,
    pub correlation_time: Option<f64>,
    pub detection_epsilons: Option<Vec<f64>>,
    pub detection_epsilon_prime: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitSection {
    pub gammas: Option<Vec<Quantity>>,
    pub betas: Option<Vec<Quantity>>,
    pub decay: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PulseShape {
    Gaussian,
    Corrected,
    Staircase,
    SuperGaussian,
    SigmoidCosine,
}

/// Flags that override scenario values.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory [default: $RYDBERG_CZ_OUT, else ./rydberg-cz-out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Integrator step, μs.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Atomic species preset: rb87 or cs133.
    #[arg(long, global = true)]
    pub species: Option<String>,
    /// Target phase: pi, 0.5pi, -pi/4 or radians.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Peak lower-leg Rabi frequency, e.g. 160MHz (means 2π·160 rad/μs).
    #[arg(long, global = true)]
    pub omega0: Option<String>,
    /// Upper-leg Rabi frequency, e.g. 200MHz.
    #[arg(long, global = true)]
    pub omega2: Option<String>,
    /// Intermediate detuning, e.g. 1GHz.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Blockade shift, e.g. 2GHz.
    #[arg(long, global = true)]
    pub u_rr: Option<String>,
    /// Interatomic separation, μm.
    #[arg(long, global = true)]
    pub separation: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub pulse: Option<PulseShape>,
    /// Monte Carlo trials per noise campaign.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Atom temperature, e.g. 5.2uK.
    #[arg(long, global = true)]
    pub temp: Option<String>,
    /// Beam geometry: individual-z, global-x-separation or global-z-separation.
    #[arg(long, global = true)]
    pub geometry: Option<String>,
    /// Pulse width in μs; calibrated for θ when absent.
    #[arg(long, global = true)]
    pub width: Option<f64>,
}

/// Pulse choice before calibration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// Fixed width, μs. `None` means "calibrate for θ".
    pub width: Option<f64>,
    /// Staircase step, μs.
    pub step: f64,
    /// Staircase step count.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitSpec {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub decay: bool,
}

/// Every setting a command may use, with units resolved to rad/μs, μs, μm
/// and μK. This is what output files embed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub seed: u64,
    pub dt: f64,
    pub theta: f64,
    pub omega0: f64,
    pub omega2: f64,
    /// Magnitude is kept; the sign follows θ when the pulse is calibrated.
    pub delta: f64,
    pub u_rr: f64,
    pub separation: f64,
    pub species: SpeciesParams,
    pub pulse: PulseSpec,
    pub noise: NoiseConfig,
    pub trap: TrapParams,
    pub circuit: CircuitSpec,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

pub const OUTPUT_ENV: &str = "RYDBERG_CZ_OUT";
const DEFAULT_OUTPUT: &str = "rydberg-cz-out";

pub fn load(overrides: &Overrides) -> Result<Scenario> {
    let file = match &overrides.scenario {
        Some(path) => read_file(path)?,
        None => ScenarioFile::default(),
    };
    resolve(file, overrides)
}

pub fn read_file(path: &Path) -> Result<ScenarioFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn resolve(file: ScenarioFile, o: &Overrides) -> Result<Scenario> {
    let base = GateParams::baseline();
    let freq = |flag: &Option<String>, field: &Option<Quantity>, what: &str, default: f64| -> Result<f64> {
        match (flag, field) {
            (Some(text), _) => Quantity::Text(text.clone()).frequency(what),
            (None, Some(q)) => q.frequency(what),
            (None, None) => Ok(default),
        }
    };
    let species_name = o.species.clone().or(file.species).unwrap_or_else(|| "rb87".into());
    let species = SpeciesParams::preset(&species_name)
        .ok_or_else(|| anyhow!("unknown species {species_name:?}; known presets are rb87 and cs133"))?;

    let g = &file.gate;
    let theta = match (&o.theta, &g.theta) {
        (Some(text), _) => Quantity::Text(text.clone()).angle("--theta")?,
        (None, Some(q)) => q.angle("gate.theta")?,
        (None, None) => std::f64::consts::PI,
    };
    let omega0 = freq(&o.omega0, &g.omega0, "omega0", base.omega0())?;
    let omega2 = freq(&o.omega2, &g.omega2, "omega2", base.omega2)?;
    let delta = freq(&o.delta, &g.delta, "delta", base.delta)?.abs();
    let u_rr = freq(&o.u_rr, &g.u_rr, "u_rr", base.u_rr)?;
    let separation = o.separation.or(g.separation).unwrap_or(base.separation);

    let p = &file.pulse;
    let pulse = PulseSpec {
        shape: o.pulse.or(p.shape).unwrap_or(PulseShape::Gaussian),
        width: o.width.or(p.width),
        step: p.step.unwrap_or(0.02),
        count: p.count.unwrap_or(31),
    };

    let n = &file.noise;
    let geometry = match o.geometry.as_ref().or(n.geometry.as_ref()) {
        Some(name) => Geometry::parse(name).ok_or_else(|| {
            let known: Vec<_> = Geometry::ALL.iter().map(|g| g.name()).collect();
            anyhow!("unknown geometry {name:?}; expected one of {}", known.join(", "))
        })?,
        None => Geometry::IndividualZ,
    };
    let defaults = NoiseConfig::for_geometry(geometry);
    let seed = o.seed.or(file.seed).unwrap_or(defaults.seed);
    let dt = o.dt.or(file.dt).unwrap_or(DEFAULT_DT);
    let mut noise = NoiseConfig {
        trials: o.trials.or(n.trials).unwrap_or(defaults.trials),
        seed,
        dt,
        theta,
        separation: n.separation.unwrap_or(defaults.separation),
        intensity_sigma: n.intensity_sigma.unwrap_or(defaults.intensity_sigma),
        detection_epsilons: n.detection_epsilons.clone().unwrap_or(defaults.detection_epsilons.clone()),
        detection_epsilon_prime: n.detection_epsilon_prime.unwrap_or(defaults.detection_epsilon_prime),
        ..defaults
    };
    if let Some(q) = &n.detuning_sigma {
        noise.detuning_sigma = q.frequency("noise.detuning_sigma")?;
    }
    if let Some([a, b]) = &n.dephasing {
        noise.dephasing = [a.frequency("noise.dephasing")?, b.frequency("noise.dephasing")?];
    }
    if let Some(time) = n.correlation_time {
        noise.timing = NoiseTiming::Correlated { time };
    }
    let mut trap = TrapParams::default();
    let temperature = match (&o.temp, &n.temperature) {
        (Some(text), _) => Some(Quantity::Text(text.clone()).temperature("--temp")?),
        (None, Some(q)) => Some(q.temperature("noise.temperature")?),
        (None, None) => None,
    };
    if let Some(t) = temperature {
        trap = trap.at_temperature(t);
    }

    let c = &file.circuit;
    let (ref_gammas, ref_betas) = reference_angles();
    let angles = |list: &Option<Vec<Quantity>>, fallback: [f64; 2], what: &str| -> Result<Vec<f64>> {
        match list {
            Some(qs) => qs.iter().map(|q| q.angle(what)).collect(),
            None => Ok(fallback.to_vec()),
        }
    };
    let circuit = CircuitSpec {
        gammas: angles(&c.gammas, ref_gammas, "circuit.gammas")?,
        betas: angles(&c.betas, ref_betas, "circuit.betas")?,
        decay: c.decay.unwrap_or(true),
    };

    let output_dir = o
        .out
        .clone()
        .or(file.output_dir)
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));

    let scenario = Scenario {
        seed,
        dt,
        theta,
        omega0,
        omega2,
        delta,
        u_rr,
        separation,
        species,
        pulse,
        noise,
        trap,
        circuit,
        output_dir,
    };
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("omega0", self.omega0),
            ("omega2", self.omega2),
            ("delta", self.delta),
            ("separation", self.separation),
            ("pulse.step", self.pulse.step),
            ("noise.temperature", self.trap.temperature),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                bail!("{name} must be positive, got {value}");
            }
        }
        if let Some(w) = self.pulse.width {
            if !(w > 0.0) {
                bail!("pulse.width must be positive, got {w}");
            }
        }
        if self.pulse.count == 0 {
            bail!("pulse.count must be at least 1");
        }
        if self.circuit.gammas.len() != self.circuit.betas.len() || self.circuit.gammas.is_empty() {
            bail!("circuit.gammas and circuit.betas must be nonempty and of equal length");
        }
        self.noise.validate()?;
        Ok(())
    }

    /// Gate parameters with peak `omega0` and a placeholder width, Δ signed
    /// like θ.
    fn unshaped(&self, omega0: f64, theta: f64) -> GateParams {
        let width = self.pulse.width.unwrap_or(0.157);
        let pulse = match self.pulse.shape {
            PulseShape::Gaussian | PulseShape::Staircase => PulseEnvelope::gaussian(omega0, width),
            PulseShape::Corrected => PulseEnvelope::corrected_gaussian(omega0, width),
            PulseShape::SuperGaussian => PulseEnvelope::super_gaussian(omega0, width),
            PulseShape::SigmoidCosine => PulseEnvelope::sigmoid_cosine(omega0, width),
        };
        GateParams {
            omega2: self.omega2,
            delta: self.delta * if theta < 0.0 { -1.0 } else { 1.0 },
            u_rr: self.u_rr,
            pulse,
            separation: self.separation,
            species: self.species.clone(),
        }
    }

    /// Gate parameters for `theta` at peak `omega0`, calibrating the width
    /// unless the scenario fixes it. A staircase samples the calibrated
    /// Gaussian.
    pub fn gate_at(&self, omega0: f64, theta: f64) -> rydberg_cz::Result<GateParams> {
        let mut params = self.unshaped(omega0, theta);
        if self.pulse.width.is_none() {
            let width = solve_width(theta, &params)?;
            params = params.with_width(width);
        }
        if self.pulse.shape == PulseShape::Staircase {
            let base = params.pulse.clone();
            params = params.with_pulse(PulseEnvelope::staircase(base, self.pulse.step, self.pulse.count));
        }
        params.validate()?;
        Ok(params)
    }

    pub fn gate(&self) -> rydberg_cz::Result<GateParams> {
        self.gate_at(self.omega0, self.theta)
    }

    /// The scenario's gate before calibration, used as the base for circuit
    /// channels.
    pub fn base_gate(&self) -> GateParams {
        self.unshaped(self.omega0, 1.0)
    }
}

pub fn schemes(choice: SchemeChoice) -> Vec<TwoQubitScheme> {
    match choice {
        SchemeChoice::CzTheta => vec![TwoQubitScheme::CzTheta],
        SchemeChoice::CzDecomposition => vec![TwoQubitScheme::CzDecomposition],
        SchemeChoice::Both => vec![TwoQubitScheme::CzTheta, TwoQubitScheme::CzDecomposition],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SchemeChoice {
    CzTheta,
    CzDecomposition,
    Both,
}
