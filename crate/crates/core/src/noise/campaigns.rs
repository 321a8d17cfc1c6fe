//! Monte Carlo campaigns. Every trial owns a ChaCha stream selected by its
//! index, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{build_jumps, run_model, stable_step, LindbladModel};
use crate::error::{Error, Result};
use crate::hamiltonians::{
    h_detuned, h_doppler, h_full, h_intensity_noise, rabi_at_position, two_atom_hamiltonian, AtomDrive,
    GateParams, DIM, MIN_SEPARATION,
};
use crate::noise::thermal::{box_muller, sample_thermal, Axis, ThermalSample, ThermalWidths, TrapParams};
use crate::noise::{Geometry, NoiseConfig, NoiseTiming};

/// Outcome of one campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub channel: String,
    /// Noise-free fidelity the trials are compared against.
    pub baseline: f64,
    pub fidelities: Vec<f64>,
    pub mean_fidelity: f64,
    /// `baseline − mean_fidelity`; negative when the noise happens to help.
    pub mean_error: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    /// Thermal draws rejected because the atoms came too close.
    pub collisions_resampled: usize,
}

impl CampaignResult {
    fn new(channel: &str, baseline: f64, fidelities: Vec<f64>, collisions: usize) -> Self {
        let n = fidelities.len() as f64;
        let mean = fidelities.iter().sum::<f64>() / n;
        let var = if fidelities.len() > 1 {
            fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            channel: channel.into(),
            baseline,
            mean_fidelity: mean,
            mean_error: baseline - mean,
            std_error: (var / n).sqrt(),
            fidelities,
            collisions_resampled: collisions,
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trials<T: Send>(
    config: &NoiseConfig,
    trial: impl Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|k| trial(&mut trial_rng(config.seed, k)))
        .collect()
}

fn dissipative(params: &GateParams, hamiltonian: impl Fn(f64) -> Result<crate::linalg::ComplexMatrix> + Send + Sync + 'static) -> LindbladModel {
    LindbladModel::new(DIM, hamiltonian).with_jumps(build_jumps(&params.species))
}

fn fidelity_of(model: &LindbladModel, params: &GateParams, config: &NoiseConfig) -> Result<f64> {
    Ok(run_model(model, params.gate_time(), config.theta, config.dt)?.fidelity)
}

/// Closest approach of the two atoms during the gate, for straight-line motion.
fn closest_approach(params: &GateParams, sample: &ThermalSample) -> f64 {
    let a = sample.control.position_at([0.0; 3], 0.0);
    let b = sample.target.position_at([params.separation, 0.0, 0.0], 0.0);
    let d0: Vec<f64> = (0..3).map(|k| b[k] - a[k]).collect();
    let v: Vec<f64> = (0..3)
        .map(|k| sample.target.velocity[k] - sample.control.velocity[k])
        .collect();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let t = if vv > 0.0 {
        (-(0..3).map(|k| d0[k] * v[k]).sum::<f64>() / vv).clamp(0.0, params.gate_time())
    } else {
        0.0
    };
    (0..3).map(|k| (d0[k] + v[k] * t).powi(2)).sum::<f64>().sqrt()
}

fn doppler_model(params: &GateParams, sample: ThermalSample) -> LindbladModel {
    let p = params.clone();
    dissipative(params, move |t| h_doppler(&p, &sample, t))
}

/// Runs one thermal draw with a step short enough for the strongest blockade
/// shift it reaches.
fn doppler_fidelity(params: &GateParams, sample: ThermalSample, config: &NoiseConfig) -> Result<f64> {
    let closest = GateParams {
        u_rr: params.species.blockade_shift(closest_approach(params, &sample))?,
        ..params.clone()
    };
    let dt = stable_step(&h_full(&closest, 0.5 * params.gate_time())?, config.dt)?;
    Ok(run_model(&doppler_model(params, sample), params.gate_time(), config.theta, dt)?.fidelity)
}

/// Thermal motion of both atoms: Doppler phases on each leg plus the van der
/// Waals shift following the instantaneous separation. The baseline is the
/// same model with the atoms at rest on their sites.
pub fn run_doppler_mc(
    params: &GateParams,
    trap: &TrapParams,
    config: &NoiseConfig,
) -> Result<CampaignResult> {
    if config.trials < 2 {
        return Err(Error::InvalidParameter("a campaign needs at least two trials".into()));
    }
    let params = GateParams {
        separation: config.separation,
        ..params.clone()
    };
    let widths = ThermalWidths::new(trap, &params.species);
    let baseline = doppler_fidelity(&params, ThermalSample::zero(), config)?;
    let runs = run_trials(config, |rng| {
        let mut collisions = 0;
        let sample = loop {
            let s = sample_thermal(&widths, Axis::Z, rng);
            if closest_approach(&params, &s) >= MIN_SEPARATION {
                break s;
            }
            collisions += 1;
        };
        let f = doppler_fidelity(&params, sample, config)?;
        Ok((f, collisions))
    })?;
    let collisions = runs.iter().map(|r| r.1).sum();
    let fidelities = runs.into_iter().map(|r| r.0).collect();
    Ok(CampaignResult::new("doppler", baseline, fidelities, collisions))
}

/// Per-atom, per-leg Rabi scale factors for static displacements, normalized
/// so that an atom on its nominal site sees the nominal amplitude.
fn rabi_factors(
    params: &GateParams,
    config: &NoiseConfig,
    geometry: Geometry,
    sample: &ThermalSample,
) -> [[f64; 2]; 2] {
    let r = config.separation;
    let nominal = geometry.positions(r);
    let centers = geometry.beam_centers(r);
    let sp = &params.species;
    let legs = [
        (config.waists.lower, 2.0 * std::f64::consts::PI / sp.k1z),
        (config.waists.upper, 2.0 * std::f64::consts::PI / sp.k2z),
    ];
    let atoms = [&sample.control, &sample.target];
    let mut out = [[1.0; 2]; 2];
    for a in 0..2 {
        let rel = |p: [f64; 3]| [0, 1, 2].map(|k| p[k] - centers[a][k]);
        let actual = rel(atoms[a].position_at(nominal[a], 0.0));
        let reference = rel(nominal[a]);
        for (leg, &(w, lambda)) in legs.iter().enumerate() {
            out[a][leg] = rabi_at_position(1.0, actual, (w, w), lambda)
                / rabi_at_position(1.0, reference, (w, w), lambda);
        }
    }
    out
}

fn scaled_model(params: &GateParams, factors: [[f64; 2]; 2]) -> LindbladModel {
    let p = params.clone();
    dissipative(params, move |t| {
        let omega1 = p.pulse.evaluate(t)?;
        let drive =
            |f: [f64; 2]| AtomDrive::real(omega1 * f[0], p.omega2 * f[1], p.delta);
        Ok(two_atom_hamiltonian(&drive(factors[0]), &drive(factors[1]), p.u_rr))
    })
}

/// Static thermal displacements inside Gaussian excitation beams.
pub fn run_inhomogeneous_mc(
    params: &GateParams,
    trap: &TrapParams,
    geometry: Geometry,
    config: &NoiseConfig,
) -> Result<CampaignResult> {
    let widths = ThermalWidths::new(trap, &params.species);
    let baseline = fidelity_of(&scaled_model(params, [[1.0; 2]; 2]), params, config)?;
    let fidelities = run_trials(config, |rng| {
        let sample = sample_thermal(&widths, geometry.trap_axis(), rng);
        let factors = rabi_factors(params, config, geometry, &sample);
        fidelity_of(&scaled_model(params, factors), params, config)
    })?;
    Ok(CampaignResult::new(
        &format!("inhomogeneous/{}", geometry.name()),
        baseline,
        fidelities,
        0,
    ))
}

/// Laser parameter that fluctuates from shot to shot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarChannel {
    /// Rabi amplitude offsets on each leg, shared by both atoms.
    Intensity,
    /// Two-photon detuning noise, shared by both atoms.
    Detuning,
}

/// Zero-mean Gaussian process sampled at knots and linearly interpolated.
#[derive(Clone, Debug)]
struct NoiseTrace {
    spacing: f64,
    knots: Vec<f64>,
}

impl NoiseTrace {
    fn sample(rng: &mut ChaCha8Rng, sigma: f64, timing: NoiseTiming, duration: f64) -> Self {
        match timing {
            NoiseTiming::QuasiStatic => Self {
                spacing: f64::INFINITY,
                knots: vec![box_muller(rng, sigma)],
            },
            NoiseTiming::Correlated { time } => {
                let n = (duration / time).ceil() as usize + 2;
                Self {
                    spacing: time,
                    knots: (0..n).map(|_| box_muller(rng, sigma)).collect(),
                }
            }
        }
    }

    fn at(&self, t: f64) -> f64 {
        if self.knots.len() == 1 {
            return self.knots[0];
        }
        let x = (t / self.spacing).max(0.0);
        let k = (x.floor() as usize).min(self.knots.len() - 2);
        let frac = x - k as f64;
        self.knots[k] * (1.0 - frac) + self.knots[k + 1] * frac
    }
}

/// Intensity or detuning noise with standard deviation `sigma` (a fraction
/// of Ω₀ and Ω₂ for intensity, rad/μs for detuning). Intensity offsets are
/// added to the amplitudes, so the lower leg's offset does not follow the
/// pulse envelope. `config.timing` picks whether a trial
/// holds one draw or a fresh draw every correlation time.
pub fn run_scalar_fluctuation_mc(
    params: &GateParams,
    channel: ScalarChannel,
    sigma: f64,
    config: &NoiseConfig,
) -> Result<CampaignResult> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter("σ must be nonnegative".into()));
    }
    let gate_time = params.gate_time();
    let model_for = |traces: Vec<NoiseTrace>| -> LindbladModel {
        let p = params.clone();
        match channel {
            ScalarChannel::Intensity => dissipative(params, move |t| {
                let peak = p.pulse.peak();
                h_intensity_noise(&p, peak * traces[0].at(t), p.omega2 * traces[1].at(t), t)
            }),
            ScalarChannel::Detuning => {
                dissipative(params, move |t| h_detuned(&p, traces[0].at(t), t))
            }
        }
    };
    let legs = match channel {
        ScalarChannel::Intensity => 2,
        ScalarChannel::Detuning => 1,
    };
    let silent = (0..legs)
        .map(|_| NoiseTrace {
            spacing: f64::INFINITY,
            knots: vec![0.0],
        })
        .collect();
    let baseline = fidelity_of(&model_for(silent), params, config)?;
    let fidelities = run_trials(config, |rng| {
        let traces = (0..legs)
            .map(|_| NoiseTrace::sample(rng, sigma, config.timing, gate_time))
            .collect();
        fidelity_of(&model_for(traces), params, config)
    })?;
    let name = match channel {
        ScalarChannel::Intensity => "intensity",
        ScalarChannel::Detuning => "detuning",
    };
    Ok(CampaignResult::new(name, baseline, fidelities, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::simulate_gate;
    use std::f64::consts::PI;

    fn quick() -> NoiseConfig {
        NoiseConfig {
            trials: 2,
            dt: 1e-4,
            ..NoiseConfig::default()
        }
    }

    #[test]
    fn statistics() {
        let r = CampaignResult::new("x", 1.0, vec![0.9, 0.8, 0.7], 0);
        assert!((r.mean_fidelity - 0.8).abs() < 1e-15);
        assert!((r.mean_error - 0.2).abs() < 1e-15);
        assert!((r.std_error - 0.1 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trace_interpolates_between_knots() {
        let trace = NoiseTrace {
            spacing: 0.5,
            knots: vec![0.0, 1.0, -1.0],
        };
        assert_eq!(trace.at(0.25), 0.5);
        assert_eq!(trace.at(0.75), 0.0);
        assert_eq!(trace.at(1.0), -1.0);
    }

    #[test]
    fn zero_sigma_reproduces_baseline() {
        let params = GateParams::baseline();
        let config = quick();
        let direct = simulate_gate(&params, PI, true, config.dt).unwrap().fidelity;
        for channel in [ScalarChannel::Intensity, ScalarChannel::Detuning] {
            let r = run_scalar_fluctuation_mc(&params, channel, 0.0, &config).unwrap();
            assert!((r.baseline - direct).abs() < 1e-12);
            for f in r.fidelities {
                assert!((f - direct).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cold_atoms_match_resting_baseline() {
        let params = GateParams::baseline();
        let trap = TrapParams::default().at_temperature(0.0);
        let r = run_doppler_mc(&params, &trap, &quick()).unwrap();
        assert!(r.mean_error.abs() < 1e-6);
        let r = run_inhomogeneous_mc(&params, &trap, Geometry::GlobalZSeparation, &quick()).unwrap();
        assert!(r.mean_error.abs() < 1e-6);
    }

    #[test]
    fn infinite_waists_are_homogeneous() {
        let params = GateParams::baseline();
        let mut config = quick();
        config.waists.lower = 1e9;
        config.waists.upper = 1e9;
        let r = run_inhomogeneous_mc(&params, &TrapParams::default(), Geometry::IndividualZ, &config)
            .unwrap();
        assert!(r.mean_error.abs() < 1e-6);
    }

    #[test]
    fn seeded_campaign_is_reproducible() {
        let params = GateParams::baseline();
        let a = run_scalar_fluctuation_mc(&params, ScalarChannel::Intensity, 0.05, &quick()).unwrap();
        let b = run_scalar_fluctuation_mc(&params, ScalarChannel::Intensity, 0.05, &quick()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.fidelities[0], a.fidelities[1]);
    }

    #[test]
    fn single_trial_doppler_is_refused() {
        let config = NoiseConfig {
            trials: 1,
            ..quick()
        };
        assert!(run_doppler_mc(&GateParams::baseline(), &TrapParams::default(), &config).is_err());
    }

    #[test]
    fn factors_are_one_on_site() {
        let params = GateParams::baseline();
        let config = NoiseConfig::for_geometry(Geometry::GlobalXSeparation);
        let f = rabi_factors(&params, &config, Geometry::GlobalXSeparation, &ThermalSample::zero());
        for row in f {
            for x in row {
                assert!((x - 1.0).abs() < 1e-15);
            }
        }
    }
}
