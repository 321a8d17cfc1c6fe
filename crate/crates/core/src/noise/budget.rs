//! Additive error budget: each channel's fidelity loss measured on its own,
//! summed against the decay-free gate.

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, initial_state, gate_fidelity, LindbladModel};
use crate::error::{Error, Result};
use crate::hamiltonians::GateParams;
use crate::linalg::DensityMatrix;
use crate::noise::campaigns::{
    run_doppler_mc, run_inhomogeneous_mc, run_scalar_fluctuation_mc, CampaignResult,
    ScalarChannel,
};
use crate::noise::detection::detection_penalty;
use crate::noise::thermal::TrapParams;
use crate::noise::NoiseConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub channel: String,
    /// Fidelity lost to this channel alone (signed).
    pub error: f64,
    /// Statistical error of `error`; zero for deterministic rows.
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRow {
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub penalty: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Decay-free gate fidelity every row is measured against.
    pub ideal_fidelity: f64,
    pub rows: Vec<BudgetRow>,
    /// `ideal_fidelity − Σ errors`.
    pub combined: f64,
    pub combined_std_error: f64,
    pub detection: Vec<DetectionRow>,
    pub campaigns: Vec<CampaignResult>,
    pub config: NoiseConfig,
}

impl ErrorBudget {
    pub fn row(&self, channel: &str) -> Option<&BudgetRow> {
        self.rows.iter().find(|r| r.channel == channel)
    }

    /// `channel,error,std_error` followed by the combined line and one line
    /// per detection setting.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        writer.write_record(["channel", "error", "std_error", "fidelity"]).map_err(io)?;
        writer
            .write_record(["ideal", "0", "0", &format!("{:.6}", self.ideal_fidelity)])
            .map_err(io)?;
        for row in &self.rows {
            writer
                .write_record([
                    row.channel.clone(),
                    format!("{:.6}", row.error),
                    format!("{:.6}", row.std_error),
                    String::new(),
                ])
                .map_err(io)?;
        }
        writer
            .write_record([
                "combined".to_string(),
                format!("{:.6}", self.ideal_fidelity - self.combined),
                format!("{:.6}", self.combined_std_error),
                format!("{:.6}", self.combined),
            ])
            .map_err(io)?;
        for d in &self.detection {
            writer
                .write_record([
                    format!("detection eps={}", d.epsilon),
                    format!("{:.6}", d.penalty),
                    "0".to_string(),
                    format!("{:.6}", d.fidelity),
                ])
                .map_err(io)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn final_state(model: &LindbladModel, params: &GateParams, dt: f64) -> Result<DensityMatrix> {
    let rho0 = DensityMatrix::from_pure(&initial_state());
    Ok(evolve(&rho0, model, params.gate_time(), dt)?.final_state().clone())
}

fn deterministic(channel: &str, error: f64) -> BudgetRow {
    BudgetRow {
        channel: channel.into(),
        error,
        std_error: 0.0,
    }
}

fn from_campaign(channel: &str, c: &CampaignResult) -> BudgetRow {
    BudgetRow {
        channel: channel.into(),
        error: c.mean_error,
        std_error: c.std_error,
    }
}

/// Runs every enabled channel. Monte Carlo rows compare against the gate with
/// spontaneous emission on, since that is how they are simulated.
pub fn error_budget(
    params: &GateParams,
    trap: &TrapParams,
    config: &NoiseConfig,
) -> Result<ErrorBudget> {
    config.validate()?;
    let theta = config.theta;
    let ideal_state = final_state(&LindbladModel::for_gate(params, false), params, config.dt)?;
    let ideal = gate_fidelity(&ideal_state, theta);
    let dissipative_model = LindbladModel::for_gate(params, true);
    let dissipative_state = final_state(&dissipative_model, params, config.dt)?;
    let dissipative = gate_fidelity(&dissipative_state, theta);

    let mut rows = Vec::new();
    let mut campaigns = Vec::new();
    if config.decay {
        rows.push(deterministic("spontaneous emission", ideal - dissipative));
    }
    if config.doppler {
        let c = run_doppler_mc(params, trap, config)?;
        rows.push(from_campaign("doppler and vdW fluctuation", &c));
        campaigns.push(c);
    }
    if config.inhomogeneous {
        let c = run_inhomogeneous_mc(params, trap, config.geometry, config)?;
        rows.push(from_campaign("inhomogeneous Rabi frequency", &c));
        campaigns.push(c);
    }
    if config.intensity_sigma > 0.0 {
        let c = run_scalar_fluctuation_mc(params, ScalarChannel::Intensity, config.intensity_sigma, config)?;
        rows.push(from_campaign("Rabi frequency fluctuation", &c));
        campaigns.push(c);
    }
    if config.dephasing.iter().any(|g| *g > 0.0) {
        let model = LindbladModel::for_gate(params, true).add_dephasing(config.dephasing[0], config.dephasing[1]);
        let f = gate_fidelity(&final_state(&model, params, config.dt)?, theta);
        rows.push(deterministic("laser dephasing", dissipative - f));
    }
    if config.detuning_sigma > 0.0 {
        let c = run_scalar_fluctuation_mc(params, ScalarChannel::Detuning, config.detuning_sigma, config)?;
        rows.push(from_campaign("detuning fluctuation", &c));
        campaigns.push(c);
    }

    let total: f64 = rows.iter().map(|r| r.error).sum();
    let combined = ideal - total;
    let combined_std_error = rows.iter().map(|r| r.std_error.powi(2)).sum::<f64>().sqrt();
    let scored = if config.decay { &dissipative_state } else { &ideal_state };
    let detection = config
        .detection_epsilons
        .iter()
        .map(|&epsilon| {
            let penalty = detection_penalty(scored, theta, epsilon, config.detection_epsilon_prime)?;
            Ok(DetectionRow {
                epsilon,
                epsilon_prime: config.detection_epsilon_prime,
                penalty,
                fidelity: combined - penalty,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorBudget {
        ideal_fidelity: ideal,
        rows,
        combined,
        combined_std_error,
        detection,
        campaigns,
        config: config.clone(),
    })
}
