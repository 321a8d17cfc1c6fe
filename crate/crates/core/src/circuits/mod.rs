//! Small circuits built from the simulated gate: Max-Cut QAOA on a
//! three-vertex line and a three-qubit Fourier transform.
//!
//! Single-qubit gates are ideal. Every two-qubit interaction is either one
//! CZ_θ channel or, in the comparison scheme, two CZ channels dressed with
//! Hadamards and a Z rotation.

pub mod channel;
pub mod optimize;
pub mod ops;
pub mod qaoa;
pub mod qft;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use channel::{calibrated_gate, extract_channel, params_hash, TwoQubitChannel};
pub use ops::{CircuitState, Distribution};
pub use optimize::{nelder_mead, NelderMeadOptions, Minimum};
pub use qaoa::{maxcut_qaoa, optimize_angles, MaxCutResult, OptimizedAngles, OptimizerBudget};
pub use qft::{qft3, qft_input, qft_reference, QftResult};

/// How a two-qubit phase is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoQubitScheme {
    /// One CZ_θ with the needed angle.
    CzTheta,
    /// Two CZ gates around a Z rotation on the second qubit.
    CzDecomposition,
}

/// Where circuits get their two-qubit channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChannelSet {
    /// Noiseless CZ_θ for any θ.
    Ideal,
    /// Precomputed channels, looked up by θ.
    Table(Vec<TwoQubitChannel>),
}

impl ChannelSet {
    pub fn get(&self, theta: f64) -> Result<TwoQubitChannel> {
        match self {
            ChannelSet::Ideal => Ok(TwoQubitChannel::ideal(theta)),
            ChannelSet::Table(channels) => channels
                .iter()
                .find(|c| (c.theta - theta).abs() < 1e-9)
                .cloned()
                .ok_or(Error::MissingChannel { theta }),
        }
    }
}

/// Peak amplitude of the CZ channel used by the decomposition scheme, MHz.
pub const CZ_OMEGA0_MHZ: f64 = 160.0;

/// Two-qubit gates a Max-Cut circuit needs, as `(θ, Ω₀/2π in MHz)`. Each
/// CZ_{2γ} runs at 140 MHz, which keeps every layer in a well calibrated
/// window even when 2γ exceeds π.
pub fn maxcut_gate_plan(gammas: &[f64], scheme: TwoQubitScheme) -> Vec<(f64, f64)> {
    match scheme {
        TwoQubitScheme::CzTheta => gammas.iter().map(|g| (2.0 * g, 140.0)).collect(),
        TwoQubitScheme::CzDecomposition => vec![(std::f64::consts::PI, CZ_OMEGA0_MHZ)],
    }
}

/// Two-qubit gates the Fourier transform needs: CZ_{−π/2} at 120 MHz and
/// CZ_{−π/4} at 100 MHz, the fastest rows whose windows hold those phases.
pub fn qft_gate_plan(scheme: TwoQubitScheme) -> Vec<(f64, f64)> {
    match scheme {
        TwoQubitScheme::CzTheta => vec![(-qft::QFT_PHASES[0], 120.0), (-qft::QFT_PHASES[1], 100.0)],
        TwoQubitScheme::CzDecomposition => vec![(std::f64::consts::PI, CZ_OMEGA0_MHZ)],
    }
}

/// Extracts every channel in `plan` from `base` moved to the planned peak
/// amplitude and calibrated for each θ.
pub fn build_channels(
    base: &crate::hamiltonians::GateParams,
    plan: &[(f64, f64)],
    decay: bool,
    dt: f64,
) -> Result<ChannelSet> {
    let channels = plan
        .iter()
        .map(|&(theta, omega0_mhz)| {
            let params = calibrated_gate(&base.clone().with_omega0(crate::units::mhz(omega0_mhz)), theta)?;
            extract_channel(&params, theta, decay, dt)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelSet::Table(channels))
}
