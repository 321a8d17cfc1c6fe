//! State-selective readout with false positives (ε, ground read as Rydberg)
//! and false negatives (ε′, Rydberg read as ground).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::target_state;
use crate::error::{Error, Result};
use crate::hamiltonians::{pair, G0, G1, R};
use crate::linalg::DensityMatrix;

const LEVEL_OF: [usize; 3] = [G0, G1, R];

/// Simulated populations `P̃_jk` with `j, k ∈ {0, 1, r}` (control first).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawPopulations(pub [[f64; 3]; 3]);

impl RawPopulations {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let mut table = [[0.0; 3]; 3];
        for (j, row) in table.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                *cell = rho.population(pair(LEVEL_OF[j], LEVEL_OF[k]));
            }
        }
        Self(table)
    }

    pub fn get(&self, control: usize, target: usize) -> f64 {
        self.0[control][target]
    }
}

/// Read-out populations of `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasuredPopulations {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl MeasuredPopulations {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }
}

fn check(epsilon: f64, epsilon_prime: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) || !(0.0..1.0).contains(&epsilon_prime) {
        if epsilon == 1.0 {
            return Err(Error::NonInvertible { epsilon });
        }
        return Err(Error::InvalidParameter(format!(
            "detection errors must lie in [0, 1), got ε = {epsilon}, ε′ = {epsilon_prime}"
        )));
    }
    Ok(())
}

/// What the readout reports for a simulated population table.
pub fn detection_measure(
    raw: &RawPopulations,
    epsilon: f64,
    epsilon_prime: f64,
) -> Result<MeasuredPopulations> {
    check(epsilon, epsilon_prime)?;
    let (e, ep) = (epsilon, epsilon_prime);
    let p = |j, k| raw.get(j, k);
    Ok(MeasuredPopulations {
        p00: p(0, 0),
        p01: (1.0 - e) * p(0, 1) + ep * p(0, 2),
        p10: (1.0 - e) * p(1, 0) + ep * p(2, 0),
        p11: (1.0 - e).powi(2) * p(1, 1)
            + (1.0 - e) * ep * p(1, 2)
            + ep * (1.0 - e) * p(2, 1)
            + ep * ep * p(2, 2),
    })
}

/// Inverts [`detection_measure`], using the Rydberg entries of `raw` for the
/// cross terms. Returns `P̃₀₀, P̃₀₁, P̃₁₀, P̃₁₁`.
pub fn detection_correct(
    measured: &MeasuredPopulations,
    epsilon: f64,
    epsilon_prime: f64,
    raw: &RawPopulations,
) -> Result<[f64; 4]> {
    if epsilon >= 1.0 {
        return Err(Error::NonInvertible { epsilon });
    }
    check(epsilon, epsilon_prime)?;
    let (e, ep) = (epsilon, epsilon_prime);
    let p = |j, k| raw.get(j, k);
    let keep = 1.0 - e;
    Ok([
        measured.p00,
        (measured.p01 - ep * p(0, 2)) / keep,
        (measured.p10 - ep * p(2, 0)) / keep,
        (measured.p11 - keep * ep * (p(1, 2) + p(2, 1)) - ep * ep * p(2, 2)) / (keep * keep),
    ])
}

/// `|⟨Ψ_t|ψ_m⟩|²` for the read-out state `ψ_m` whose magnitudes come from the
/// measured populations and whose phases come from the coherences with `|00⟩`.
pub fn measured_fidelity(
    rho: &DensityMatrix,
    theta: f64,
    epsilon: f64,
    epsilon_prime: f64,
) -> Result<f64> {
    let measured = detection_measure(&RawPopulations::from_state(rho), epsilon, epsilon_prime)?;
    let reference = pair(G0, G0);
    let indices = [pair(G0, G0), pair(G0, G1), pair(G1, G0), pair(G1, G1)];
    let target = target_state(theta);
    let m = rho.matrix();
    let overlap: C64 = indices
        .iter()
        .zip(measured.as_array())
        .map(|(&i, pop)| {
            let coherence = if i == reference { C64::new(1.0, 0.0) } else { m[(i, reference)] };
            let phase = if coherence.norm() > 0.0 { coherence / coherence.norm() } else { C64::new(1.0, 0.0) };
            target.amplitudes()[i].conj() * phase * pop.max(0.0).sqrt()
        })
        .sum();
    Ok(overlap.norm_sqr())
}

/// Fidelity lost to readout: `F(0, 0) − F(ε, ε′)`.
pub fn detection_penalty(
    rho: &DensityMatrix,
    theta: f64,
    epsilon: f64,
    epsilon_prime: f64,
) -> Result<f64> {
    Ok(measured_fidelity(rho, theta, 0.0, 0.0)? - measured_fidelity(rho, theta, epsilon, epsilon_prime)?)
}
