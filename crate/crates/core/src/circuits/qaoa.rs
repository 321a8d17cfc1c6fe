//! QAOA for Max-Cut on the line graph 0–1–2.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::ops::{hadamard, rx, rz, CircuitState, Distribution, QUBITS};
use crate::circuits::optimize::{nelder_mead, NelderMeadOptions};
use crate::circuits::{ChannelSet, TwoQubitScheme};
use crate::error::{Error, Result};

pub const EDGES: [(usize, usize); 2] = [(0, 1), (1, 2)];

/// Number of edges cut by the partition `bits` (qubit 0 is the high bit).
pub fn cut_value(bits: usize) -> f64 {
    let bit = |q: usize| (bits >> (QUBITS - 1 - q)) & 1;
    EDGES.iter().filter(|(a, b)| bit(*a) != bit(*b)).count() as f64
}

pub fn expected_cut(state: &CircuitState) -> f64 {
    state
        .distribution()
        .iter()
        .enumerate()
        .map(|(k, p)| p * cut_value(k))
        .sum()
}

/// `e^{−iγ Z_a Z_b / 2}` up to a global phase, applied to `state`. Returns the
/// two-qubit gate time spent.
fn zz_phase(
    state: &mut CircuitState,
    gamma: f64,
    a: usize,
    b: usize,
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
) -> Result<f64> {
    match scheme {
        TwoQubitScheme::CzTheta => {
            // CZ_{2γ}·Rz(γ)⊗Rz(γ) = e^{−iγ/2} e^{−iγ Z⊗Z/2}
            let c = channels.get(2.0 * gamma)?;
            state.apply_channel(&c, a, b);
            state.apply_single(&rz(gamma), a);
            state.apply_single(&rz(gamma), b);
            Ok(c.gate_time)
        }
        TwoQubitScheme::CzDecomposition => {
            // CNOT·Rz(γ)_b·CNOT with each CNOT written as H_b·CZ·H_b.
            let c = channels.get(PI)?;
            let h = hadamard();
            for k in 0..2 {
                state.apply_single(&h, b);
                state.apply_channel(&c, a, b);
                state.apply_single(&h, b);
                if k == 0 {
                    state.apply_single(&rz(gamma), b);
                }
            }
            Ok(2.0 * c.gate_time)
        }
    }
}

/// Runs the circuit and returns the final state and total two-qubit time.
pub fn run_maxcut(
    gammas: &[f64],
    betas: &[f64],
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
) -> Result<(CircuitState, f64)> {
    if gammas.len() != betas.len() || gammas.is_empty() {
        return Err(Error::AngleCountMismatch {
            expected: gammas.len().max(betas.len()).max(1),
            gammas: gammas.len(),
            betas: betas.len(),
        });
    }
    let mut state = CircuitState::zero();
    let h = hadamard();
    for q in 0..QUBITS {
        state.apply_single(&h, q);
    }
    let mut time = 0.0;
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        for (a, b) in EDGES {
            time += zz_phase(&mut state, gamma, a, b, scheme, channels)?;
        }
        let mixer = rx(beta);
        for q in 0..QUBITS {
            state.apply_single(&mixer, q);
        }
    }
    Ok((state, time))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCutResult {
    pub scheme: TwoQubitScheme,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub distribution: Distribution,
    pub ideal_distribution: Distribution,
    /// Overlap with the noiseless circuit's final state.
    pub fidelity: f64,
    pub expected_cut: f64,
    pub two_qubit_time: f64,
    pub trace: f64,
}

/// Runs the circuit with `channels` and scores it against the same circuit
/// with ideal gates.
pub fn maxcut_qaoa(
    gammas: &[f64],
    betas: &[f64],
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
) -> Result<MaxCutResult> {
    let (state, time) = run_maxcut(gammas, betas, scheme, channels)?;
    let (ideal, _) = run_maxcut(gammas, betas, scheme, &ChannelSet::Ideal)?;
    Ok(MaxCutResult {
        scheme,
        gammas: gammas.to_vec(),
        betas: betas.to_vec(),
        distribution: Distribution::of(&state),
        ideal_distribution: Distribution::of(&ideal),
        fidelity: state.overlap(&ideal),
        expected_cut: expected_cut(&state),
        two_qubit_time: time,
        trace: state.trace(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerBudget {
    /// Points per angle in the coarse grid.
    pub grid: usize,
    /// Objective evaluations allowed in the simplex refinement.
    pub max_evaluations: usize,
    /// Seeds the jitter of the initial simplex.
    pub seed: u64,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        Self {
            grid: 50,
            max_evaluations: 4000,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizedAngles {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub expected_cut: f64,
    pub evaluations: usize,
    /// The refinement stopped on its budget; the angles are the best found.
    pub budget_exhausted: bool,
}

/// Maximizes the expected cut. Each layer's `(γ, β)` is first picked from a
/// grid over `[0, 2π) × [0, π)` with earlier layers fixed, then all angles
/// are refined together by Nelder–Mead.
pub fn optimize_angles(
    p: usize,
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
    budget: OptimizerBudget,
) -> Result<OptimizedAngles> {
    if p == 0 || budget.grid == 0 {
        return Err(Error::InvalidParameter("need p ≥ 1 and a nonempty grid".into()));
    }
    let cut = |g: &[f64], b: &[f64]| -> Result<f64> {
        Ok(expected_cut(&run_maxcut(g, b, scheme, channels)?.0))
    };
    let mut gammas = Vec::with_capacity(p);
    let mut betas = Vec::with_capacity(p);
    let mut evaluations = 0;
    for _ in 0..p {
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..budget.grid {
            for j in 0..budget.grid {
                let g = 2.0 * PI * i as f64 / budget.grid as f64;
                let b = PI * j as f64 / budget.grid as f64;
                gammas.push(g);
                betas.push(b);
                let value = cut(&gammas, &betas)?;
                evaluations += 1;
                gammas.pop();
                betas.pop();
                if value > best.0 {
                    best = (value, g, b);
                }
            }
        }
        gammas.push(best.1);
        betas.push(best.2);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let step = 0.05 * (1.0 + 0.2 * rng.random::<f64>());
    let start: Vec<f64> = gammas.iter().chain(&betas).copied().collect();
    let objective = |x: &[f64]| -> f64 {
        match cut(&x[..p], &x[p..]) {
            Ok(v) => -v,
            Err(_) => f64::INFINITY,
        }
    };
    let refined = nelder_mead(
        objective,
        &start,
        NelderMeadOptions {
            max_evaluations: budget.max_evaluations,
            tolerance: 1e-12,
            initial_step: step,
        },
    );
    evaluations += refined.evaluations;
    Ok(OptimizedAngles {
        gammas: refined.point[..p].to_vec(),
        betas: refined.point[p..].to_vec(),
        expected_cut: -refined.value,
        evaluations,
        budget_exhausted: refined.exhausted,
    })
}

/// Angles quoted for the two-layer circuit.
pub fn reference_angles() -> ([f64; 2], [f64; 2]) {
    ([0.338 * PI, 0.559 * PI], [0.669 * PI, -0.228 * PI])
}

/// Bitstrings of the two optimal partitions.
pub const MAXCUT_SOLUTIONS: [usize; 2] = [0b010, 0b101];
