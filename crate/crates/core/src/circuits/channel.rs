//! Two-qubit process reconstruction of the simulated gate.
//!
//! Vectorization is row-major: `vec(ρ)[4i + j] = ρ_ij`, so a unitary `U` acts
//! as `U ⊗ U*` and column `4k + l` of the superoperator is `vec(Λ(|k⟩⟨l|))`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::calibration::solve_width;
use crate::dynamics::{evolve_operator, LindbladModel};
use crate::error::{Error, Result};
use crate::hamiltonians::{GateParams, DIM, QUBIT_INDICES};
use crate::linalg::{eigh, kron, ComplexMatrix};

const QDIM: usize = 4;
const SDIM: usize = QDIM * QDIM;

/// Linear map on two-qubit density matrices, plus where it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ChannelRecord", try_from = "ChannelRecord")]
pub struct TwoQubitChannel {
    pub theta: f64,
    /// Gate duration, μs; zero for ideal channels.
    pub gate_time: f64,
    /// Population lost from the qubit subspace, averaged over the maximally
    /// mixed input.
    pub leakage: f64,
    pub params_hash: String,
    superoperator: ComplexMatrix,
}

/// JSON layout: the superoperator as `[re, im]` pairs, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ChannelRecord {
    theta: f64,
    gate_time: f64,
    leakage: f64,
    params_hash: String,
    superoperator: Vec<[f64; 2]>,
}

impl From<TwoQubitChannel> for ChannelRecord {
    fn from(c: TwoQubitChannel) -> Self {
        Self {
            theta: c.theta,
            gate_time: c.gate_time,
            leakage: c.leakage,
            params_hash: c.params_hash,
            superoperator: c.superoperator.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<ChannelRecord> for TwoQubitChannel {
    type Error = Error;
    fn try_from(r: ChannelRecord) -> Result<Self> {
        if r.superoperator.len() != SDIM * SDIM {
            return Err(Error::DimensionMismatch {
                expected: SDIM * SDIM,
                found: r.superoperator.len(),
            });
        }
        let data = r.superoperator.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Ok(Self {
            theta: r.theta,
            gate_time: r.gate_time,
            leakage: r.leakage,
            params_hash: r.params_hash,
            superoperator: ComplexMatrix::from_vec(data),
        })
    }
}

/// `diag(1, 1, 1, e^{−iθ})`.
pub fn cz_theta_unitary(theta: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(QDIM);
    u[(3, 3)] = C64::from_polar(1.0, -theta);
    u
}

fn vec_of(m: &ComplexMatrix) -> Vec<C64> {
    m.as_slice().to_vec()
}

impl TwoQubitChannel {
    pub fn from_superoperator(theta: f64, gate_time: f64, superoperator: ComplexMatrix) -> Result<Self> {
        if superoperator.dim() != SDIM {
            return Err(Error::DimensionMismatch {
                expected: SDIM,
                found: superoperator.dim(),
            });
        }
        let mut channel = Self {
            theta,
            gate_time,
            leakage: 0.0,
            params_hash: String::new(),
            superoperator,
        };
        let mixed = ComplexMatrix::identity(QDIM).scale_real(0.25);
        channel.leakage = 1.0 - channel.apply(&mixed).trace().re;
        Ok(channel)
    }

    /// Conjugation by a 4×4 unitary.
    pub fn from_unitary(theta: f64, u: &ComplexMatrix) -> Self {
        let conj = ComplexMatrix::from_vec(u.as_slice().iter().map(|z| z.conj()).collect());
        let s = kron(u, &conj);
        Self {
            theta,
            gate_time: 0.0,
            leakage: 0.0,
            params_hash: "ideal".into(),
            superoperator: s,
        }
    }

    /// The noiseless CZ_θ.
    pub fn ideal(theta: f64) -> Self {
        Self::from_unitary(theta, &cz_theta_unitary(theta))
    }

    pub fn superoperator(&self) -> &ComplexMatrix {
        &self.superoperator
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.dim(), QDIM, "two-qubit channel needs a 4×4 input");
        let x = vec_of(rho);
        let s = &self.superoperator;
        let out: Vec<C64> = (0..SDIM)
            .map(|r| (0..SDIM).map(|c| s[(r, c)] * x[c]).sum())
            .collect();
        ComplexMatrix::from_vec(out)
    }

    /// `other ∘ self`: this channel first.
    pub fn then(&self, other: &TwoQubitChannel) -> TwoQubitChannel {
        let mut composed = self.clone();
        composed.superoperator = &other.superoperator * &self.superoperator;
        composed.theta = self.theta + other.theta;
        composed.gate_time = self.gate_time + other.gate_time;
        let mixed = ComplexMatrix::identity(QDIM).scale_real(0.25);
        composed.leakage = 1.0 - composed.apply(&mixed).trace().re;
        composed
    }

    /// Choi matrix `Σ_kl |k⟩⟨l| ⊗ Λ(|k⟩⟨l|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let mut choi = ComplexMatrix::zeros(SDIM);
        for k in 0..QDIM {
            for l in 0..QDIM {
                for m in 0..QDIM {
                    for n in 0..QDIM {
                        choi[(k * QDIM + m, l * QDIM + n)] =
                            self.superoperator[(m * QDIM + n, k * QDIM + l)];
                    }
                }
            }
        }
        choi
    }

    /// Smallest Choi eigenvalue; nonnegative for a completely positive map.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        Ok(eigh(&self.choi().hermitian_part())?.values[0])
    }

    /// Largest Frobenius distance between outputs over the sixteen basis
    /// inputs `|k⟩⟨l|`; a cheap stand-in for the diamond norm.
    pub fn basis_distance(&self, other: &TwoQubitChannel) -> f64 {
        (0..SDIM)
            .map(|c| {
                (0..SDIM)
                    .map(|r| (self.superoperator[(r, c)] - other.superoperator[(r, c)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Gate parameters for `θ`: Δ takes the sign of θ and the pulse width is
/// calibrated against the matching branch.
pub fn calibrated_gate(base: &GateParams, theta: f64) -> Result<GateParams> {
    let params = base.clone().with_delta(base.delta.abs() * theta.signum());
    let width = solve_width(theta, &params)?;
    Ok(params.with_width(width))
}

/// Content hash of everything that determines an extracted channel.
pub fn params_hash(params: &GateParams, theta: f64, decay: bool, dt: f64) -> String {
    let key = serde_json::json!({
        "params": params,
        "theta": theta,
        "decay": decay,
        "dt": dt,
    });
    let bytes = serde_json::to_vec(&key).expect("gate parameters serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Reconstructs the channel of one gate run by propagating `|k⟩⟨l|` for
/// every pair of qubit basis states and projecting back onto the qubits.
/// Only `k ≤ l` is simulated; the rest follow from Hermiticity preservation.
pub fn extract_channel(params: &GateParams, theta: f64, decay: bool, dt: f64) -> Result<TwoQubitChannel> {
    params.validate()?;
    let model = LindbladModel::for_gate(params, decay);
    let pairs: Vec<(usize, usize)> = (0..QDIM)
        .flat_map(|k| (k..QDIM).map(move |l| (k, l)))
        .collect();
    let outputs = pairs
        .par_iter()
        .map(|&(k, l)| {
            let input = ComplexMatrix::unit(DIM, QUBIT_INDICES[k], QUBIT_INDICES[l]);
            let out = evolve_operator(&input, &model, params.gate_time(), dt)?;
            Ok(((k, l), out.submatrix(&QUBIT_INDICES)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s = ComplexMatrix::zeros(SDIM);
    for ((k, l), out) in outputs {
        for m in 0..QDIM {
            for n in 0..QDIM {
                s[(m * QDIM + n, k * QDIM + l)] = out[(m, n)];
                if k != l {
                    s[(m * QDIM + n, l * QDIM + k)] = out[(n, m)].conj();
                }
            }
        }
    }
    let mut channel = TwoQubitChannel::from_superoperator(theta, params.gate_time(), s)?;
    channel.params_hash = params_hash(params, theta, decay, dt);
    Ok(channel)
}

/// `|ψ⟩⟨ψ|` for a product of two single-qubit states.
pub fn product_state(a: [C64; 2], b: [C64; 2]) -> ComplexMatrix {
    let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    ComplexMatrix::from_fn(QDIM, |i, j| v[i] * v[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, initial_state, simulate_gate};
    use crate::linalg::{DensityMatrix, StateVector};
    use crate::linalg::{ONE, ZERO};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    const DT: f64 = 1e-4;

    #[test]
    fn ideal_channel_is_unitary_conjugation() {
        let c = TwoQubitChannel::ideal(0.7);
        let plus = [C64::new(FRAC_1_SQRT_2, 0.0); 2];
        let rho = product_state(plus, plus);
        let out = c.apply(&rho);
        let u = cz_theta_unitary(0.7);
        let want = &(&u * &rho) * &u.adjoint();
        assert!(out.max_abs_diff(&want) < 1e-15);
        assert!(c.leakage.abs() < 1e-15);
        assert!(c.choi_min_eigenvalue().unwrap() > -1e-12);
    }

    proptest! {
        #[test]
        fn opposite_phases_cancel(theta in -6.0f64..6.0) {
            let c = TwoQubitChannel::ideal(theta).then(&TwoQubitChannel::ideal(-theta));
            let id = ComplexMatrix::identity(SDIM);
            prop_assert!(c.superoperator().max_abs_diff(&id) < 1e-9);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = TwoQubitChannel::ideal(1.3);
        let text = serde_json::to_string(&c).unwrap();
        let back: TwoQubitChannel = serde_json::from_str(&text).unwrap();
        assert_eq!(c, back);
        assert!(serde_json::from_str::<TwoQubitChannel>(
            r#"{"theta":0,"gate_time":0,"leakage":0,"params_hash":"","superoperator":[[1,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn hash_tracks_inputs() {
        let p = GateParams::baseline();
        let h = params_hash(&p, PI, true, 1e-4);
        assert_eq!(h, params_hash(&p, PI, true, 1e-4));
        assert_ne!(h, params_hash(&p, PI, false, 1e-4));
        assert_ne!(h, params_hash(&p.clone().with_width(0.16), PI, true, 1e-4));
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn negative_theta_flips_detuning() {
        let p = calibrated_gate(&GateParams::baseline(), -PI / 2.0).unwrap();
        assert!(p.delta < 0.0);
        let q = calibrated_gate(&GateParams::baseline(), PI / 2.0).unwrap();
        assert!((p.pulse.width() - q.pulse.width()).abs() < 1e-9);
    }

    #[test]
    fn extracted_channel_reproduces_direct_runs() {
        let params = GateParams::baseline();
        let c = extract_channel(&params, PI, true, DT).unwrap();

        // Trace-nonincreasing and completely positive.
        assert!(c.leakage > 0.0 && c.leakage < 0.01);
        assert!(c.choi_min_eigenvalue().unwrap() > -1e-6);

        // |00⟩ is not driven.
        let p00 = product_state([ONE, ZERO], [ONE, ZERO]);
        assert!(c.apply(&p00).max_abs_diff(&p00) < 1e-12);

        // The gate's own input state.
        let psi = initial_state();
        let rho_in = DensityMatrix::from_pure(&psi).matrix().submatrix(&QUBIT_INDICES);
        let out = c.apply(&rho_in);
        let target = cz_theta_unitary(PI);
        let t = [0, 1, 2, 3].map(|k| target[(k, k)] * 0.5);
        let f: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (t[i].conj() * out[(i, j)] * t[j]).re)
            .sum();
        let direct = simulate_gate(&params, PI, true, DT).unwrap().fidelity;
        assert!((f - direct).abs() < 1e-9, "{f} vs {direct}");

        // A held-out product state with complex amplitudes.
        let a = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.5, 0.5)];
        let rho = product_state(a, b);
        let mut amps = vec![ZERO; DIM];
        for (k, &idx) in QUBIT_INDICES.iter().enumerate() {
            amps[idx] = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]][k];
        }
        let model = LindbladModel::for_gate(&params, true);
        let full = evolve(
            &DensityMatrix::from_pure(&StateVector::new(amps)),
            &model,
            params.gate_time(),
            DT,
        )
        .unwrap();
        let projected = full.final_state().matrix().submatrix(&QUBIT_INDICES);
        assert!(c.apply(&rho).max_abs_diff(&projected) < 1e-6);
    }

    #[test]
    fn decay_free_channel_is_close_to_ideal() {
        let c = extract_channel(&GateParams::baseline(), PI, false, DT).unwrap();
        // The bare gate has infidelity near 1e-3, i.e. phase errors of a few
        // hundredths of a radian on the coherences.
        let d = c.basis_distance(&TwoQubitChannel::ideal(PI));
        assert!(d < 0.1, "{d}");
        assert!(c.leakage < 1e-3, "{}", c.leakage);
    }
}
