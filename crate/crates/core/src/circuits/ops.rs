//! Three-qubit density matrices with ideal single-qubit gates and noisy
//! two-qubit channels. Qubit 0 is the most significant bit.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuits::channel::TwoQubitChannel;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, StateVector, I, ONE, ZERO};

pub const QUBITS: usize = 3;
pub const CDIM: usize = 1 << QUBITS;

/// 8×8 density matrix of three qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitState(ComplexMatrix);

impl CircuitState {
    /// `|000⟩⟨000|`.
    pub fn zero() -> Self {
        Self(ComplexMatrix::unit(CDIM, 0, 0))
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        if psi.dim() != CDIM {
            return Err(Error::DimensionMismatch {
                expected: CDIM,
                found: psi.dim(),
            });
        }
        Ok(Self(psi.projector()))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != CDIM {
            return Err(Error::DimensionMismatch {
                expected: CDIM,
                found: m.dim(),
            });
        }
        let asymmetry = m.hermitian_asymmetry();
        if asymmetry > 1e-10 {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Computational-basis probabilities, indexed by bitstring `b₀b₁b₂`.
    pub fn distribution(&self) -> [f64; CDIM] {
        std::array::from_fn(|k| self.0[(k, k)].re)
    }

    /// `Tr(ρ σ)`; the fidelity with `σ` when `σ` is pure.
    pub fn overlap(&self, other: &CircuitState) -> f64 {
        let n = CDIM;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn apply_unitary(&mut self, u: &ComplexMatrix) {
        self.0 = &(u * &self.0) * &u.adjoint();
    }

    pub fn apply_single(&mut self, gate: &ComplexMatrix, qubit: usize) {
        self.apply_unitary(&on_qubit(gate, qubit));
    }

    /// Applies `channel` with its first qubit on `first` and its second on
    /// `second`.
    pub fn apply_channel(&mut self, channel: &TwoQubitChannel, first: usize, second: usize) {
        assert!(first < QUBITS && second < QUBITS && first != second);
        let third = (0..QUBITS).find(|q| *q != first && *q != second).unwrap();
        let bit = |index: usize, q: usize| (index >> (QUBITS - 1 - q)) & 1;
        let compose = |pair: usize, spectator: usize| {
            let (a, b) = (pair >> 1, pair & 1);
            (a << (QUBITS - 1 - first)) | (b << (QUBITS - 1 - second)) | (spectator << (QUBITS - 1 - third))
        };
        let s = channel.superoperator();
        let mut out = ComplexMatrix::zeros(CDIM);
        for i in 0..CDIM {
            for j in 0..CDIM {
                let m = 2 * bit(i, first) + bit(i, second);
                let n = 2 * bit(j, first) + bit(j, second);
                let (ci, cj) = (bit(i, third), bit(j, third));
                let mut acc = ZERO;
                for k in 0..4 {
                    for l in 0..4 {
                        let w = s[(4 * m + n, 4 * k + l)];
                        if w != ZERO {
                            acc += w * self.0[(compose(k, ci), compose(l, cj))];
                        }
                    }
                }
                out[(i, j)] = acc;
            }
        }
        self.0 = out;
    }
}

pub fn hadamard() -> ComplexMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_vec(vec![h, h, h, -h])
}

/// `diag(e^{−iα/2}, e^{iα/2})`.
pub fn rz(alpha: f64) -> ComplexMatrix {
    ComplexMatrix::from_vec(vec![
        C64::from_polar(1.0, -0.5 * alpha),
        ZERO,
        ZERO,
        C64::from_polar(1.0, 0.5 * alpha),
    ])
}

/// `cos(β/2) − i sin(β/2) X`.
pub fn rx(beta: f64) -> ComplexMatrix {
    let c = C64::new((0.5 * beta).cos(), 0.0);
    let s = -I * (0.5 * beta).sin();
    ComplexMatrix::from_vec(vec![c, s, s, c])
}

/// Embeds a single-qubit gate on `qubit`.
pub fn on_qubit(gate: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let factors: Vec<&ComplexMatrix> = (0..QUBITS).map(|q| if q == qubit { gate } else { &id }).collect();
    kron(&kron(factors[0], factors[1]), factors[2])
}

/// Exchanges qubits 0 and 2.
pub fn swap_outer() -> ComplexMatrix {
    ComplexMatrix::from_fn(CDIM, |i, j| {
        let reversed = ((j & 1) << 2) | (j & 2) | (j >> 2);
        if i == reversed {
            ONE
        } else {
            ZERO
        }
    })
}

/// Serializable snapshot of a circuit result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub bitstrings: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl Distribution {
    pub fn of(state: &CircuitState) -> Self {
        Self {
            bitstrings: (0..CDIM).map(|k| format!("{k:03b}")).collect(),
            probabilities: state.distribution().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::channel::TwoQubitChannel;

    fn random_state(seed: u64) -> CircuitState {
        let amps: Vec<C64> = (0..CDIM)
            .map(|k| {
                let x = (((k as u64 + 1) * 2654435761) ^ seed) as f64;
                C64::new((x * 0.37).sin(), (x * 0.11).cos())
            })
            .collect();
        CircuitState::from_pure(&StateVector::new(amps).normalized()).unwrap()
    }

    fn cz_on(a: usize, b: usize, theta: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(CDIM, |i, j| {
            if i != j {
                return ZERO;
            }
            let both = (i >> (2 - a)) & 1 == 1 && (i >> (2 - b)) & 1 == 1;
            if both {
                C64::from_polar(1.0, -theta)
            } else {
                ONE
            }
        })
    }

    #[test]
    fn channel_matches_unitary_on_every_pair() {
        for (a, b) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
            let mut via_channel = random_state(7);
            let mut via_unitary = via_channel.clone();
            via_channel.apply_channel(&TwoQubitChannel::ideal(0.9), a, b);
            via_unitary.apply_unitary(&cz_on(a, b, 0.9));
            assert!(via_channel.matrix().max_abs_diff(via_unitary.matrix()) < 1e-14);
        }
    }

    #[test]
    fn asymmetric_channel_respects_qubit_order() {
        // CNOT with qubit `first` as control.
        let mut cnot = ComplexMatrix::zeros(4);
        for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(i, j)] = ONE;
        }
        let channel = TwoQubitChannel::from_unitary(0.0, &cnot);
        let mut s = CircuitState::from_pure(&StateVector::basis(CDIM, 0b100)).unwrap();
        s.apply_channel(&channel, 0, 2);
        assert!((s.distribution()[0b101] - 1.0).abs() < 1e-15);
        let mut s = CircuitState::from_pure(&StateVector::basis(CDIM, 0b100)).unwrap();
        s.apply_channel(&channel, 2, 0);
        assert!((s.distribution()[0b100] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_qubit_gates() {
        let h = hadamard();
        assert!((&h * &h).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(rx(2.0 * std::f64::consts::PI).max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0)) < 1e-15);
        let mut s = CircuitState::zero();
        s.apply_single(&rx(std::f64::consts::PI), 1);
        assert!((s.distribution()[0b010] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swap_reverses_bits() {
        let mut s = CircuitState::from_pure(&StateVector::basis(CDIM, 0b110)).unwrap();
        s.apply_unitary(&swap_outer());
        assert!((s.distribution()[0b011] - 1.0).abs() < 1e-15);
    }
}
