//! Three-qubit quantum Fourier transform with controlled phases realized by
//! the simulated gate. Controlled phases are `diag(1, 1, 1, e^{iφ})`, so in
//! the CZ_θ scheme each one needs a negative θ = −φ.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuits::ops::{hadamard, rz, swap_outer, CircuitState, Distribution, CDIM};
use crate::circuits::{ChannelSet, TwoQubitScheme};
use crate::error::Result;
use crate::linalg::{StateVector, ZERO};

/// Phases needed by the three-qubit transform.
pub const QFT_PHASES: [f64; 2] = [PI / 2.0, PI / 4.0];

/// `(|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ (|0⟩+|1⟩)/√2`.
pub fn qft_input() -> CircuitState {
    let mut amps = vec![ZERO; CDIM];
    for k in [0b000, 0b001, 0b100, 0b101] {
        amps[k] = C64::new(0.5, 0.0);
    }
    CircuitState::from_pure(&StateVector::new(amps)).expect("eight amplitudes")
}

/// Transform of [`qft_input`]: `(|000⟩ + ½(1+i)|010⟩ + ½(1−i)|110⟩)/√2`.
pub fn qft_reference() -> CircuitState {
    let mut amps = vec![ZERO; CDIM];
    amps[0b000] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b010] = C64::new(0.5, 0.5) * FRAC_1_SQRT_2;
    amps[0b110] = C64::new(0.5, -0.5) * FRAC_1_SQRT_2;
    CircuitState::from_pure(&StateVector::new(amps)).expect("eight amplitudes")
}

fn controlled_phase(
    state: &mut CircuitState,
    phi: f64,
    x: usize,
    y: usize,
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
) -> Result<f64> {
    match scheme {
        TwoQubitScheme::CzTheta => {
            let c = channels.get(-phi)?;
            state.apply_channel(&c, x, y);
            Ok(c.gate_time)
        }
        TwoQubitScheme::CzDecomposition => {
            // CP(φ) = Rz(φ/2)⊗Rz(φ/2) · CNOT · Rz(−φ/2) · CNOT up to a phase. The
            // qubit that carries the transform's Hadamard (x) is the CNOT
            // target; y controls, and drives the control atom of the gate.
            let (x, y) = (y, x);
            let c = channels.get(PI)?;
            let h = hadamard();
            state.apply_single(&rz(0.5 * phi), x);
            state.apply_single(&rz(0.5 * phi), y);
            for k in 0..2 {
                state.apply_single(&h, y);
                state.apply_channel(&c, x, y);
                state.apply_single(&h, y);
                if k == 0 {
                    state.apply_single(&rz(-0.5 * phi), y);
                }
            }
            Ok(2.0 * c.gate_time)
        }
    }
}

fn run_qft(input: &CircuitState, scheme: TwoQubitScheme, channels: &ChannelSet) -> Result<(CircuitState, f64)> {
    let mut s = input.clone();
    let h = hadamard();
    let mut time = 0.0;
    s.apply_single(&h, 0);
    time += controlled_phase(&mut s, QFT_PHASES[0], 0, 1, scheme, channels)?;
    time += controlled_phase(&mut s, QFT_PHASES[1], 0, 2, scheme, channels)?;
    s.apply_single(&h, 1);
    time += controlled_phase(&mut s, QFT_PHASES[0], 1, 2, scheme, channels)?;
    s.apply_single(&h, 2);
    s.apply_unitary(&swap_outer());
    Ok((s, time))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QftResult {
    pub scheme: TwoQubitScheme,
    pub distribution: Distribution,
    pub fidelity: f64,
    pub two_qubit_time: f64,
    pub trace: f64,
}

/// Runs the transform on `input` and scores it against the noiseless output.
pub fn qft3(
    scheme: TwoQubitScheme,
    channels: &ChannelSet,
    input: &CircuitState,
) -> Result<(CircuitState, QftResult)> {
    let (state, time) = run_qft(input, scheme, channels)?;
    let (ideal, _) = run_qft(input, scheme, &ChannelSet::Ideal)?;
    let result = QftResult {
        scheme,
        distribution: Distribution::of(&state),
        fidelity: state.overlap(&ideal),
        two_qubit_time: time,
        trace: state.trace(),
    };
    Ok((state, result))
}
