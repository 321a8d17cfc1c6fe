//! Deterministic fidelity map over static intensity and detuning offsets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{build_jumps, run_model, LindbladModel};
use crate::error::{Error, Result};
use crate::hamiltonians::{two_atom_hamiltonian, AtomDrive, GateParams, DIM};
use crate::units::to_mhz;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityGrid {
    /// Relative intensity offsets δI.
    pub intensity: Vec<f64>,
    /// Two-photon detuning offsets, rad/μs.
    pub detuning: Vec<f64>,
    /// `fidelity[i][j]` at `(intensity[i], detuning[j])`.
    pub fidelity: Vec<Vec<f64>>,
}

impl SensitivityGrid {
    fn center(&self) -> (usize, usize) {
        (self.intensity.len() / 2, self.detuning.len() / 2)
    }

    /// Mean fidelity loss at the two ends of the intensity axis.
    pub fn intensity_edge_drop(&self) -> f64 {
        let (ci, cj) = self.center();
        let f0 = self.fidelity[ci][cj];
        let last = self.intensity.len() - 1;
        f0 - 0.5 * (self.fidelity[0][cj] + self.fidelity[last][cj])
    }

    /// Mean fidelity loss at the two ends of the detuning axis.
    pub fn detuning_edge_drop(&self) -> f64 {
        let (ci, cj) = self.center();
        let f0 = self.fidelity[ci][cj];
        let last = self.detuning.len() - 1;
        f0 - 0.5 * (self.fidelity[ci][0] + self.fidelity[ci][last])
    }

    /// Long format: `intensity,detuning_mhz,fidelity`.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        writer
            .write_record(["intensity", "detuning_mhz", "fidelity"])
            .map_err(io)?;
        for (i, di) in self.intensity.iter().enumerate() {
            for (j, dd) in self.detuning.iter().enumerate() {
                writer
                    .write_record([
                        format!("{di:.6}"),
                        format!("{:.6}", to_mhz(*dd)),
                        format!("{:.9}", self.fidelity[i][j]),
                    ])
                    .map_err(io)?;
            }
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn axis(span: f64, resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![0.0];
    }
    (0..resolution)
        .map(|k| -span + 2.0 * span * k as f64 / (resolution - 1) as f64)
        .collect()
}

/// Fidelity of the gate with both Rabi amplitudes scaled by `√(1+δI)` and a
/// two-photon detuning `δ`, spontaneous emission included.
pub fn shifted_fidelity(
    params: &GateParams,
    theta: f64,
    intensity: f64,
    detuning: f64,
    dt: f64,
) -> Result<f64> {
    if !(intensity > -1.0) {
        return Err(Error::InvalidParameter("δI must exceed −1".into()));
    }
    let scale = (1.0 + intensity).sqrt();
    let p = params.clone();
    let model = LindbladModel::new(DIM, move |t| {
        let drive = AtomDrive {
            two_photon: detuning,
            ..AtomDrive::real(p.pulse.evaluate(t)? * scale, p.omega2 * scale, p.delta)
        };
        Ok(two_atom_hamiltonian(&drive, &drive, p.u_rr))
    })
    .with_jumps(build_jumps(&params.species));
    Ok(run_model(&model, params.gate_time(), theta, dt)?.fidelity)
}

/// `resolution × resolution` grid over `δI ∈ [−intensity_span, intensity_span]`
/// and `δ ∈ [−detuning_span, detuning_span]`. An odd resolution puts a cell
/// at the origin.
pub fn sensitivity_grid(
    params: &GateParams,
    theta: f64,
    intensity_span: f64,
    detuning_span: f64,
    resolution: usize,
    dt: f64,
) -> Result<SensitivityGrid> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    if !((0.0..1.0).contains(&intensity_span) && detuning_span >= 0.0) {
        return Err(Error::InvalidParameter(
            "spans must be nonnegative and the intensity span below 1".into(),
        ));
    }
    let intensity = axis(intensity_span, resolution);
    let detuning = axis(detuning_span, resolution);
    let cells: Vec<(f64, f64)> = intensity
        .iter()
        .flat_map(|&i| detuning.iter().map(move |&d| (i, d)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(i, d)| shifted_fidelity(params, theta, i, d, dt))
        .collect::<Result<Vec<f64>>>()?;
    let fidelity = values.chunks(resolution).map(<[f64]>::to_vec).collect();
    Ok(SensitivityGrid {
        intensity,
        detuning,
        fidelity,
    })
}
