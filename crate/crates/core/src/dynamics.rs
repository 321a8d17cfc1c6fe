//! Lindblad master equation
//! `dρ/dt = −i[H(t), ρ] + Σ (LρL† − ½{L†L, ρ})`
//! integrated with fixed-step RK4.
//!
//! The right-hand side is evaluated through the nonzero pattern of `H(t)` and
//! of each jump operator; the anticommutator is folded into the non-Hermitian
//! `H_eff = H − (i/2)ΣL†L`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{
    h_full, pair, GateParams, SpeciesParams, D, DIM, G0, G1, LEVELS, P, QUBIT_INDICES, R,
};
use crate::linalg::{eigh, kron, ComplexMatrix, DensityMatrix, StateVector, I, ONE, ZERO};

pub const DEFAULT_DT: f64 = 1e-4;
/// Trace drift past this aborts a run.
pub const UNSTABLE_DRIFT: f64 = 1e-4;

pub type HamiltonianFn = Arc<dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync>;

#[derive(Clone)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: HamiltonianFn,
    jumps: Vec<ComplexMatrix>,
}

impl std::fmt::Debug for LindbladModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LindbladModel")
            .field("dim", &self.dim)
            .field("jumps", &self.jumps.len())
            .finish()
    }
}

impl LindbladModel {
    pub fn new(
        dim: usize,
        hamiltonian: impl Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            hamiltonian: Arc::new(hamiltonian),
            jumps: Vec::new(),
        }
    }

    /// Coherent gate dynamics from `h_full`, with or without spontaneous emission.
    pub fn for_gate(params: &GateParams, decay: bool) -> Self {
        let p = params.clone();
        let model = Self::new(DIM, move |t| h_full(&p, t));
        if decay {
            model.with_jumps(build_jumps(&params.species))
        } else {
            model
        }
    }

    /// Appends jump operators, each already scaled by the square root of its rate.
    pub fn with_jumps(mut self, jumps: Vec<ComplexMatrix>) -> Self {
        for j in &jumps {
            assert_eq!(j.dim(), self.dim, "jump operator dimension mismatch");
        }
        self.jumps.extend(jumps);
        self
    }

    /// Appends the four laser-dephasing operators.
    pub fn add_dephasing(self, gamma1: f64, gamma2: f64) -> Self {
        let jumps = dephasing_jumps(gamma1, gamma2);
        self.with_jumps(jumps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn hamiltonian(&self, t: f64) -> Result<ComplexMatrix> {
        (self.hamiltonian)(t)
    }
}

/// Lifts a single-atom operator onto the control (`atom = 0`) or target atom.
pub fn lift(op: &ComplexMatrix, atom: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(LEVELS);
    if atom == 0 {
        kron(op, &id)
    } else {
        kron(&id, op)
    }
}

/// Spontaneous emission from |p⟩ to {|0⟩, |1⟩, |d⟩} and from |r⟩ to
/// {|0⟩, |1⟩, |d⟩, |p⟩} for both atoms: fourteen operators, control first.
pub fn build_jumps(species: &SpeciesParams) -> Vec<ComplexMatrix> {
    let gp = 1.0 / species.tau_p;
    let gr = 1.0 / species.tau_r;
    let channels = [
        (G0, P, species.b0p * gp),
        (G1, P, species.b1p * gp),
        (D, P, species.bdp * gp),
        (G0, R, species.b0r * gr),
        (G1, R, species.b1r * gr),
        (D, R, species.bdr * gr),
        (P, R, species.bpr * gr),
    ];
    let mut jumps = Vec::with_capacity(14);
    for atom in 0..2 {
        for &(to, from, rate) in &channels {
            let op = ComplexMatrix::unit(LEVELS, to, from).scale_real(rate.sqrt());
            jumps.push(lift(&op, atom));
        }
    }
    jumps
}

/// `√(γ₁/2)(|p⟩⟨p| − |1⟩⟨1|)` and `√(γ₂/2)(|r⟩⟨r| − |p⟩⟨p|)` on each atom.
/// Zero rates contribute nothing.
pub fn dephasing_jumps(gamma1: f64, gamma2: f64) -> Vec<ComplexMatrix> {
    let mut jumps = Vec::new();
    for atom in 0..2 {
        if gamma1 > 0.0 {
            let mut op = vec![0.0; LEVELS];
            op[P] = 1.0;
            op[G1] = -1.0;
            let op = ComplexMatrix::from_real_diagonal(&op).scale_real((gamma1 / 2.0).sqrt());
            jumps.push(lift(&op, atom));
        }
        if gamma2 > 0.0 {
            let mut op = vec![0.0; LEVELS];
            op[R] = 1.0;
            op[P] = -1.0;
            let op = ComplexMatrix::from_real_diagonal(&op).scale_real((gamma2 / 2.0).sqrt());
            jumps.push(lift(&op, atom));
        }
    }
    jumps
}

type Sparse = Vec<(usize, usize, C64)>;

fn nonzeros(m: &ComplexMatrix) -> Sparse {
    let n = m.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

struct Generator {
    n: usize,
    /// `−(i/2)ΣL†L`, added to H(t) at every stage.
    damping: ComplexMatrix,
    jumps: Vec<Sparse>,
}

impl Generator {
    fn new(model: &LindbladModel) -> Self {
        let n = model.dim;
        let mut sum = ComplexMatrix::zeros(n);
        for l in &model.jumps {
            sum = &sum + &(&l.adjoint() * l);
        }
        Self {
            n,
            damping: sum.scale(C64::new(0.0, -0.5)),
            jumps: model.jumps.iter().map(nonzeros).collect(),
        }
    }

    fn effective(&self, h: &ComplexMatrix) -> Result<Sparse> {
        if h.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: h.dim(),
            });
        }
        Ok(nonzeros(&(h + &self.damping)))
    }

    /// `out = −i(H_eff ρ − ρ H_eff†) + Σ LρL†`.
    fn apply(&self, heff: &Sparse, rho: &[C64], out: &mut [C64]) {
        let n = self.n;
        out.iter_mut().for_each(|z| *z = ZERO);
        for &(i, k, h) in heff {
            let a = -I * h;
            let src = &rho[k * n..(k + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += a * s;
            }
        }
        for &(j, k, h) in heff {
            let a = I * h.conj();
            for i in 0..n {
                out[i * n + j] += a * rho[i * n + k];
            }
        }
        for jump in &self.jumps {
            for &(a, b, l) in jump {
                for &(c, d, m) in jump {
                    out[a * n + c] += l * m.conj() * rho[b * n + d];
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub dt: f64,
    /// Store a snapshot every this many steps; the endpoints are always stored.
    /// Zero keeps only the endpoints.
    pub record_every: usize,
    /// Replace ρ by (ρ + ρ†)/2 after every step. Only meaningful for Hermitian
    /// inputs.
    pub symmetrize: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            record_every: 0,
            symmetrize: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest |Tr ρ(t) − Tr ρ(0)| over all steps.
    pub trace_drift: f64,
    /// Smallest eigenvalue over the stored snapshots.
    pub min_eigenvalue: f64,
    pub initial_purity: f64,
    pub final_purity: f64,
    /// Population that ended in the uncoupled level |d⟩ of either atom.
    pub leakage: f64,
    pub steps: usize,
    pub dt: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory always stores its endpoint")
    }
}

/// Largest `dt·(E_max − E_min)` kept by [`stable_step`]. RK4 is stable on the
/// imaginary axis up to 2√2.
pub const STABILITY_MARGIN: f64 = 2.6;

/// `dt` divided by the smallest integer that brings `dt` times the spectral
/// width of `h` under [`STABILITY_MARGIN`]. Campaigns whose blockade shift
/// varies from trial to trial use this to stay stable without shrinking the
/// step for every trial.
pub fn stable_step(h: &ComplexMatrix, dt: f64) -> Result<f64> {
    let values = eigh(h)?.values;
    let width = values[values.len() - 1] - values[0];
    let k = (dt * width / STABILITY_MARGIN).ceil().max(1.0);
    Ok(dt / k)
}

fn step_count(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidParameter("need dt > 0 and t_end ≥ 0".into()));
    }
    let n = (t_end / dt).round().max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

fn trace(x: &[C64], n: usize) -> C64 {
    (0..n).map(|i| x[i * n + i]).sum()
}

/// Integrates `matrix` (any operator, not necessarily a state) to `t_end`.
/// Calls `observe(step, t, x)` after each step.
fn integrate(
    matrix: &ComplexMatrix,
    model: &LindbladModel,
    t_end: f64,
    options: &EvolveOptions,
    mut observe: impl FnMut(usize, f64, &[C64]),
) -> Result<(ComplexMatrix, f64, usize, f64)> {
    let n = model.dim;
    if matrix.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: matrix.dim(),
        });
    }
    let (steps, dt) = step_count(t_end, options.dt)?;
    let generator = Generator::new(model);
    let len = n * n;
    let mut x = matrix.as_slice().to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
    );
    let trace0 = trace(&x, n);
    let mut drift: f64 = 0.0;
    let mut h_start = generator.effective(&model.hamiltonian(0.0)?)?;
    for step in 0..steps {
        let t = step as f64 * dt;
        let h_mid = generator.effective(&model.hamiltonian(t + 0.5 * dt)?)?;
        let h_end = generator.effective(&model.hamiltonian(((step + 1) as f64 * dt).min(t_end))?)?;

        generator.apply(&h_start, &x, &mut k1);
        for i in 0..len {
            tmp[i] = x[i] + k1[i] * (0.5 * dt);
        }
        generator.apply(&h_mid, &tmp, &mut k2);
        for i in 0..len {
            tmp[i] = x[i] + k2[i] * (0.5 * dt);
        }
        generator.apply(&h_mid, &tmp, &mut k3);
        for i in 0..len {
            tmp[i] = x[i] + k3[i] * dt;
        }
        generator.apply(&h_end, &tmp, &mut k4);
        for i in 0..len {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        if options.symmetrize {
            for i in 0..n {
                for j in i..n {
                    let avg = 0.5 * (x[i * n + j] + x[j * n + i].conj());
                    x[i * n + j] = avg;
                    x[j * n + i] = avg.conj();
                }
            }
        }
        let d = (trace(&x, n) - trace0).norm();
        if !d.is_finite() || d > UNSTABLE_DRIFT {
            return Err(Error::StepUnstable { drift: d });
        }
        drift = drift.max(d);
        observe(step + 1, (step + 1) as f64 * dt, &x);
        h_start = h_end;
    }
    Ok((ComplexMatrix::from_vec(x), drift, steps, dt))
}

fn leakage(rho: &ComplexMatrix) -> f64 {
    let mut total = 0.0;
    for a in 0..LEVELS {
        for b in 0..LEVELS {
            if a == D || b == D {
                total += rho[(pair(a, b), pair(a, b))].re;
            }
        }
    }
    total
}

/// Evolves a density matrix to `t_end` with step `dt`, storing the endpoints.
pub fn evolve(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    evolve_with(
        rho0,
        model,
        t_end,
        &EvolveOptions {
            dt,
            ..EvolveOptions::default()
        },
    )
}

pub fn evolve_with(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    t_end: f64,
    options: &EvolveOptions,
) -> Result<Trajectory> {
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let every = options.record_every;
    let (last, drift, steps, dt) = integrate(rho0.matrix(), model, t_end, options, |step, t, x| {
        if every > 0 && step % every == 0 {
            times.push(t);
            states.push(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_vec(
                x.to_vec(),
            )));
        }
    })?;
    if every > 0 && steps % every == 0 {
        times.pop();
        states.pop();
    }
    times.push(t_end);
    states.push(DensityMatrix::from_matrix_unchecked(last.clone()));
    let min_eigenvalue = states
        .iter()
        .map(DensityMatrix::min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    let final_state = states.last().unwrap();
    let diagnostics = Diagnostics {
        trace_drift: drift,
        min_eigenvalue,
        initial_purity: rho0.purity(),
        final_purity: final_state.purity(),
        leakage: if model.dim == DIM { leakage(&last) } else { 0.0 },
        steps,
        dt,
    };
    Ok(Trajectory {
        times,
        states,
        diagnostics,
    })
}

/// Propagates an arbitrary operator (e.g. `|i⟩⟨j|`) through the same linear map.
pub fn evolve_operator(
    matrix: &ComplexMatrix,
    model: &LindbladModel,
    t_end: f64,
    dt: f64,
) -> Result<ComplexMatrix> {
    let options = EvolveOptions {
        dt,
        record_every: 0,
        symmetrize: false,
    };
    Ok(integrate(matrix, model, t_end, &options, |_, _, _| {})?.0)
}

/// `½(|00⟩ + |01⟩ + |10⟩ + |11⟩)` in the two-atom space.
pub fn initial_state() -> StateVector {
    target_state(0.0)
}

/// `½(|00⟩ + |01⟩ + |10⟩ + e^{−iθ}|11⟩)`.
pub fn target_state(theta: f64) -> StateVector {
    let mut amps = vec![ZERO; DIM];
    for &i in &QUBIT_INDICES[..3] {
        amps[i] = C64::new(0.5, 0.0);
    }
    amps[QUBIT_INDICES[3]] = C64::from_polar(0.5, -theta);
    StateVector::new(amps)
}

/// `⟨Ψ'_t|ρ|Ψ'_t⟩` for the CZ_θ target state.
pub fn gate_fidelity(rho: &DensityMatrix, theta: f64) -> f64 {
    rho.expectation(&target_state(theta))
}

/// Result of one gate simulation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateRun {
    pub theta: f64,
    pub gate_time: f64,
    pub fidelity: f64,
    pub diagnostics: Diagnostics,
}

/// Runs the gate from `initial_state()` over the full pulse and scores it.
pub fn simulate_gate(params: &GateParams, theta: f64, decay: bool, dt: f64) -> Result<GateRun> {
    let model = LindbladModel::for_gate(params, decay);
    run_model(&model, params.gate_time(), theta, dt)
}

pub fn run_model(model: &LindbladModel, gate_time: f64, theta: f64, dt: f64) -> Result<GateRun> {
    let rho0 = DensityMatrix::from_pure(&initial_state());
    let trajectory = evolve(&rho0, model, gate_time, dt)?;
    Ok(GateRun {
        theta,
        gate_time,
        fidelity: gate_fidelity(trajectory.final_state(), theta),
        diagnostics: trajectory.diagnostics,
    })
}

fn symmetric(a: (usize, usize), b: (usize, usize)) -> Vec<(usize, C64)> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    vec![(pair(a.0, a.1), s), (pair(b.0, b.1), s)]
}

/// Labeled states tracked by `populations`.
pub fn tracked_states() -> Vec<(&'static str, StateVector)> {
    let states: Vec<(&'static str, Vec<(usize, C64)>)> = vec![
        ("11", vec![(pair(G1, G1), ONE)]),
        ("A(1p+p1)", symmetric((G1, P), (P, G1))),
        ("pp", vec![(pair(P, P), ONE)]),
        ("B(1r+r1)", symmetric((G1, R), (R, G1))),
        ("pr+rp", symmetric((P, R), (R, P))),
        ("rr", vec![(pair(R, R), ONE)]),
        ("01", vec![(pair(G0, G1), ONE)]),
        ("0p", vec![(pair(G0, P), ONE)]),
        ("0r", vec![(pair(G0, R), ONE)]),
    ];
    states
        .into_iter()
        .map(|(label, entries)| {
            let mut amps = vec![ZERO; DIM];
            for (i, a) in entries {
                amps[i] = a;
            }
            (label, StateVector::new(amps))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationSeries {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    /// `values[k][s]`: population of state `s` at `times[k]`.
    pub values: Vec<Vec<f64>>,
}

impl PopulationSeries {
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let s = self.labels.iter().position(|l| l == label)?;
        Some(self.values.iter().map(|row| row[s]).collect())
    }
}

pub fn populations(trajectory: &Trajectory) -> PopulationSeries {
    let tracked = tracked_states();
    PopulationSeries {
        labels: tracked.iter().map(|(l, _)| l.to_string()).collect(),
        times: trajectory.times.clone(),
        values: trajectory
            .states
            .iter()
            .map(|rho| tracked.iter().map(|(_, v)| rho.expectation(v)).collect())
            .collect(),
    }
}

/// CSV with columns `t`, one per tracked population, `trace`, `fidelity`.
pub fn trajectory_csv(trajectory: &Trajectory, theta: f64) -> Result<String> {
    let series = populations(trajectory);
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(series.labels.iter().map(|l| format!("P_{l}")));
    header.push("trace".into());
    header.push("fidelity".into());
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    writer.write_record(&header).map_err(io)?;
    for (k, rho) in trajectory.states.iter().enumerate() {
        let mut row = vec![format!("{:.6}", series.times[k])];
        row.extend(series.values[k].iter().map(|v| format!("{v:.9}")));
        row.push(format!("{:.12}", rho.trace()));
        row.push(format!("{:.9}", gate_fidelity(rho, theta)));
        writer.write_record(&row).map_err(io)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
