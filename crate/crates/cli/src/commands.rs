//! One function per subcommand. Each computes everything first and then
//! hands the results to [`Output`] in one go.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use rydberg_cz::calibration::{
    phase_integral_with_error, slope_fit, solve_width, suggest_row, REFERENCE_ROWS,
};
use rydberg_cz::circuits::{
    calibrated_gate, extract_channel, maxcut_gate_plan, maxcut_qaoa, optimize_angles, params_hash, qft3,
    qft_gate_plan, qft_input, qft_reference, ChannelSet, Distribution, MaxCutResult, OptimizerBudget,
    QftResult, TwoQubitChannel,
};
use rydberg_cz::dynamics::{
    evolve_with, gate_fidelity, initial_state, simulate_gate, trajectory_csv, Diagnostics, EvolveOptions,
    LindbladModel,
};
use rydberg_cz::hamiltonians::GateParams;
use rydberg_cz::linalg::DensityMatrix;
use rydberg_cz::noise::{error_budget, sensitivity_grid, ErrorBudget, SensitivityGrid};
use rydberg_cz::spectrum::adiabaticity_maxima;
use rydberg_cz::units::{mhz, parse_angle, parse_frequency, to_mhz};

use crate::output::{csv_text, Output};
use crate::scenario::{schemes, Scenario, SchemeChoice};

const ADIABATIC_SAMPLES: usize = 2000;
const SLOPE_POINTS: usize = 10;

#[derive(Serialize)]
struct Calibration {
    theta: f64,
    omega0_mhz: f64,
    width: f64,
    gate_time: f64,
    /// θ/T, rad/μs.
    slope: f64,
    phase_integral: f64,
    quadrature_error: f64,
    adiab01_max: f64,
    adiab11_max: f64,
    params: GateParams,
}

pub fn calibrate(s: &Scenario) -> Result<()> {
    let params = s.gate()?;
    let width = params.pulse.width();
    let (phase, quadrature_error) = phase_integral_with_error(&params, width)?;
    let (a01, a11) = adiabaticity_maxima(&params, ADIABATIC_SAMPLES)?;
    let result = Calibration {
        theta: s.theta,
        omega0_mhz: to_mhz(s.omega0),
        width,
        gate_time: params.gate_time(),
        slope: s.theta / width,
        phase_integral: phase,
        quadrature_error,
        adiab01_max: a01,
        adiab11_max: a11,
        params,
    };
    println!(
        "θ = {:.5}π at Ω₀/2π = {} MHz: T = {:.5} μs, gate time {:.4} μs, θ/T = {:.4} rad/μs",
        s.theta / PI,
        result.omega0_mhz,
        result.width,
        result.gate_time,
        result.slope
    );
    println!(
        "phase integral {:.6} rad (±{:.1e}), adiabaticity maxima {:.4} (01), {:.4} (11)",
        phase, quadrature_error, a01, a11
    );
    let mut out = Output::new(&s.output_dir)?;
    out.json("calibrate.json", "calibrate", s, &result)?;
    out.report();
    Ok(())
}

#[derive(Serialize)]
struct SlopeRow {
    omega0_mhz: f64,
    theta_min: f64,
    theta_max: f64,
    slope: f64,
    reference_slope: f64,
    relative_deviation: f64,
    /// 4T for θ = π, μs.
    gate_time: f64,
    reference_gate_time: f64,
}

pub fn calibrate_table(s: &Scenario) -> Result<()> {
    let rows = REFERENCE_ROWS
        .par_iter()
        .map(|row| -> Result<SlopeRow> {
            let mut gaussian = s.clone();
            gaussian.pulse.width = None;
            let params = gaussian.gate_at(row.omega0(), PI)?;
            let (lo, hi) = (row.theta_range.0 * PI, row.theta_range.1 * PI);
            let slope = slope_fit(&params, lo, hi, SLOPE_POINTS)?;
            let width = solve_width(PI, &params)?;
            Ok(SlopeRow {
                omega0_mhz: row.omega0_mhz,
                theta_min: lo,
                theta_max: hi,
                slope,
                reference_slope: row.slope,
                relative_deviation: (slope - row.slope) / row.slope,
                gate_time: 4.0 * width,
                reference_gate_time: row.gate_time,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    println!("Ω₀/2π (MHz)  θ window (π)   slope    reference  deviation   4T (μs)");
    for r in &rows {
        println!(
            "{:>10}   {:.2}–{:.2}    {:>8.4}  {:>8.4}   {:>+7.2}%   {:.4}",
            r.omega0_mhz,
            r.theta_min / PI,
            r.theta_max / PI,
            r.slope,
            r.reference_slope,
            100.0 * r.relative_deviation,
            r.gate_time
        );
    }
    let csv = csv_text(
        &[
            "omega0_mhz",
            "theta_min",
            "theta_max",
            "slope",
            "reference_slope",
            "relative_deviation",
            "gate_time_us",
            "reference_gate_time_us",
        ],
        rows.iter().map(|r| {
            vec![
                r.omega0_mhz.to_string(),
                format!("{:.6}", r.theta_min),
                format!("{:.6}", r.theta_max),
                format!("{:.6}", r.slope),
                r.reference_slope.to_string(),
                format!("{:.6}", r.relative_deviation),
                format!("{:.6}", r.gate_time),
                r.reference_gate_time.to_string(),
            ]
        }),
    )?;
    let mut out = Output::new(&s.output_dir)?;
    out.json("reference_slopes.json", "calibrate --table2", s, &rows)?;
    out.text("reference_slopes.csv", &csv)?;
    out.report();
    Ok(())
}

#[derive(Serialize)]
struct Simulation {
    theta: f64,
    fidelity: f64,
    gate_time: f64,
    decay: bool,
    dephasing: bool,
    diagnostics: Diagnostics,
    params: GateParams,
}

pub fn simulate(s: &Scenario, decay: bool, dephasing: bool, record_every: usize) -> Result<()> {
    let params = s.gate()?;
    let mut model = LindbladModel::for_gate(&params, decay);
    if dephasing {
        model = model.add_dephasing(s.noise.dephasing[0], s.noise.dephasing[1]);
    }
    let options = EvolveOptions {
        dt: s.dt,
        record_every,
        symmetrize: true,
    };
    let rho0 = DensityMatrix::from_pure(&initial_state());
    let trajectory = evolve_with(&rho0, &model, params.gate_time(), &options)?;
    let fidelity = gate_fidelity(trajectory.final_state(), s.theta);
    let csv = trajectory_csv(&trajectory, s.theta)?;
    let result = Simulation {
        theta: s.theta,
        fidelity,
        gate_time: params.gate_time(),
        decay,
        dephasing,
        diagnostics: trajectory.diagnostics,
        params,
    };
    println!(
        "fidelity {:.5} after {:.4} μs ({} steps, trace drift {:.1e}, leakage {:.1e})",
        fidelity,
        result.gate_time,
        result.diagnostics.steps,
        result.diagnostics.trace_drift,
        result.diagnostics.leakage
    );
    let mut out = Output::new(&s.output_dir)?;
    out.json("simulate.json", "simulate", s, &result)?;
    out.text("populations.csv", &csv)?;
    out.report();
    Ok(())
}

#[derive(Serialize)]
struct ScanPoint {
    theta: f64,
    omega0_mhz: f64,
    width: f64,
    gate_time: f64,
    fidelity: f64,
    leakage: f64,
}

pub fn scan_theta(s: &Scenario, from: &str, to: &str, points: usize, fixed_omega0: bool, decay: bool) -> Result<()> {
    let lo = parse_angle(from).with_context(|| format!("--from: cannot read {from:?} as an angle"))?;
    let hi = parse_angle(to).with_context(|| format!("--to: cannot read {to:?} as an angle"))?;
    anyhow::ensure!(points >= 1, "--points must be at least 1");
    let thetas: Vec<f64> = (0..points)
        .map(|k| if points == 1 { lo } else { lo + (hi - lo) * k as f64 / (points - 1) as f64 })
        .collect();
    let scan = thetas
        .par_iter()
        .map(|&theta| -> Result<ScanPoint> {
            let omega0 = if fixed_omega0 {
                s.omega0
            } else {
                suggest_row(theta).map_or(s.omega0, |row| row.omega0())
            };
            let params = s.gate_at(omega0, theta)?;
            let run = simulate_gate(&params, theta, decay, s.dt)?;
            Ok(ScanPoint {
                theta,
                omega0_mhz: to_mhz(omega0),
                width: params.pulse.width(),
                gate_time: params.gate_time(),
                fidelity: run.fidelity,
                leakage: run.diagnostics.leakage,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for p in &scan {
        println!(
            "θ = {:.4}π  Ω₀/2π = {:>5} MHz  gate time {:.4} μs  fidelity {:.5}",
            p.theta / PI,
            p.omega0_mhz,
            p.gate_time,
            p.fidelity
        );
    }
    let csv = csv_text(
        &["theta", "theta_over_pi", "omega0_mhz", "width_us", "gate_time_us", "fidelity", "leakage"],
        scan.iter().map(|p| {
            vec![
                format!("{:.9}", p.theta),
                format!("{:.6}", p.theta / PI),
                format!("{:.3}", p.omega0_mhz),
                format!("{:.6}", p.width),
                format!("{:.6}", p.gate_time),
                format!("{:.9}", p.fidelity),
                format!("{:.3e}", p.leakage),
            ]
        }),
    )?;
    let mut out = Output::new(&s.output_dir)?;
    out.json("scan_theta.json", "scan-theta", s, &scan)?;
    out.text("scan_theta.csv", &csv)?;
    out.report();
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum NoiseChannel {
    All,
    Decay,
    Doppler,
    Inhomogeneous,
    Intensity,
    Dephasing,
    Detuning,
    Detection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Grid {
    Sensitivity,
}

pub struct GridOptions {
    pub resolution: usize,
    pub intensity_span: f64,
    pub detuning_span: String,
}

pub fn noise(s: &Scenario, channels: &[NoiseChannel]) -> Result<()> {
    let params = s.gate()?;
    let mut config = s.noise.clone();
    if !channels.is_empty() && !channels.contains(&NoiseChannel::All) {
        let on = |c: NoiseChannel| channels.contains(&c);
        config.decay = on(NoiseChannel::Decay);
        config.doppler = on(NoiseChannel::Doppler);
        config.inhomogeneous = on(NoiseChannel::Inhomogeneous);
        if !on(NoiseChannel::Intensity) {
            config.intensity_sigma = 0.0;
        }
        if !on(NoiseChannel::Detuning) {
            config.detuning_sigma = 0.0;
        }
        if !on(NoiseChannel::Dephasing) {
            config.dephasing = [0.0, 0.0];
        }
        if !on(NoiseChannel::Detection) {
            config.detection_epsilons.clear();
        }
    }
    let budget: ErrorBudget = error_budget(&params, &s.trap, &config)?;
    println!("decay-free fidelity {:.5}", budget.ideal_fidelity);
    for row in &budget.rows {
        println!("{:<32} {:>9.5} ± {:.5}", row.channel, row.error, row.std_error);
    }
    println!(
        "{:<32} {:>9.5} ± {:.5}",
        "combined fidelity", budget.combined, budget.combined_std_error
    );
    for d in &budget.detection {
        println!("with detection ε = {}: {:.5}", d.epsilon, d.fidelity);
    }
    let csv = budget.to_csv()?;
    let mut out = Output::new(&s.output_dir)?;
    out.json("noise.json", "noise", s, &budget)?;
    out.text("noise.csv", &csv)?;
    out.report();
    Ok(())
}

pub fn noise_grid(s: &Scenario, options: &GridOptions) -> Result<()> {
    let params = s.gate()?;
    let detuning_span = parse_frequency(&options.detuning_span)
        .with_context(|| format!("--detuning-span: cannot read {:?}", options.detuning_span))?;
    let grid: SensitivityGrid = sensitivity_grid(
        &params,
        s.theta,
        options.intensity_span,
        detuning_span,
        options.resolution,
        s.dt,
    )?;
    println!(
        "{0}×{0} grid; fidelity drop at the intensity edges {1:.5}, at the detuning edges {2:.5}",
        options.resolution,
        grid.intensity_edge_drop(),
        grid.detuning_edge_drop()
    );
    let csv = grid.to_csv()?;
    let mut out = Output::new(&s.output_dir)?;
    out.json("sensitivity.json", "noise --grid sensitivity", s, &grid)?;
    out.text("sensitivity.csv", &csv)?;
    out.report();
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CircuitKind {
    Maxcut,
    Qft,
}

pub struct CircuitOptions {
    pub scheme: SchemeChoice,
    pub ideal: bool,
    pub optimize: bool,
    pub layers: Option<usize>,
    pub grid: usize,
    pub evaluations: usize,
}

/// Channel metadata reported alongside circuit results.
#[derive(Serialize)]
struct ChannelInfo {
    theta: f64,
    omega0_mhz: f64,
    gate_time: f64,
    leakage: f64,
    params_hash: String,
    cached: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum CircuitRun {
    MaxCut(MaxCutResult),
    Qft(QftResult),
}

#[derive(Serialize)]
struct CircuitReport {
    kind: &'static str,
    ideal_channels: bool,
    channels: Vec<ChannelInfo>,
    runs: Vec<CircuitRun>,
}

/// Loads a cached channel or extracts and stores it.
fn channel(
    s: &Scenario,
    out: &mut Output,
    theta: f64,
    omega0_mhz: f64,
) -> Result<(TwoQubitChannel, ChannelInfo)> {
    let base = s.base_gate().with_omega0(mhz(omega0_mhz));
    let params = calibrated_gate(&base, theta)?;
    let decay = s.circuit.decay;
    let hash = params_hash(&params, theta, decay, s.dt);
    let name = format!("channels/{hash}.json");
    let cached = load_channel(&out.dir().join(&name));
    let was_cached = cached.is_some();
    let channel = match cached {
        Some(c) => c,
        None => {
            let c = extract_channel(&params, theta, decay, s.dt)?;
            std::fs::create_dir_all(out.dir().join("channels"))?;
            out.text(&name, &serde_json::to_string(&c)?)?;
            c
        }
    };
    let info = ChannelInfo {
        theta,
        omega0_mhz,
        gate_time: channel.gate_time,
        leakage: channel.leakage,
        params_hash: hash,
        cached: was_cached,
    };
    Ok((channel, info))
}

fn load_channel(path: &Path) -> Option<TwoQubitChannel> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn circuit(s: &Scenario, kind: CircuitKind, options: &CircuitOptions) -> Result<()> {
    let mut out = Output::new(&s.output_dir)?;
    let mut infos = Vec::new();
    let mut runs = Vec::new();
    let mut columns: Vec<(String, Distribution)> = Vec::new();
    for scheme in schemes(options.scheme) {
        let (mut gammas, mut betas) = (s.circuit.gammas.clone(), s.circuit.betas.clone());
        if kind == CircuitKind::Maxcut && options.optimize {
            let budget = OptimizerBudget {
                grid: options.grid,
                max_evaluations: options.evaluations,
                seed: s.seed,
            };
            let p = options.layers.unwrap_or(gammas.len());
            let best = optimize_angles(p, scheme, &ChannelSet::Ideal, budget)?;
            gammas = best.gammas;
            betas = best.betas;
        }
        let plan = match kind {
            CircuitKind::Maxcut => maxcut_gate_plan(&gammas, scheme),
            CircuitKind::Qft => qft_gate_plan(scheme),
        };
        let channels = if options.ideal {
            ChannelSet::Ideal
        } else {
            let mut table = Vec::new();
            for (theta, omega0_mhz) in plan {
                let (c, info) = channel(s, &mut out, theta, omega0_mhz)?;
                table.push(c);
                infos.push(info);
            }
            ChannelSet::Table(table)
        };
        let label = serde_json::to_value(scheme)?.as_str().unwrap_or("scheme").to_string();
        match kind {
            CircuitKind::Maxcut => {
                let r = maxcut_qaoa(&gammas, &betas, scheme, &channels)?;
                println!(
                    "{label}: fidelity {:.5}, expected cut {:.4}, two-qubit time {:.3} μs",
                    r.fidelity, r.expected_cut, r.two_qubit_time
                );
                if columns.is_empty() {
                    columns.push(("ideal".into(), r.ideal_distribution.clone()));
                }
                columns.push((label, r.distribution.clone()));
                runs.push(CircuitRun::MaxCut(r));
            }
            CircuitKind::Qft => {
                let (_, r) = qft3(scheme, &channels, &qft_input())?;
                println!("{label}: fidelity {:.5}, two-qubit time {:.3} μs", r.fidelity, r.two_qubit_time);
                if columns.is_empty() {
                    columns.push(("ideal".into(), Distribution::of(&qft_reference())));
                }
                columns.push((label, r.distribution.clone()));
                runs.push(CircuitRun::Qft(r));
            }
        }
    }
    let name = match kind {
        CircuitKind::Maxcut => "maxcut",
        CircuitKind::Qft => "qft",
    };
    let mut header = vec!["bitstring"];
    header.extend(columns.iter().map(|(l, _)| l.as_str()));
    let bitstrings = columns[0].1.bitstrings.clone();
    let csv = csv_text(
        &header,
        bitstrings.iter().enumerate().map(|(k, b)| {
            let mut row = vec![b.clone()];
            row.extend(columns.iter().map(|(_, d)| format!("{:.9}", d.probabilities[k])));
            row
        }),
    )?;
    let report = CircuitReport {
        kind: name,
        ideal_channels: options.ideal,
        channels: infos,
        runs,
    };
    out.json(&format!("{name}.json"), "circuit", s, &report)?;
    out.text(&format!("{name}_distribution.csv"), &csv)?;
    out.report();
    Ok(())
}

/// Exit code for a failed command: 2 when calibration cannot reach θ, 3 when
/// the integrator diverges, 1 otherwise.
pub fn exit_code(error: &anyhow::Error) -> u8 {
    use rydberg_cz::Error;
    match error.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::NoBracket { .. } | Error::BelowSupportedRange { .. }) => 2,
        Some(Error::StepUnstable { .. }) => 3,
        _ => 1,
    }
}
