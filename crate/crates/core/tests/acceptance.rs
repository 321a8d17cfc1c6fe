//! Acceptance suite. Prints one PASS/FAIL line per check and a summary.
//!
//! The binary exits successfully even when checks fail, so that the report
//! is always produced as part of `cargo test`. Set `ACCEPTANCE_STRICT=1` to
//! turn any FAIL into a nonzero exit.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rydberg_cz::calibration::{solve_width, REFERENCE_ROWS};
use rydberg_cz::circuits::{
    calibrated_gate, extract_channel, maxcut_qaoa, qft3, qft_input, ChannelSet, TwoQubitChannel,
    TwoQubitScheme,
};
use rydberg_cz::circuits::qaoa::reference_angles;
use rydberg_cz::dynamics::{simulate_gate, Diagnostics, GateRun, DEFAULT_DT};
use rydberg_cz::hamiltonians::{h11_matrix, GateParams, SpeciesParams};
use rydberg_cz::linalg::eigh;
use rydberg_cz::noise::{
    default_detuning_span, detection_correct, detection_measure, detection_penalty, error_budget,
    run_doppler_mc, run_inhomogeneous_mc, sensitivity_grid, Geometry, NoiseConfig, RawPopulations,
    TrapParams,
};
use rydberg_cz::pulses::PulseEnvelope;
use rydberg_cz::spectrum::{adiabaticity_maxima, analytic_roots, cubic_coefficients};
use rydberg_cz::units::mhz;

// Tolerances.
const WIDTH_TOL: f64 = 0.002;
const GATE_TIME_REL_TOL: f64 = 0.01;
const FIDELITY_TOL: f64 = 5e-4;
const SWEEP_FLOOR: f64 = 0.997;
const SWEEP_MAX_TIME: f64 = 1.0;
const SWEEP_POINTS: usize = 10;
const SPECTRUM_DRAWS: usize = 10_000;
const ROOT_TOL: f64 = 1e-9;
const VIETA_TOL: f64 = 1e-8;
const ADIABATIC_LIMIT: f64 = 0.15;
const ADIABATIC_SAMPLES: usize = 2000;
const CAMPAIGN_TRIALS: usize = 100;
const CAMPAIGN_SIGMAS: f64 = 3.0;
const SCALAR_NOISE_LIMIT: f64 = 5e-4;
const DEPHASING_TOL: f64 = 1e-3;
const COMBINED_TOL: f64 = 2e-3;
const DETECTION_TOL: f64 = 2e-3;
const ROUND_TRIP_TOL: f64 = 1e-12;
const ROUND_TRIP_DRAWS: usize = 1000;
const CIRCUIT_TOL: f64 = 2e-3;
const IDEAL_CIRCUIT_TOL: f64 = 1e-9;
const HYGIENE_TOL: f64 = 1e-6;
const LOW_TEMPERATURE_FLOOR: f64 = 0.98;

struct Report {
    passed: usize,
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.passed += 1;
            println!("PASS {name}: {detail}");
        } else {
            self.failed += 1;
            println!("FAIL {name}: {detail}");
        }
    }
}

/// Diagnostics of every deterministic gate run, checked at the end.
static RUNS: Mutex<Vec<(String, bool, Diagnostics)>> = Mutex::new(Vec::new());

fn run(label: &str, params: &GateParams, theta: f64, decay: bool) -> GateRun {
    let r = simulate_gate(params, theta, decay, DEFAULT_DT).unwrap_or_else(|e| panic!("{label}: {e}"));
    RUNS.lock()
        .unwrap()
        .push((label.to_string(), decay, r.diagnostics.clone()));
    r
}

fn at_omega0(omega0_mhz: f64) -> GateParams {
    GateParams::baseline().with_omega0(mhz(omega0_mhz))
}

fn calibrated(omega0_mhz: f64, theta: f64) -> GateParams {
    let p = at_omega0(omega0_mhz);
    let w = solve_width(theta, &p).expect("calibration");
    p.with_width(w)
}

fn calibration(report: &mut Report) {
    let t = solve_width(PI, &GateParams::baseline()).unwrap();
    report.check(
        "1 baseline width",
        (t - 0.157).abs() <= WIDTH_TOL,
        format!("T = {t:.5} μs (want 0.157 ± {WIDTH_TOL})"),
    );
    for row in &REFERENCE_ROWS {
        let t = solve_width(PI, &at_omega0(row.omega0_mhz)).unwrap();
        let rel = (4.0 * t - row.gate_time).abs() / row.gate_time;
        report.check(
            &format!("1 gate time at {} MHz", row.omega0_mhz),
            rel <= GATE_TIME_REL_TOL,
            format!("4T = {:.4} μs (want {} within 1%)", 4.0 * t, row.gate_time),
        );
    }
}

fn table_fidelities(report: &mut Report) {
    let started = Instant::now();
    for row in &REFERENCE_ROWS {
        let params = calibrated(row.omega0_mhz, PI);
        let f = run(&format!("decay-free {}", row.omega0_mhz), &params, PI, false).fidelity;
        report.check(
            &format!("2 decay-free fidelity at {} MHz", row.omega0_mhz),
            (f - row.fidelity_decay_free).abs() <= FIDELITY_TOL,
            format!("{f:.5} (want {} ± {FIDELITY_TOL})", row.fidelity_decay_free),
        );
    }
    println!("     decay-free rows took {:.1} s", started.elapsed().as_secs_f64());
    for row in &REFERENCE_ROWS {
        let params = calibrated(row.omega0_mhz, PI);
        let f = run(&format!("dissipative {}", row.omega0_mhz), &params, PI, true).fidelity;
        report.check(
            &format!("3 dissipative fidelity at {} MHz", row.omega0_mhz),
            (f - row.fidelity_dissipative).abs() <= FIDELITY_TOL,
            format!("{f:.5} (want {} ± {FIDELITY_TOL})", row.fidelity_dissipative),
        );
    }

    let base = GateParams::baseline();
    let stair = base.clone().with_pulse(PulseEnvelope::staircase(base.pulse.clone(), 0.02, 31));
    let f = run("staircase", &stair, PI, true).fidelity;
    report.check(
        "3 staircase pulse",
        (f - 0.9977).abs() <= FIDELITY_TOL,
        format!("{f:.5} over {:.3} μs (want 0.9977 ± {FIDELITY_TOL})", stair.gate_time()),
    );
    let corrected = base.clone().with_pulse(PulseEnvelope::corrected_gaussian(base.omega0(), 0.157));
    let w = solve_width(PI, &corrected).unwrap();
    let f = run("corrected", &corrected.with_width(w), PI, true).fidelity;
    report.check(
        "3 corrected pulse",
        (f - 0.9979).abs() <= FIDELITY_TOL,
        format!("{f:.5} with T = {w:.4} μs (want 0.9979 ± {FIDELITY_TOL})"),
    );
}

fn theta_sweep(report: &mut Report) {
    for row in &REFERENCE_ROWS {
        let (lo, hi) = row.theta_range;
        let mut worst = (f64::INFINITY, 0.0);
        let mut longest: f64 = 0.0;
        for k in 0..SWEEP_POINTS {
            let theta = PI * (lo + (hi - lo) * k as f64 / (SWEEP_POINTS - 1) as f64);
            let params = calibrated(row.omega0_mhz, theta);
            let f = run(&format!("sweep {} {theta:.3}", row.omega0_mhz), &params, theta, true).fidelity;
            if f < worst.0 {
                worst = (f, theta / PI);
            }
            longest = longest.max(params.gate_time());
        }
        report.check(
            &format!("4 θ sweep at {} MHz", row.omega0_mhz),
            worst.0 > SWEEP_FLOOR && longest < SWEEP_MAX_TIME,
            format!(
                "θ/π ∈ [{lo}, {hi}]: min fidelity {:.5} at θ/π = {:.3}, longest gate {longest:.3} μs (want > {SWEEP_FLOOR}, < {SWEEP_MAX_TIME} μs)",
                worst.0, worst.1
            ),
        );
    }
}

fn spectrum(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_root, mut worst_vieta) = (0.0f64, 0.0f64);
    for _ in 0..SPECTRUM_DRAWS {
        let o1 = rng.random_range(0.0..mhz(400.0));
        let o2 = rng.random_range(mhz(20.0)..mhz(400.0));
        let mut d = rng.random_range(mhz(100.0)..mhz(2000.0));
        if rng.random::<bool>() {
            d = -d;
        }
        let r = analytic_roots(o1, o2, d).unwrap();
        let values = eigh(&h11_matrix(o1, o2, d)).unwrap().values;
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut roots = r.roots();
        roots.sort_by(f64::total_cmp);
        for (x, y) in roots.iter().zip(&values) {
            worst_root = worst_root.max((x - y).abs() / scale);
        }
        let (a, b, c) = cubic_coefficients(o1, o2, d).unwrap();
        let [e0, ep, em] = r.roots();
        worst_vieta = worst_vieta
            .max((e0 + ep + em + a).abs() / a.abs().max(scale))
            .max((e0 * ep + e0 * em + ep * em - b).abs() / b.abs().max(scale * scale))
            .max((e0 * ep * em + c).abs() / c.abs().max(1.0));
    }
    report.check(
        "5 analytic roots vs eigh",
        worst_root <= ROOT_TOL,
        format!("{SPECTRUM_DRAWS} draws, worst relative gap {worst_root:.2e} (want ≤ {ROOT_TOL:e})"),
    );
    report.check(
        "5 Vieta identities",
        worst_vieta <= VIETA_TOL,
        format!("worst relative residual {worst_vieta:.2e} (want ≤ {VIETA_TOL:e})"),
    );
}

fn adiabaticity(report: &mut Report) {
    let (a01, a11) = adiabaticity_maxima(&GateParams::baseline(), ADIABATIC_SAMPLES).unwrap();
    report.check(
        "6 adiabaticity",
        a01 < ADIABATIC_LIMIT && a11 < ADIABATIC_LIMIT,
        format!("max 01 monitor {a01:.4}, max 11 monitor {a11:.4} (want < {ADIABATIC_LIMIT})"),
    );
}

fn within_sigmas(measured: f64, std_error: f64, target: f64) -> bool {
    (measured - target).abs() <= CAMPAIGN_SIGMAS * std_error
}

fn noise_budget(report: &mut Report) {
    let params = GateParams::baseline();
    let trap = TrapParams::default();
    let config = NoiseConfig::default().with_trials(CAMPAIGN_TRIALS);
    let started = Instant::now();
    let budget = error_budget(&params, &trap, &config).unwrap();
    println!("     error budget took {:.1} s", started.elapsed().as_secs_f64());
    let row = |name: &str| budget.row(name).unwrap_or_else(|| panic!("missing row {name}"));

    let d = row("doppler and vdW fluctuation");
    report.check(
        "7 Doppler and vdW",
        within_sigmas(d.error, d.std_error, 0.00118),
        format!("error {:.5} ± {:.5} (want 0.00118 within 3σ)", d.error, d.std_error),
    );
    let d = row("inhomogeneous Rabi frequency");
    report.check(
        "7 inhomogeneous Rabi",
        within_sigmas(d.error, d.std_error, 0.00044),
        format!("error {:.5} ± {:.5} (want 0.00044 within 3σ)", d.error, d.std_error),
    );
    let d = row("Rabi frequency fluctuation");
    report.check(
        "7 intensity fluctuation",
        d.error.abs() <= SCALAR_NOISE_LIMIT,
        format!("error {:.5} ± {:.5} (want |error| ≤ {SCALAR_NOISE_LIMIT})", d.error, d.std_error),
    );
    let d = row("detuning fluctuation");
    report.check(
        "7 detuning fluctuation",
        d.error.abs() <= SCALAR_NOISE_LIMIT,
        format!("error {:.5} ± {:.5} (want |error| ≤ {SCALAR_NOISE_LIMIT})", d.error, d.std_error),
    );
    let d = row("laser dephasing");
    report.check(
        "7 dephasing",
        (d.error - 0.01151).abs() <= DEPHASING_TOL,
        format!("error {:.5} at 10 kHz (want 0.01151 ± {DEPHASING_TOL})", d.error),
    );
    report.check(
        "7 combined estimate",
        (budget.combined - 0.9846).abs() <= COMBINED_TOL,
        format!(
            "{:.5} ± {:.5} from ideal {:.5} (want 0.9846 ± {COMBINED_TOL})",
            budget.combined, budget.combined_std_error, budget.ideal_fidelity
        ),
    );
    let rows: f64 = budget.rows.iter().map(|r| r.error).sum();
    report.check(
        "7 budget arithmetic",
        (budget.ideal_fidelity - rows - budget.combined).abs() < 1e-12,
        format!("ideal − Σ rows = {:.6}", budget.ideal_fidelity - rows),
    );

    let quiet = error_budget(&params, &trap, &NoiseConfig::quiet()).unwrap();
    report.check(
        "7 all channels off",
        quiet.rows.is_empty() && (quiet.combined - 0.9990).abs() <= FIDELITY_TOL,
        format!("{:.5} with no rows (want 0.9990 ± {FIDELITY_TOL})", quiet.combined),
    );

    // Orderings.
    let doppler_at = |temperature: f64, separation: f64| {
        let c = NoiseConfig {
            separation,
            ..config.clone()
        };
        run_doppler_mc(&params, &trap.clone().at_temperature(temperature), &c).unwrap()
    };
    let temps = [1.0, 5.2, 10.0, 20.0];
    let campaigns: Vec<_> = temps.iter().map(|&t| doppler_at(t, 5.5)).collect();
    let errors: Vec<f64> = campaigns.iter().map(|c| c.mean_error).collect();
    report.check(
        "7 Doppler error grows with temperature",
        errors.windows(2).all(|w| w[0] <= w[1]),
        format!("errors at {temps:?} μK: {errors:.5?}"),
    );
    let hot = &campaigns[3];
    report.check(
        "7 fidelity above 0.98 below 20 μK",
        hot.mean_fidelity > LOW_TEMPERATURE_FLOOR,
        format!("{:.5} at 20 μK (want > {LOW_TEMPERATURE_FLOOR})", hot.mean_fidelity),
    );
    let near = doppler_at(5.2, 4.5);
    report.check(
        "7 closer atoms reduce the Doppler error",
        near.mean_error < errors[1],
        format!("{:.5} at 4.5 μm vs {:.5} at 5.5 μm", near.mean_error, errors[1]),
    );
    let individual = run_inhomogeneous_mc(&params, &trap, Geometry::IndividualZ, &config).unwrap();
    let global_z = NoiseConfig::for_geometry(Geometry::GlobalZSeparation).with_trials(CAMPAIGN_TRIALS);
    let global = run_inhomogeneous_mc(&params, &trap, Geometry::GlobalZSeparation, &global_z).unwrap();
    report.check(
        "7 global-z more sensitive to inhomogeneity",
        global.mean_error > individual.mean_error,
        format!("{:.5} vs {:.5} individual", global.mean_error, individual.mean_error),
    );
    let grid = sensitivity_grid(&params, PI, 0.1, default_detuning_span(), 5, DEFAULT_DT).unwrap();
    report.check(
        "7 detuning axis steeper than intensity axis",
        grid.detuning_edge_drop() > grid.intensity_edge_drop(),
        format!(
            "edge drops: detuning {:.5}, intensity {:.5}",
            grid.detuning_edge_drop(),
            grid.intensity_edge_drop()
        ),
    );
}

fn detection(report: &mut Report) {
    let params = GateParams::baseline();
    let model = rydberg_cz::dynamics::LindbladModel::for_gate(&params, true);
    let rho0 = rydberg_cz::linalg::DensityMatrix::from_pure(&rydberg_cz::dynamics::initial_state());
    let traj = rydberg_cz::dynamics::evolve(&rho0, &model, params.gate_time(), DEFAULT_DT).unwrap();
    let rho = traj.final_state();
    for (epsilon, want) in [(0.03, 0.03), (0.01, 0.01)] {
        let penalty = detection_penalty(rho, PI, epsilon, 0.0047).unwrap();
        report.check(
            &format!("8 detection penalty at ε = {epsilon}"),
            (penalty - want).abs() <= DETECTION_TOL,
            format!("{penalty:.5} (want ≈ {want} ± {DETECTION_TOL})"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..ROUND_TRIP_DRAWS {
        let cells: Vec<f64> = (0..9).map(|_| rng.random::<f64>()).collect();
        let total: f64 = cells.iter().sum();
        let mut table = [[0.0; 3]; 3];
        for (n, c) in cells.iter().enumerate() {
            table[n / 3][n % 3] = c / total;
        }
        let raw = RawPopulations(table);
        let (e, ep) = (rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
        let measured = detection_measure(&raw, e, ep).unwrap();
        let back = detection_correct(&measured, e, ep, &raw).unwrap();
        let want = [table[0][0], table[0][1], table[1][0], table[1][1]];
        for (a, b) in back.iter().zip(want) {
            worst = worst.max((a - b).abs());
        }
    }
    report.check(
        "8 correction inverts measurement",
        worst <= ROUND_TRIP_TOL,
        format!("{ROUND_TRIP_DRAWS} random tables, worst deviation {worst:.2e}"),
    );
}

fn channel(omega0_mhz: f64, theta: f64) -> TwoQubitChannel {
    let params = calibrated_gate(&at_omega0(omega0_mhz), theta).unwrap();
    extract_channel(&params, theta, true, DEFAULT_DT).unwrap()
}

fn circuits(report: &mut Report) {
    let started = Instant::now();
    let (gammas, betas) = reference_angles();
    let cz = channel(160.0, PI);
    let maxcut_table = ChannelSet::Table(vec![
        channel(140.0, 2.0 * gammas[0]),
        channel(140.0, 2.0 * gammas[1]),
        cz.clone(),
    ]);
    for (scheme, want, time) in [
        (TwoQubitScheme::CzTheta, 0.9940, 3.383),
        (TwoQubitScheme::CzDecomposition, 0.9840, 5.024),
    ] {
        let r = maxcut_qaoa(&gammas, &betas, scheme, &maxcut_table).unwrap();
        report.check(
            &format!("9 Max-Cut fidelity, {scheme:?}"),
            (r.fidelity - want).abs() <= CIRCUIT_TOL,
            format!("{:.5} (want {want} ± {CIRCUIT_TOL})", r.fidelity),
        );
        report.check(
            &format!("9 Max-Cut gate time, {scheme:?}"),
            (r.two_qubit_time - time).abs() <= GATE_TIME_REL_TOL * time,
            format!("{:.3} μs (want {time} within 1%)", r.two_qubit_time),
        );
    }
    let qft_table = ChannelSet::Table(vec![channel(120.0, -PI / 2.0), channel(100.0, -PI / 4.0), cz]);
    for (scheme, want, time) in [
        (TwoQubitScheme::CzTheta, 0.9987, 2.23),
        (TwoQubitScheme::CzDecomposition, 0.9808, 3.768),
    ] {
        let (_, r) = qft3(scheme, &qft_table, &qft_input()).unwrap();
        report.check(
            &format!("9 QFT fidelity, {scheme:?}"),
            (r.fidelity - want).abs() <= CIRCUIT_TOL,
            format!("{:.5} (want {want} ± {CIRCUIT_TOL})", r.fidelity),
        );
        report.check(
            &format!("9 QFT gate time, {scheme:?}"),
            (r.two_qubit_time - time).abs() <= GATE_TIME_REL_TOL * time,
            format!("{:.3} μs (want {time} within 1%)", r.two_qubit_time),
        );
    }
    println!("     circuits took {:.1} s", started.elapsed().as_secs_f64());

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = rng.random_range(1..4);
        let g: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0 * PI..2.0 * PI)).collect();
        let b: Vec<f64> = (0..p).map(|_| rng.random_range(-PI..PI)).collect();
        for scheme in [TwoQubitScheme::CzTheta, TwoQubitScheme::CzDecomposition] {
            let r = maxcut_qaoa(&g, &b, scheme, &ChannelSet::Ideal).unwrap();
            worst = worst.max((r.fidelity - 1.0).abs());
        }
    }
    for scheme in [TwoQubitScheme::CzTheta, TwoQubitScheme::CzDecomposition] {
        let (_, r) = qft3(scheme, &ChannelSet::Ideal, &qft_input()).unwrap();
        worst = worst.max((r.fidelity - 1.0).abs());
    }
    report.check(
        "9 ideal channels give fidelity 1",
        worst <= IDEAL_CIRCUIT_TOL,
        format!("worst deviation {worst:.2e} over 200 random Max-Cut circuits and the QFT"),
    );
}

fn species(report: &mut Report) {
    let params = GateParams::baseline().with_species(SpeciesParams::cs133());
    let f = run("cs133", &params, PI, true).fidelity;
    report.check(
        "10 Cs133 preset",
        (f - 0.9981).abs() <= FIDELITY_TOL && (params.gate_time() - 0.628).abs() < 1e-3,
        format!("{f:.5} in {:.3} μs (want 0.9981 ± {FIDELITY_TOL})", params.gate_time()),
    );
}

fn other_pulses(report: &mut Report) {
    let base = GateParams::baseline();
    let sg = base.clone().with_pulse(PulseEnvelope::super_gaussian(mhz(130.0), 0.217));
    let f = run("super-gaussian", &sg, PI, true).fidelity;
    report.check(
        "11 super-Gaussian pulse",
        (f - 0.9980).abs() <= FIDELITY_TOL,
        format!("{f:.5} (want 0.9980 ± {FIDELITY_TOL})"),
    );
    let sc = base.with_pulse(PulseEnvelope::sigmoid_cosine(mhz(130.0), 0.6875));
    let f = run("sigmoid-cosine", &sc, PI, true).fidelity;
    report.check(
        "11 sigmoid-cosine pulse",
        (f - 0.9982).abs() <= FIDELITY_TOL,
        format!("{f:.5} (want 0.9982 ± {FIDELITY_TOL})"),
    );
}

fn hygiene(report: &mut Report) {
    let base = GateParams::baseline();
    let coarse = simulate_gate(&base, PI, true, DEFAULT_DT).unwrap().fidelity;
    let fine = simulate_gate(&base, PI, true, 0.5 * DEFAULT_DT).unwrap().fidelity;
    report.check(
        "12 halving dt",
        (coarse - fine).abs() < HYGIENE_TOL,
        format!("fidelity shift {:.2e}", (coarse - fine).abs()),
    );
    let runs = RUNS.lock().unwrap();
    let drift = runs.iter().map(|r| r.2.trace_drift).fold(0.0, f64::max);
    let min_eig = runs.iter().map(|r| r.2.min_eigenvalue).fold(f64::INFINITY, f64::min);
    let purity = runs
        .iter()
        .filter(|r| !r.1)
        .map(|r| ((r.2.final_purity - r.2.initial_purity).abs(), r.0.as_str()))
        .fold((0.0, ""), |a, b| if b.0 > a.0 { b } else { a });
    report.check(
        "12 trace drift",
        drift < HYGIENE_TOL,
        format!("worst {drift:.2e} over {} runs", runs.len()),
    );
    report.check(
        "12 positivity",
        min_eig >= -HYGIENE_TOL,
        format!("smallest eigenvalue {min_eig:.2e}"),
    );
    report.check(
        "12 purity without jumps",
        purity.0 < HYGIENE_TOL,
        format!("worst purity change {:.2e} ({})", purity.0, purity.1),
    );
}

fn main() {
    let started = Instant::now();
    let mut report = Report { passed: 0, failed: 0 };
    type Section = (&'static str, fn(&mut Report));
    let sections: [Section; 11] = [
        ("calibration", calibration),
        ("table fidelities", table_fidelities),
        ("θ sweep", theta_sweep),
        ("spectrum", spectrum),
        ("adiabaticity", adiabaticity),
        ("detection", detection),
        ("species", species),
        ("pulse shapes", other_pulses),
        ("circuits", circuits),
        ("noise budget", noise_budget),
        ("hygiene", hygiene),
    ];
    for (name, section) in sections {
        let t = Instant::now();
        section(&mut report);
        println!("     [{name}: {:.1} s]", t.elapsed().as_secs_f64());
    }
    println!(
        "acceptance: {} passed, {} failed in {:.0} s",
        report.passed,
        report.failed,
        started.elapsed().as_secs_f64()
    );
    if report.failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
