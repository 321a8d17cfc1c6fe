//! `rydberg-cz`: calibrate, simulate and stress-test adiabatic CZ_θ gates.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod scenario;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CircuitKind, CircuitOptions, Grid, GridOptions, NoiseChannel};
use scenario::{Overrides, SchemeChoice};

const ABOUT: &str = "Adiabatic single-pulse CZ_θ gates on two Rydberg atoms.

Frequencies are written the laboratory way: \"160MHz\" means Ω/2π = 160 MHz,
i.e. 2π·160 rad/μs internally. kHz, GHz, Hz and rad/us are accepted too; a
bare number is MHz. Angles accept pi, 0.5pi, -pi/4 or radians. Times are μs.

Settings come from an optional TOML scenario (--scenario) with flags on top.
Every JSON output embeds the fully resolved scenario. Output goes to --out,
else $RYDBERG_CZ_OUT, else ./rydberg-cz-out.

Exit codes: 0 success, 1 other errors, 2 calibration cannot reach θ,
3 integrator unstable (reduce --dt).";

#[derive(Parser)]
#[command(name = "rydberg-cz", version, about = "Adiabatic single-pulse CZ_θ gates on two Rydberg atoms", long_about = ABOUT)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Calibrate the pulse width for θ and report the adiabaticity margins.
    #[command(after_long_help = "Writes calibrate.json. With --table2, writes reference_slopes.json and reference_slopes.csv with columns:
  omega0_mhz, theta_min, theta_max (rad), slope (θ/T, rad/μs), reference_slope,
  relative_deviation, gate_time_us (4T at θ = π), reference_gate_time_us")]
    Calibrate {
        /// Fit θ/T over each reference row's phase window and compare.
        #[arg(long)]
        table2: bool,
    },
    /// Integrate the master equation for one gate.
    #[command(after_long_help = "Writes simulate.json and populations.csv with columns:
  t (μs), P_<state> for each tracked two-atom state, trace, fidelity
  (fidelity of the state at time t against the target gate output)")]
    Simulate {
        /// Switch spontaneous emission off.
        #[arg(long)]
        no_decay: bool,
        /// Add laser dephasing at the scenario's rates.
        #[arg(long)]
        dephasing: bool,
        /// Store every n-th step in populations.csv.
        #[arg(long, default_value_t = 20)]
        record_every: usize,
    },
    /// Calibrate and simulate a grid of phases.
    #[command(after_long_help = "Writes scan_theta.json and scan_theta.csv with columns:
  theta (rad), theta_over_pi, omega0_mhz, width_us, gate_time_us, fidelity, leakage")]
    ScanTheta {
        #[arg(long, default_value = "0.1pi", allow_hyphen_values = true)]
        from: String,
        #[arg(long, default_value = "pi", allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Keep the scenario's Ω₀ instead of the fastest row admitting each θ.
        #[arg(long)]
        fixed_omega0: bool,
        #[arg(long)]
        no_decay: bool,
    },
    /// Monte Carlo error budget, or a deterministic sensitivity map.
    #[command(after_long_help = "Writes noise.json and noise.csv with columns:
  channel, error (fidelity loss), std_error, fidelity
  with an 'ideal' first row, a 'combined' row and one row per detection ε.
With --grid sensitivity, writes sensitivity.json and sensitivity.csv with columns:
  intensity (relative δI), detuning_mhz (δ/2π), fidelity")]
    Noise {
        /// Channels to include; repeat the flag for several. Default: all.
        #[arg(long, value_enum)]
        channel: Vec<NoiseChannel>,
        #[arg(long, value_enum)]
        grid: Option<Grid>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 21)]
        resolution: usize,
        /// Largest relative intensity offset on the grid.
        #[arg(long, default_value_t = 0.1)]
        intensity_span: f64,
        /// Largest two-photon detuning on the grid.
        #[arg(long, default_value = "1MHz")]
        detuning_span: String,
    },
    /// Run Max-Cut QAOA or the three-qubit Fourier transform with simulated gates.
    #[command(after_long_help = "Writes <kind>.json and <kind>_distribution.csv with columns:
  bitstring (qubit 0 first), ideal, then one probability column per scheme.
Extracted channels are cached under <out>/channels/<hash>.json, keyed by a
hash of the gate parameters, θ, decay setting and dt.")]
    Circuit {
        #[arg(value_enum)]
        kind: CircuitKind,
        #[arg(long, value_enum, default_value = "both")]
        scheme: SchemeChoice,
        /// Use noiseless gates instead of simulated channels.
        #[arg(long)]
        ideal: bool,
        /// Max-Cut only: search the angles with ideal gates first.
        #[arg(long)]
        optimize: bool,
        /// Max-Cut layers when optimizing; defaults to the scenario's angle count.
        #[arg(long)]
        layers: Option<usize>,
        /// Grid points per angle in the optimizer's coarse search.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Objective evaluations allowed in the optimizer's refinement.
        #[arg(long, default_value_t = 4000)]
        evaluations: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let s = scenario::load(&cli.overrides)?;
    match cli.command {
        Command::Calibrate { table2: true } => commands::calibrate_table(&s),
        Command::Calibrate { table2: false } => commands::calibrate(&s),
        Command::Simulate {
            no_decay,
            dephasing,
            record_every,
        } => commands::simulate(&s, !no_decay, dephasing, record_every),
        Command::ScanTheta {
            from,
            to,
            points,
            fixed_omega0,
            no_decay,
        } => commands::scan_theta(&s, &from, &to, points, fixed_omega0, !no_decay),
        Command::Noise {
            channel,
            grid,
            resolution,
            intensity_span,
            detuning_span,
        } => match grid {
            Some(Grid::Sensitivity) => commands::noise_grid(
                &s,
                &GridOptions {
                    resolution,
                    intensity_span,
                    detuning_span,
                },
            ),
            None => commands::noise(&s, &channel),
        },
        Command::Circuit {
            kind,
            scheme,
            ideal,
            optimize,
            layers,
            grid,
            evaluations,
        } => commands::circuit(
            &s,
            kind,
            &CircuitOptions {
                scheme,
                ideal,
                optimize,
                layers,
                grid,
                evaluations,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
