//! Adiabatic single-pulse controlled-phase gates on two Rydberg atoms.
//!
//! Each atom has levels `|0⟩, |1⟩` (qubit), `|p⟩` (intermediate), `|r⟩`
//! (Rydberg) and `|d⟩` (everything the decays can reach outside the model).
//! Only `|1⟩` is driven, through `|p⟩` to `|r⟩`. The doubly excited pair state
//! is blockaded, so `|11⟩` follows a dark-ish eigenstate whose energy `E₀(t)`
//! accumulates the conditional phase `θ = ∫E₀ dt` while the single-excitation
//! states follow a true dark state and pick up nothing.
//!
//! The crate calibrates pulse widths for a target θ ([`calibration`]),
//! integrates the Lindblad dynamics ([`dynamics`]), runs Monte Carlo error
//! campaigns ([`noise`]) and puts the resulting noisy gate into small
//! circuits ([`circuits`]).
//!
//! ```
//! use rydberg_cz::calibration::solve_width;
//! use rydberg_cz::hamiltonians::GateParams;
//! use std::f64::consts::PI;
//!
//! let width = solve_width(PI, &GateParams::baseline()).unwrap();
//! assert!((width - 0.157).abs() < 0.002);
//! ```

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod circuits;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod noise;
pub mod pulses;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};

/// Guide chapters, compiled as doctests so their examples stay correct.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/units.md")]
    pub struct Units;
    #[doc = include_str!("../../../book/src/calibration.md")]
    pub struct Calibration;
    #[doc = include_str!("../../../book/src/dynamics.md")]
    pub struct Dynamics;
    #[doc = include_str!("../../../book/src/noise.md")]
    pub struct Noise;
    #[doc = include_str!("../../../book/src/circuits.md")]
    pub struct Circuits;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CommandLine;
}
