use thiserror::Error;

/// Everything that can go wrong while building, calibrating or simulating a gate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("time {t} μs outside the pulse domain [0, {duration}] μs")]
    OutOfDomain { t: f64, duration: f64 },

    #[error("intermediate detuning must be nonzero")]
    DivisionByZero,

    #[error("arccos argument {argument} is outside [-1, 1]")]
    BranchFailure { argument: f64 },

    #[error("eigenvalue gap {gap:.3e} too small for an adiabaticity estimate")]
    DegenerateGap { gap: f64 },

    #[error("phase integral never reaches θ = {theta} rad on (0, {t_max}] μs")]
    NoBracket { theta: f64, t_max: f64 },

    #[error(
        "θ = {theta} rad is below the supported range (|θ| ≥ 0.08π); \
         such a gate is within 1% of the identity and is better left out"
    )]
    BelowSupportedRange { theta: f64 },

    #[error("atoms closer than {distance} μm; the van der Waals shift diverges")]
    Singularity { distance: f64 },

    #[error("trace drifted by {drift:.3e}; the time step is probably too large")]
    StepUnstable { drift: f64 },

    #[error("detection correction is singular (ε = {epsilon})")]
    NonInvertible { epsilon: f64 },

    #[error("expected {expected} angles per schedule, got γ: {gammas}, β: {betas}")]
    AngleCountMismatch {
        expected: usize,
        gammas: usize,
        betas: usize,
    },

    #[error("no two-qubit channel available for θ = {theta} rad")]
    MissingChannel { theta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
