//! Pulse-width calibration from the adiabatic phase `θ = ∫₀^{T_g} E₀(t) dt`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::GateParams;
use crate::spectrum::e0_at;
use crate::units::mhz;

pub const SIMPSON_STEPS: usize = 4000;
/// Upper end of the width bracket, μs.
pub const DEFAULT_T_MAX: f64 = 3.0;
/// Smallest supported |θ|; a smaller phase is within a percent of the identity.
pub const MIN_THETA: f64 = 0.08 * PI;
/// Largest supported |θ|. Phases past π are allowed so circuits can request
/// `2γ` directly instead of folding it.
pub const MAX_THETA: f64 = 2.0 * PI;
const SOLVE_TOLERANCE: f64 = 1e-9;

fn simpson(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, steps: usize) -> Result<f64> {
    let steps = steps + steps % 2;
    let h = (b - a) / steps as f64;
    let mut sum = f(a)? + f(b)?;
    for k in 1..steps {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + k as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

/// `∫₀^{T_g} E₀ dt` for the pulse of `params` rescaled to `width`.
pub fn phase_integral(params: &GateParams, width: f64) -> Result<f64> {
    Ok(phase_integral_with_error(params, width)?.0)
}

/// Phase integral plus a step-halving error estimate.
pub fn phase_integral_with_error(params: &GateParams, width: f64) -> Result<(f64, f64)> {
    if !(width > 0.0) {
        return Err(Error::InvalidParameter("pulse width must be positive".into()));
    }
    let scaled = params.clone().with_width(width);
    let duration = scaled.gate_time();
    let f = |t: f64| e0_at(&scaled, t);
    let fine = simpson(f, 0.0, duration, SIMPSON_STEPS)?;
    let coarse = simpson(f, 0.0, duration, SIMPSON_STEPS / 2)?;
    Ok((fine, (fine - coarse).abs() / 15.0))
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() > MAX_THETA {
        return Err(Error::InvalidParameter(format!(
            "θ = {theta} rad outside the supported range (|θ| ≤ 2π)"
        )));
    }
    if theta.abs() < MIN_THETA {
        return Err(Error::BelowSupportedRange { theta });
    }
    Ok(())
}

/// Width `T` of the pulse shape in `params` whose phase integral equals θ.
/// The sign of θ must match the sign of Δ.
pub fn solve_width(theta: f64, params: &GateParams) -> Result<f64> {
    solve_width_within(theta, params, DEFAULT_T_MAX)
}

pub fn solve_width_within(theta: f64, params: &GateParams, t_max: f64) -> Result<f64> {
    check_theta(theta)?;
    params.validate()?;
    let no_bracket = Error::NoBracket { theta, t_max };
    if theta.signum() != params.delta.signum() {
        return Err(no_bracket);
    }
    let target = theta.abs();
    let g = |w: f64| phase_integral(params, w).map(f64::abs);
    let mut hi = t_max;
    let mut g_hi = g(hi)?;
    if g_hi < target {
        return Err(no_bracket);
    }
    let mut lo = 0.0;
    let mut g_lo = 0.0;
    while hi - lo > SOLVE_TOLERANCE * t_max {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        debug_assert!(
            g_lo <= g_mid && g_mid <= g_hi,
            "phase integral is not monotone on the bracket"
        );
        if g_mid < target {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    // The integral is linear in T, so one secant step lands on the root.
    let width = if g_hi > g_lo {
        lo + (target - g_lo) * (hi - lo) / (g_hi - g_lo)
    } else {
        0.5 * (lo + hi)
    };
    Ok(width)
}

/// Least-squares slope of θ against T through the origin, over `points`
/// phases evenly spaced on `[theta_min, theta_max]`.
pub fn slope_fit(params: &GateParams, theta_min: f64, theta_max: f64, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::InvalidParameter("slope fit needs at least two points".into()));
    }
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for k in 0..points {
        let theta = theta_min + (theta_max - theta_min) * k as f64 / (points - 1) as f64;
        let width = solve_width(theta, params)?;
        sxy += width * theta;
        sxx += width * width;
    }
    Ok(sxy / sxx)
}

/// Reference calibration of the Gaussian gate for one peak amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub omega0_mhz: f64,
    /// Gate time `4T` for θ = π, μs.
    pub gate_time: f64,
    /// Fidelity with spontaneous emission switched off.
    pub fidelity_decay_free: f64,
    /// Fidelity with spontaneous emission.
    pub fidelity_dissipative: f64,
    /// θ/T, rad/μs.
    pub slope: f64,
    /// Supported phase window, in units of π.
    pub theta_range: (f64, f64),
}

impl ReferenceRow {
    pub fn omega0(&self) -> f64 {
        mhz(self.omega0_mhz)
    }

    pub fn admits(&self, theta: f64) -> bool {
        let x = theta.abs() / PI;
        x >= self.theta_range.0 - 1e-12 && x <= self.theta_range.1 + 1e-12
    }
}

/// Published calibration for `Ω₂/2π = 200 MHz`, `Δ/2π = 1 GHz`.
pub const REFERENCE_ROWS: [ReferenceRow; 5] = [
    ReferenceRow {
        omega0_mhz: 80.0,
        gate_time: 5.994,
        fidelity_decay_free: 0.9999,
        fidelity_dissipative: 0.9982,
        slope: 2.0965,
        theta_range: (0.08, 0.16),
    },
    ReferenceRow {
        omega0_mhz: 100.0,
        gate_time: 2.7956,
        fidelity_decay_free: 0.9999,
        fidelity_dissipative: 0.9984,
        slope: 4.5064,
        theta_range: (0.1, 0.34),
    },
    ReferenceRow {
        omega0_mhz: 120.0,
        gate_time: 1.5352,
        fidelity_decay_free: 0.9997,
        fidelity_dissipative: 0.9984,
        slope: 8.2,
        theta_range: (0.22, 0.64),
    },
    ReferenceRow {
        omega0_mhz: 140.0,
        gate_time: 0.9428,
        fidelity_decay_free: 0.9993,
        fidelity_dissipative: 0.9980,
        slope: 13.337,
        theta_range: (0.34, 1.0),
    },
    ReferenceRow {
        omega0_mhz: 160.0,
        gate_time: 0.628,
        fidelity_decay_free: 0.9990,
        fidelity_dissipative: 0.9978,
        slope: 20.029,
        theta_range: (0.64, 1.0),
    },
];

/// The fastest reference row whose phase window contains θ.
pub fn suggest_row(theta: f64) -> Option<&'static ReferenceRow> {
    REFERENCE_ROWS.iter().rev().find(|row| row.admits(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::PulseEnvelope;

    fn at(omega0_mhz: f64) -> GateParams {
        GateParams::baseline().with_omega0(mhz(omega0_mhz))
    }

    /// Adaptive trapezoid with Richardson-free recursive bisection.
    fn adaptive_trapezoid(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            let whole = 0.5 * (b - a) * (fa + fb);
            let halves = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
            if depth > 40 || (whole - halves).abs() < 3.0 * tol {
                halves
            } else {
                rec(f, a, m, fa, fm, tol / 2.0, depth + 1) + rec(f, m, b, fm, fb, tol / 2.0, depth + 1)
            }
        }
        rec(f, a, b, f(a), f(b), tol, 0)
    }

    #[test]
    fn vanishing_window() {
        let v = phase_integral(&GateParams::baseline(), 1e-9).unwrap();
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn baseline_integral_near_pi() {
        let (v, err) = phase_integral_with_error(&GateParams::baseline(), 0.157).unwrap();
        assert!((v / PI - 1.0).abs() < 0.02);
        assert!(err < 1e-6);
    }

    #[test]
    fn simpson_agrees_with_adaptive_trapezoid() {
        let params = GateParams::baseline();
        let simpson = phase_integral(&params, 0.157).unwrap();
        let f = |t: f64| e0_at(&params, t).unwrap();
        let trapezoid = adaptive_trapezoid(&f, 0.0, params.gate_time(), 1e-8);
        assert!((simpson - trapezoid).abs() < 1e-6, "{simpson} vs {trapezoid}");
    }

    #[test]
    fn integral_is_linear_in_width() {
        let params = GateParams::baseline();
        let a = phase_integral(&params, 0.1).unwrap();
        let b = phase_integral(&params, 0.3).unwrap();
        assert!((b / a - 3.0).abs() < 1e-9);
    }

    #[test]
    fn solve_pi_at_160() {
        let t = solve_width(PI, &at(160.0)).unwrap();
        assert!((t - 0.157).abs() < 0.002, "T = {t}");
        assert!((phase_integral(&at(160.0), t).unwrap() - PI).abs() < 1e-4);
    }

    #[test]
    fn solve_pi_at_80() {
        let t = solve_width(PI, &at(80.0)).unwrap();
        assert!((4.0 * t / 5.994 - 1.0).abs() < 0.01, "4T = {}", 4.0 * t);
    }

    #[test]
    fn solve_matches_slope_reference() {
        let t = solve_width(PI / 2.0, &at(140.0)).unwrap();
        let reference = (PI / 2.0) / 13.337;
        assert!((t / reference - 1.0).abs() < 0.03);
    }

    #[test]
    fn refuses_small_angles() {
        assert!(matches!(
            solve_width(0.05 * PI, &at(160.0)),
            Err(Error::BelowSupportedRange { .. })
        ));
    }

    #[test]
    fn no_bracket_cases() {
        assert!(matches!(
            solve_width_within(PI, &at(80.0), 0.5),
            Err(Error::NoBracket { .. })
        ));
        // Positive Δ never accumulates a negative phase.
        assert!(matches!(
            solve_width(-PI / 2.0, &at(120.0)),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn negative_detuning_mirrors() {
        let pos = solve_width(PI / 2.0, &at(120.0)).unwrap();
        let neg = solve_width(-PI / 2.0, &at(120.0).with_delta(-mhz(1000.0))).unwrap();
        assert!((pos - neg).abs() < 1e-9);
    }

    #[test]
    fn round_trip_over_supported_range() {
        let params = at(140.0);
        for k in 0..8 {
            let theta = (0.34 + 0.66 * k as f64 / 7.0) * PI;
            let t = solve_width(theta, &params).unwrap();
            assert!((phase_integral(&params, t).unwrap() - theta).abs() < 1e-3);
        }
    }

    #[test]
    fn slopes_match_reference() {
        for row in [&REFERENCE_ROWS[0], &REFERENCE_ROWS[4]] {
            let (lo, hi) = row.theta_range;
            let slope = slope_fit(&at(row.omega0_mhz), lo * PI, hi * PI, 10).unwrap();
            assert!((slope / row.slope - 1.0).abs() < 0.02, "{slope} vs {}", row.slope);
            let doubled = slope_fit(&at(row.omega0_mhz), lo * PI, hi * PI, 20).unwrap();
            assert!((doubled / slope - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn other_shapes_calibrate() {
        let params = GateParams::baseline().with_pulse(PulseEnvelope::super_gaussian(mhz(130.0), 0.2));
        let t = solve_width(PI, &params).unwrap();
        assert!((t - 0.217).abs() < 0.005, "T₁ = {t}");
    }

    #[test]
    fn row_suggestion_prefers_fast_gates() {
        assert_eq!(suggest_row(PI).unwrap().omega0_mhz, 160.0);
        assert_eq!(suggest_row(0.5 * PI).unwrap().omega0_mhz, 140.0);
        assert_eq!(suggest_row(0.09 * PI).unwrap().omega0_mhz, 80.0);
        assert!(suggest_row(0.05 * PI).is_none());
    }
}
