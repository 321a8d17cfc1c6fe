//! Closed-form eigenstructure of the effective three-level manifolds.
//!
//! The 11 manifold has characteristic polynomial `E³ + aE² + bE + c` with
//! `a = Δ − Ω₁²/4Δ`, `b = −(3Ω₁² + Ω₂²)/4`, `c = Ω₁⁴/8Δ`. Its trigonometric
//! roots are labeled so that `E₀` is the branch that vanishes with the drive.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{h01_matrix, h11_matrix, GateParams};
use crate::linalg::{eigh, ComplexMatrix, StateVector};

/// How far outside `[−1, 1]` an arccos argument may stray before it counts as
/// a genuine branch failure rather than rounding.
const ARCCOS_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigentriple {
    pub e0: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub omega_tilde: f64,
    pub zeta: f64,
    /// Mixing angle between |11⟩ and the excited pair.
    pub theta: f64,
    /// Mixing angle between |A⟩ and |B⟩.
    pub phi: f64,
}

impl Eigentriple {
    /// `|E₀⟩` in the basis `{|11⟩, |A⟩, |B⟩}`, built from the mixing angles.
    /// With `Θ` taken from its arctan expression, the excited components
    /// carry the signs below; the opposite signs do not give an eigenvector.
    pub fn e0_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct, -sp * st, cp * st]
    }

    pub fn roots(&self) -> [f64; 3] {
        [self.e0, self.e_plus, self.e_minus]
    }
}

pub fn cubic_coefficients(omega1: f64, omega2: f64, delta: f64) -> Result<(f64, f64, f64)> {
    if delta == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let o1sq = omega1 * omega1;
    let a = delta - o1sq / (4.0 * delta);
    let b = -(3.0 * o1sq + omega2 * omega2) / 4.0;
    let c = o1sq * o1sq / (8.0 * delta);
    Ok((a, b, c))
}

fn polish(e: f64, (a, b, c): (f64, f64, f64)) -> f64 {
    let mut e = e;
    for _ in 0..3 {
        let p = ((e + a) * e + b) * e + c;
        let dp = (3.0 * e + 2.0 * a) * e + b;
        if dp == 0.0 || !dp.is_finite() {
            break;
        }
        let step = p / dp;
        e -= step;
        if step.abs() <= 1e-15 * e.abs().max(1.0) {
            break;
        }
    }
    e
}

/// `(E₀, E₊, E₋, Ω̃, ζ)` for positive Δ.
fn trig_roots(omega1: f64, omega2: f64, delta: f64) -> Result<(f64, f64, f64, f64, f64)> {
    let o1sq = omega1 * omega1;
    let o2sq = omega2 * omega2;
    let d2 = delta * delta;
    let omega_tilde =
        0.5 * (7.0 * o1sq + 3.0 * o2sq + 4.0 * d2 + o1sq * o1sq / (4.0 * d2)).sqrt();
    let numerator = 64.0 * d2 * d2 * d2 - o1sq * o1sq * o1sq
        + 24.0 * d2 * d2 * (7.0 * o1sq + 3.0 * o2sq)
        + 6.0 * d2 * (11.0 * o1sq * o1sq - 3.0 * o2sq * o1sq);
    let argument = -numerator / (64.0 * d2 * delta * omega_tilde.powi(3));
    if !argument.is_finite() || argument.abs() > 1.0 + ARCCOS_SLACK {
        return Err(Error::BranchFailure { argument });
    }
    let zeta = 2.0 * PI - argument.clamp(-1.0, 1.0).acos();
    let base = -delta / 2.0 + o1sq / (8.0 * delta);
    let root = |angle: f64| (2.0 / 3.0) * (base + omega_tilde * angle.cos());
    Ok((
        root(zeta / 3.0),
        root((2.0 * PI - zeta) / 3.0),
        root((2.0 * PI + zeta) / 3.0),
        omega_tilde,
        zeta,
    ))
}

/// Roots of the 11-manifold cubic and the mixing angles of `|E₀⟩`.
///
/// For negative Δ the spectrum is the mirror image of the positive-Δ one, so
/// `E₀ → −E₀` and `E± → −E∓`; `Ω̃` and `ζ` are reported for `|Δ|`.
pub fn analytic_roots(omega1: f64, omega2: f64, delta: f64) -> Result<Eigentriple> {
    let coefficients = cubic_coefficients(omega1, omega2, delta)?;
    let (mut e0, mut ep, mut em, omega_tilde, zeta) =
        trig_roots(omega1, omega2, delta.abs())?;
    if delta < 0.0 {
        (e0, ep, em) = (-e0, -em, -ep);
    }
    ep = polish(ep, coefficients);
    em = polish(em, coefficients);
    // Vieta: E₀E₊E₋ = −c. Exact zero at zero drive, and no cancellation near it.
    let product = ep * em;
    e0 = if product != 0.0 {
        -coefficients.2 / product
    } else {
        polish(e0, coefficients)
    };
    e0 = polish(e0, coefficients);

    let s = omega1 * omega1 / (4.0 * delta);
    let theta = (omega1 * ((e0 - s).powi(2) + omega2 * omega2 / 4.0).sqrt()
        / (SQRT_2 * ((e0 + delta) * (e0 - s) - omega2 * omega2 / 4.0)))
        .atan();
    let phi = (-(2.0 * e0 - omega1 * omega1 / (2.0 * delta)) / omega2).atan();
    Ok(Eigentriple {
        e0,
        e_plus: ep,
        e_minus: em,
        omega_tilde,
        zeta,
        theta,
        phi,
    })
}

/// `E₀` along the pulse.
pub fn e0_at(params: &GateParams, t: f64) -> Result<f64> {
    let omega1 = params.pulse.evaluate(t)?;
    Ok(analytic_roots(omega1, params.omega2, params.delta)?.e0)
}

/// Null vector `cos ϑ|01⟩ − sin ϑ|0r⟩` of the 01 manifold, `ϑ = arctan(Ω₁/Ω₂)`.
pub fn dark_state_01(omega1: f64, omega2: f64) -> [f64; 3] {
    let vartheta = (omega1 / omega2).atan();
    [vartheta.cos(), 0.0, -vartheta.sin()]
}

const MIN_GAP: f64 = 1e-9;

/// `|⟨m|ṅ⟩/(E_n − E_m)|` using `⟨m|ṅ⟩ = ⟨m|Ḣ|n⟩/(E_n − E_m)`.
fn coupling_ratio(h_dot: &ComplexMatrix, m: &StateVector, n: &StateVector, gap: f64) -> Result<f64> {
    if gap.abs() < MIN_GAP {
        return Err(Error::DegenerateGap { gap });
    }
    let element = m.inner(&h_dot.apply(n));
    Ok(element.norm() / (gap * gap))
}

/// Adiabaticity of the 01 manifold: the larger of `|⟨φ|Ė±⟩/(E± − 0)|` over the
/// two bright states, with `|φ⟩` the dark state.
pub fn adiabaticity_01(params: &GateParams, t: f64) -> Result<f64> {
    let omega1 = params.pulse.evaluate(t)?;
    let omega1_dot = params.pulse.derivative(t)?;
    let h = h01_matrix(omega1, params.omega2, params.delta);
    // ∂h/∂Ω₁ times Ω̇₁
    let h_dot = h01_matrix(omega1_dot, 0.0, 0.0);
    let decomposition = eigh(&h)?;
    let dark = dark_state_01(omega1, params.omega2);
    let dark = StateVector::new(dark.iter().map(|&x| x.into()).collect());
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        let v = decomposition.vector(k);
        if dark.inner(&v).norm() > 0.5 {
            continue;
        }
        worst = worst.max(coupling_ratio(&h_dot, &dark, &v, decomposition.values[k])?);
    }
    Ok(worst)
}

/// Adiabaticity of the 11 manifold against `E₊` and `E₋`.
pub fn adiabaticity_11(params: &GateParams, t: f64) -> Result<(f64, f64)> {
    let omega1 = params.pulse.evaluate(t)?;
    let omega1_dot = params.pulse.derivative(t)?;
    let roots = analytic_roots(omega1, params.omega2, params.delta)?;
    let h = h11_matrix(omega1, params.omega2, params.delta);
    let mut h_dot = ComplexMatrix::zeros(3);
    h_dot[(0, 1)] = (SQRT_2 * 0.5 * omega1_dot).into();
    h_dot[(1, 0)] = h_dot[(0, 1)];
    h_dot[(2, 2)] = (omega1 * omega1_dot / (2.0 * params.delta)).into();

    let e0 = StateVector::new(roots.e0_vector().iter().map(|&x| x.into()).collect());
    let decomposition = eigh(&h)?;
    let nearest = |target: f64| {
        (0..3)
            .min_by(|&i, &j| {
                (decomposition.values[i] - target)
                    .abs()
                    .total_cmp(&(decomposition.values[j] - target).abs())
            })
            .unwrap()
    };
    let plus = decomposition.vector(nearest(roots.e_plus));
    let minus = decomposition.vector(nearest(roots.e_minus));
    Ok((
        coupling_ratio(&h_dot, &e0, &plus, roots.e_plus - roots.e0)?,
        coupling_ratio(&h_dot, &e0, &minus, roots.e_minus - roots.e0)?,
    ))
}

/// Largest values of both monitors on an evenly spaced grid of `samples`
/// interior points.
pub fn adiabaticity_maxima(params: &GateParams, samples: usize) -> Result<(f64, f64)> {
    let duration = params.gate_time();
    let mut max01: f64 = 0.0;
    let mut max11: f64 = 0.0;
    for k in 0..=samples {
        let t = duration * k as f64 / samples as f64;
        max01 = max01.max(adiabaticity_01(params, t)?);
        let (p, m) = adiabaticity_11(params, t)?;
        max11 = max11.max(p.max(m));
    }
    Ok((max01, max11))
}
