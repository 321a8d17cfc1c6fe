//! Lower-leg Rabi envelopes Ω₁(t).
//!
//! Every shape lives on `[0, duration]`. Amplitudes are in rad/μs and widths in
//! μs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed past either end of the domain before `evaluate` complains.
/// Fixed-step integrators land on `n·dt`, which can overshoot by rounding.
const DOMAIN_SLACK: f64 = 1e-9;

/// Offset of the corrected Gaussian that zeroes it at the window edges.
pub fn default_correction_offset() -> f64 {
    (-4.0f64).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum PulseEnvelope {
    /// `Ω₀·exp(−(t−2T)²/T²)` on `[0, 4T]`.
    Gaussian { omega0: f64, width: f64 },
    /// Gaussian shifted down by `offset` and renormalized to peak `Ω₀`.
    CorrectedGaussian {
        omega0: f64,
        width: f64,
        #[serde(default = "default_correction_offset")]
        offset: f64,
    },
    /// Piecewise-constant samples of `base` taken at the left edge of each step.
    Staircase {
        base: Box<PulseEnvelope>,
        step: f64,
        count: usize,
    },
    /// `Ω₀·exp(−(t−2T₁)⁴/T₁⁴)` on `[0, 4T₁]`.
    SuperGaussian { omega0: f64, width: f64 },
    /// `Ω₀·exp(−(t−T₂)⁶/(2σ)⁶)·cos(π/2·(1+e^{−4(t−T₂)/σ})⁻¹)` on `[0, 1.4T₂]`.
    SigmoidCosine { omega0: f64, width: f64, sigma: f64 },
    Constant { omega: f64, duration: f64 },
}

impl PulseEnvelope {
    pub fn gaussian(omega0: f64, width: f64) -> Self {
        Self::Gaussian { omega0, width }
    }

    pub fn corrected_gaussian(omega0: f64, width: f64) -> Self {
        Self::CorrectedGaussian {
            omega0,
            width,
            offset: default_correction_offset(),
        }
    }

    pub fn staircase(base: PulseEnvelope, step: f64, count: usize) -> Self {
        Self::Staircase {
            base: Box::new(base),
            step,
            count,
        }
    }

    pub fn super_gaussian(omega0: f64, width: f64) -> Self {
        Self::SuperGaussian { omega0, width }
    }

    /// Sigmoid-windowed cosine with `σ = 0.3·T₂`.
    pub fn sigmoid_cosine(omega0: f64, width: f64) -> Self {
        Self::SigmoidCosine {
            omega0,
            width,
            sigma: 0.3 * width,
        }
    }

    pub fn constant(omega: f64, duration: f64) -> Self {
        Self::Constant { omega, duration }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        match self {
            Self::Gaussian { omega0, width } | Self::SuperGaussian { omega0, width } => {
                if !(*omega0 >= 0.0) {
                    return bad("pulse amplitude must be nonnegative");
                }
                if !(*width > 0.0) {
                    return bad("pulse width must be positive");
                }
            }
            Self::CorrectedGaussian {
                omega0,
                width,
                offset,
            } => {
                if !(*omega0 >= 0.0) || !(*width > 0.0) {
                    return bad("pulse amplitude must be nonnegative and width positive");
                }
                if !(0.0..1.0).contains(offset) {
                    return bad("correction offset must lie in [0, 1)");
                }
            }
            Self::SigmoidCosine {
                omega0,
                width,
                sigma,
            } => {
                if !(*omega0 >= 0.0) || !(*width > 0.0) || !(*sigma > 0.0) {
                    return bad("sigmoid-cosine needs Ω₀ ≥ 0, T₂ > 0, σ > 0");
                }
            }
            Self::Staircase { base, step, count } => {
                base.validate()?;
                if *count == 0 || !(*step > 0.0) {
                    return bad("staircase needs a positive step and at least one step");
                }
            }
            Self::Constant { omega, duration } => {
                if !omega.is_finite() || !(*duration > 0.0) {
                    return bad("constant pulse needs a finite amplitude and positive duration");
                }
            }
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        match self {
            Self::Gaussian { width, .. }
            | Self::CorrectedGaussian { width, .. }
            | Self::SuperGaussian { width, .. } => 4.0 * width,
            Self::SigmoidCosine { width, .. } => 1.4 * width,
            Self::Staircase { step, count, .. } => step * *count as f64,
            Self::Constant { duration, .. } => *duration,
        }
    }

    /// Peak amplitude parameter of the shape.
    pub fn peak(&self) -> f64 {
        match self {
            Self::Gaussian { omega0, .. }
            | Self::CorrectedGaussian { omega0, .. }
            | Self::SuperGaussian { omega0, .. }
            | Self::SigmoidCosine { omega0, .. } => *omega0,
            Self::Staircase { base, .. } => base.peak(),
            Self::Constant { omega, .. } => *omega,
        }
    }

    /// Width parameter (T, T₁ or T₂); the duration for constant pulses.
    pub fn width(&self) -> f64 {
        match self {
            Self::Gaussian { width, .. }
            | Self::CorrectedGaussian { width, .. }
            | Self::SuperGaussian { width, .. }
            | Self::SigmoidCosine { width, .. } => *width,
            Self::Staircase { base, .. } => base.width(),
            Self::Constant { duration, .. } => *duration,
        }
    }

    /// Same shape with a new width. A staircase rescales its step so the step
    /// count and relative sampling points stay put.
    pub fn with_width(&self, new_width: f64) -> Self {
        match self {
            Self::Gaussian { omega0, .. } => Self::gaussian(*omega0, new_width),
            Self::CorrectedGaussian { omega0, offset, .. } => Self::CorrectedGaussian {
                omega0: *omega0,
                width: new_width,
                offset: *offset,
            },
            Self::SuperGaussian { omega0, .. } => Self::super_gaussian(*omega0, new_width),
            Self::SigmoidCosine {
                omega0,
                width,
                sigma,
            } => Self::SigmoidCosine {
                omega0: *omega0,
                width: new_width,
                sigma: sigma * new_width / width,
            },
            Self::Staircase { base, step, count } => {
                let ratio = new_width / base.width();
                Self::Staircase {
                    base: Box::new(base.with_width(new_width)),
                    step: step * ratio,
                    count: *count,
                }
            }
            Self::Constant { omega, .. } => Self::constant(*omega, new_width),
        }
    }

    /// Same shape with a new peak amplitude.
    pub fn with_peak(&self, new_peak: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Gaussian { omega0, .. }
            | Self::CorrectedGaussian { omega0, .. }
            | Self::SuperGaussian { omega0, .. }
            | Self::SigmoidCosine { omega0, .. } => *omega0 = new_peak,
            Self::Staircase { base, .. } => **base = base.with_peak(new_peak),
            Self::Constant { omega, .. } => *omega = new_peak,
        }
        out
    }

    fn check_domain(&self, t: f64) -> Result<f64> {
        let duration = self.duration();
        if !(t >= -DOMAIN_SLACK && t <= duration + DOMAIN_SLACK) {
            return Err(Error::OutOfDomain { t, duration });
        }
        Ok(t.clamp(0.0, duration))
    }

    /// Ω₁(t).
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let t = self.check_domain(t)?;
        Ok(self.value_unchecked(t))
    }

    /// dΩ₁/dt. A staircase reports the derivative of its base shape.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let t = self.check_domain(t)?;
        Ok(self.derivative_unchecked(t))
    }

    pub(crate) fn value_unchecked(&self, t: f64) -> f64 {
        match *self {
            Self::Gaussian { omega0, width } => {
                let u = (t - 2.0 * width) / width;
                omega0 * (-u * u).exp()
            }
            Self::CorrectedGaussian {
                omega0,
                width,
                offset,
            } => {
                let u = (t - 2.0 * width) / width;
                omega0 * ((-u * u).exp() - offset) / (1.0 - offset)
            }
            Self::SuperGaussian { omega0, width } => {
                let u = (t - 2.0 * width) / width;
                omega0 * (-u.powi(4)).exp()
            }
            Self::SigmoidCosine {
                omega0,
                width,
                sigma,
            } => {
                let s = t - width;
                let envelope = (-(s / (2.0 * sigma)).powi(6)).exp();
                let sigmoid = 1.0 / (1.0 + (-4.0 * s / sigma).exp());
                omega0 * envelope * (0.5 * PI * sigmoid).cos()
            }
            Self::Staircase {
                ref base,
                step,
                count,
            } => {
                let index = ((t / step).floor() as usize).min(count - 1);
                let sample = (index as f64 * step).min(base.duration());
                base.value_unchecked(sample)
            }
            Self::Constant { omega, .. } => omega,
        }
    }

    pub(crate) fn derivative_unchecked(&self, t: f64) -> f64 {
        match *self {
            Self::Gaussian { width, .. } => {
                let u = (t - 2.0 * width) / width;
                self.value_unchecked(t) * (-2.0 * u / width)
            }
            Self::CorrectedGaussian {
                omega0,
                width,
                offset,
            } => {
                let u = (t - 2.0 * width) / width;
                omega0 * (-u * u).exp() * (-2.0 * u / width) / (1.0 - offset)
            }
            Self::SuperGaussian { width, .. } => {
                let u = (t - 2.0 * width) / width;
                self.value_unchecked(t) * (-4.0 * u.powi(3) / width)
            }
            Self::SigmoidCosine {
                omega0,
                width,
                sigma,
            } => {
                let s = t - width;
                let envelope = (-(s / (2.0 * sigma)).powi(6)).exp();
                let d_envelope = envelope * (-6.0 * s.powi(5) / (2.0 * sigma).powi(6));
                let e = (-4.0 * s / sigma).exp();
                let sigmoid = 1.0 / (1.0 + e);
                let d_sigmoid = sigmoid * sigmoid * e * 4.0 / sigma;
                let angle = 0.5 * PI * sigmoid;
                omega0 * (d_envelope * angle.cos() - envelope * angle.sin() * 0.5 * PI * d_sigmoid)
            }
            Self::Staircase { ref base, .. } => {
                base.derivative_unchecked(t.min(base.duration()))
            }
            Self::Constant { .. } => 0.0,
        }
    }
}
