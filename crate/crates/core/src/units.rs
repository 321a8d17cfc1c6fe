//! Unit conventions.
//!
//! Time is measured in microseconds and every frequency is an angular
//! frequency in rad/μs. Laboratory values quoted as "X MHz" mean X·2π rad/μs;
//! the helpers here are the only place that factor is applied.

use std::f64::consts::PI;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Bohr magneton over Planck's constant, MHz/G.
pub const BOHR_MAGNETON_MHZ_PER_GAUSS: f64 = 1.399_624_49;

/// `2π·f` for a frequency given in MHz.
#[inline]
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f
}

/// `2π·f` for a frequency given in kHz.
#[inline]
pub fn khz(f: f64) -> f64 {
    2.0 * PI * f * 1e-3
}

/// `2π·f` for a frequency given in GHz.
#[inline]
pub fn ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e3
}

/// Converts an angular frequency in rad/μs back to MHz.
#[inline]
pub fn to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Parses a frequency such as `"160MHz"`, `"500 kHz"`, `"2GHz"`, `"10Hz"` or
/// `"6.28rad/us"` into rad/μs. A bare number is taken to be in MHz.
pub fn parse_frequency(text: &str) -> Option<f64> {
    let s = text.trim();
    let split = s
        .find(|c: char| c.is_ascii_alphabetic() || c == '/')
        .unwrap_or(s.len());
    let (number, unit) = s.split_at(split);
    let value: f64 = number.trim().parse().ok()?;
    let omega = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "mhz" => mhz(value),
        "khz" => khz(value),
        "ghz" => ghz(value),
        "hz" => mhz(value * 1e-6),
        "rad/us" | "rad/μs" => value,
        _ => return None,
    };
    Some(omega)
}

/// Parses an angle written as `"pi"`, `"0.5pi"`, `"-pi/4"`, `"3pi/4"` or a
/// plain number of radians.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s = text.trim().to_ascii_lowercase().replace(' ', "");
    if let Some(pos) = s.find("pi") {
        let (coef, rest) = s.split_at(pos);
        let rest = &rest[2..];
        let coef = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().ok()?,
        };
        let divisor = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')?.parse::<f64>().ok()?
        };
        Some(coef * PI / divisor)
    } else {
        s.parse().ok()
    }
}

/// Parses a temperature such as `"5.2uK"`, `"50 μK"` or `"1mK"` into μK.
pub fn parse_temperature(text: &str) -> Option<f64> {
    let s = text.trim();
    let split = s
        .find(|c: char| c.is_alphabetic())
        .unwrap_or(s.len());
    let (number, unit) = s.split_at(split);
    let value: f64 = number.trim().parse().ok()?;
    match unit.trim() {
        "" | "uK" | "μK" | "µK" => Some(value),
        "mK" => Some(value * 1e3),
        "nK" => Some(value * 1e-3),
        "K" => Some(value * 1e6),
        _ => None,
    }
}
