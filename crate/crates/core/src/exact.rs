//! Exact values of stabilizer amplitudes, overlaps and expectations.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

/// Either zero or `e^{iπ k/4} · 2^{−m/2}` with `k ∈ 0..8`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExactAmplitude {
    Zero,
    Value { eighths: u8, half_powers: u32 },
}

impl ExactAmplitude {
    pub const ONE: ExactAmplitude = ExactAmplitude::Value {
        eighths: 0,
        half_powers: 0,
    };

    pub fn new(eighths: i64, half_powers: u32) -> Self {
        ExactAmplitude::Value {
            eighths: eighths.rem_euclid(8) as u8,
            half_powers,
        }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        Self::new(2 * k, 0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactAmplitude::Zero)
    }

    pub fn conj(self) -> Self {
        match self {
            ExactAmplitude::Zero => ExactAmplitude::Zero,
            ExactAmplitude::Value { eighths, half_powers } => Self::new(-(eighths as i64), half_powers),
        }
    }

    /// Multiplies by `e^{iπ k/4}`.
    pub fn rotate(self, k: i64) -> Self {
        match self {
            ExactAmplitude::Zero => ExactAmplitude::Zero,
            ExactAmplitude::Value { eighths, half_powers } => Self::new(eighths as i64 + k, half_powers),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            ExactAmplitude::Zero => Complex64::new(0.0, 0.0),
            ExactAmplitude::Value { eighths, half_powers } => {
                let r = 2f64.powf(-(half_powers as f64) / 2.0);
                // exact axes avoid sin/cos rounding on the eight roots
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let unit = match eighths {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(s, s),
                    2 => Complex64::new(0.0, 1.0),
                    3 => Complex64::new(-s, s),
                    4 => Complex64::new(-1.0, 0.0),
                    5 => Complex64::new(-s, -s),
                    6 => Complex64::new(0.0, -1.0),
                    _ => Complex64::new(s, -s),
                };
                unit * r
            }
        }
    }
}

impl Mul for ExactAmplitude {
    type Output = ExactAmplitude;

    fn mul(self, rhs: ExactAmplitude) -> ExactAmplitude {
        match (self, rhs) {
            (
                ExactAmplitude::Value { eighths: a, half_powers: m },
                ExactAmplitude::Value { eighths: b, half_powers: k },
            ) => ExactAmplitude::new(a as i64 + b as i64, m + k),
            _ => ExactAmplitude::Zero,
        }
    }
}

impl fmt::Display for ExactAmplitude {
    /// `0`, or `2^{-m/2} * e^{i*k*pi/4}` with unit factors omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExactAmplitude::Zero => f.write_str("0"),
            ExactAmplitude::Value { eighths, half_powers } => {
                let mag = if half_powers == 0 {
                    None
                } else {
                    Some(format!("2^{{-{half_powers}/2}}"))
                };
                let phase = if eighths == 0 {
                    None
                } else {
                    Some(format!("e^{{i*{eighths}*pi/4}}"))
                };
                match (mag, phase) {
                    (None, None) => f.write_str("1"),
                    (Some(m), None) => f.write_str(&m),
                    (None, Some(p)) => f.write_str(&p),
                    (Some(m), Some(p)) => write!(f, "{m} * {p}"),
                }
            }
        }
    }
}

/// Formats `re+imi` with 12 significant digits per component.
pub fn format_complex(z: Complex64) -> String {
    let re = format_sig(z.re);
    let im = format_sig(z.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

fn format_sig(v: f64) -> String {
    if v.abs() < 1e-15 {
        return "0".to_string();
    }
    let digits = 12i32;
    let mag = v.abs().log10().floor() as i32;
    let prec = (digits - 1 - mag).max(0) as usize;
    let mut s = format!("{v:.prec$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}
