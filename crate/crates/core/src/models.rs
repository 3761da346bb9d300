//! The three δ-barrier models and their pole equations, written as residuals in
//! `w = 2πik`. Every residual is entire in `w` and vanishes exactly at a pole.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::complex::{is_finite, ComplexValue};
use crate::error::{ResonanceError, Result};

/// Barrier model with its couplings. Couplings are complex-capable; the physical case is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    /// Half-line with a hard wall at 0 and a single barrier at π.
    Winter { z: ComplexValue },
    /// Barriers at 0 and π on the full line.
    DoubleDelta { z0: ComplexValue, z_plus: ComplexValue },
    /// Barriers at -π, 0 and π on the full line.
    TripleDelta {
        z_minus: ComplexValue,
        z0: ComplexValue,
        z_plus: ComplexValue,
    },
}

/// Coefficients of the triple-barrier pole equation `a e^{2w} - b e^w + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleCoefficients {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
}

impl ModelSpec {
    pub fn winter(z: f64) -> Self {
        ModelSpec::Winter { z: Complex64::new(z, 0.0) }
    }

    pub fn double_delta(z0: f64, z_plus: f64) -> Self {
        ModelSpec::DoubleDelta {
            z0: Complex64::new(z0, 0.0),
            z_plus: Complex64::new(z_plus, 0.0),
        }
    }

    pub fn triple_delta(z_minus: f64, z0: f64, z_plus: f64) -> Self {
        ModelSpec::TripleDelta {
            z_minus: Complex64::new(z_minus, 0.0),
            z0: Complex64::new(z0, 0.0),
            z_plus: Complex64::new(z_plus, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Winter { .. } => "winter",
            ModelSpec::DoubleDelta { .. } => "double",
            ModelSpec::TripleDelta { .. } => "triple",
        }
    }

    pub fn couplings(&self) -> Vec<ComplexValue> {
        match *self {
            ModelSpec::Winter { z } => vec![z],
            ModelSpec::DoubleDelta { z0, z_plus } => vec![z0, z_plus],
            ModelSpec::TripleDelta { z_minus, z0, z_plus } => vec![z_minus, z0, z_plus],
        }
    }

    /// True when every coupling has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.couplings().iter().all(|z| z.im == 0.0)
    }

    pub fn is_free(&self) -> bool {
        self.couplings().iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Rejects non-finite couplings and returns advisory warnings for `|z| ≥ 1`, where the
    /// weak-coupling picture behind the expansion no longer applies.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        for z in self.couplings() {
            if !is_finite(z) {
                return Err(ResonanceError::Domain(format!("coupling {z} is not finite")));
            }
            if z.norm() >= 1.0 {
                warnings.push(format!(
                    "coupling {z} of the {} model has |z| >= 1; expansion accuracy is not expected",
                    self.name()
                ));
            }
        }
        Ok(warnings)
    }

    pub fn residual(&self, w: ComplexValue) -> ComplexValue {
        match *self {
            ModelSpec::Winter { z } => winter_residual(w, z),
            ModelSpec::DoubleDelta { z0, z_plus } => double_residual(w, z0, z_plus),
            ModelSpec::TripleDelta { z_minus, z0, z_plus } => triple_residual(w, z_minus, z0, z_plus),
        }
    }

    /// `d residual / dw` in closed form.
    pub fn residual_derivative(&self, w: ComplexValue) -> ComplexValue {
        match *self {
            // d/dw [e^w - z w - 1]
            ModelSpec::Winter { z } => w.exp() - z,
            // d/dw [e^w - (1 + z0 w)(1 + z+ w)]
            ModelSpec::DoubleDelta { z0, z_plus } => {
                w.exp() - z0 * (1.0 + z_plus * w) - z_plus * (1.0 + z0 * w)
            }
            // d/dw [a e^{2w} - b e^w + c] = (a' + 2a) e^{2w} - (b' + b) e^w + c',
            // with a' = -z0, b' = z- + z+, c' = s1 + 2 s2 w + 3 s3 w^2.
            ModelSpec::TripleDelta { z_minus, z0, z_plus } => {
                let TripleCoefficients { a, b, .. } = triple_coefficients(w, z_minus, z0, z_plus);
                let (s1, s2, s3) = symmetric_sums(z_minus, z0, z_plus);
                let da = -z0;
                let db = z_minus + z_plus;
                let dc = s1 + w * (2.0 * s2 + 3.0 * s3 * w);
                let ew = w.exp();
                (da + 2.0 * a) * ew * ew - (db + b) * ew + dc
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Winter { z } => write!(f, "winter(z={z})"),
            ModelSpec::DoubleDelta { z0, z_plus } => write!(f, "double(z0={z0}, z+={z_plus})"),
            ModelSpec::TripleDelta { z_minus, z0, z_plus } => {
                write!(f, "triple(z-={z_minus}, z0={z0}, z+={z_plus})")
            }
        }
    }
}

/// `2πi n`, the free pole location of level `n`.
pub fn free_pole(n: i64) -> ComplexValue {
    Complex64::new(0.0, TAU * n as f64)
}

/// Effective coupling `ζ = 2πi n z` of the n-th resonance.
pub fn effective_coupling(n: i64, z: ComplexValue) -> Result<ComplexValue> {
    if n == 0 {
        return Err(ResonanceError::Domain("excitation number n must be nonzero".into()));
    }
    Ok(free_pole(n) * z)
}

pub fn winter_residual(w: ComplexValue, z: ComplexValue) -> ComplexValue {
    w.exp() - z * w - 1.0
}

pub fn double_residual(w: ComplexValue, z0: ComplexValue, z_plus: ComplexValue) -> ComplexValue {
    w.exp() - (1.0 + z0 * w) * (1.0 + z_plus * w)
}

fn symmetric_sums(
    z_minus: ComplexValue,
    z0: ComplexValue,
    z_plus: ComplexValue,
) -> (ComplexValue, ComplexValue, ComplexValue) {
    (
        z_minus + z0 + z_plus,
        z_minus * z0 + z_minus * z_plus + z0 * z_plus,
        z_minus * z0 * z_plus,
    )
}

pub fn triple_coefficients(
    w: ComplexValue,
    z_minus: ComplexValue,
    z0: ComplexValue,
    z_plus: ComplexValue,
) -> TripleCoefficients {
    let (s1, s2, s3) = symmetric_sums(z_minus, z0, z_plus);
    TripleCoefficients {
        a: 1.0 - z0 * w,
        b: 2.0 + (z_minus + z_plus) * w,
        c: 1.0 + w * (s1 + w * (s2 + w * s3)),
    }
}

pub fn triple_residual(
    w: ComplexValue,
    z_minus: ComplexValue,
    z0: ComplexValue,
    z_plus: ComplexValue,
) -> ComplexValue {
    let TripleCoefficients { a, b, c } = triple_coefficients(w, z_minus, z0, z_plus);
    let ew = w.exp();
    a * ew * ew - b * ew + c
}
