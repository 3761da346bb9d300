//! Physical quantities attached to a pole `w = 2πik`: momentum, complex energy `E = k²`,
//! decay rate `Γ = -2 Im E`, the leading-order rate formula, and the Winter-model Gamow
//! wavefunction (pointwise, with the conventional `√(2/π)` prefactor).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{ensure_finite, ComplexValue, I};
use crate::error::{ResonanceError, Result};
use crate::expansion::Branch;
use crate::models::ModelSpec;
use crate::oracle::ExactPole;

/// `k = w / (2πi)`, written out so that `w = 2πin` maps to exactly `k = n`.
pub fn momentum_from_w(w: ComplexValue) -> ComplexValue {
    Complex64::new(w.im / TAU, -w.re / TAU)
}

pub fn energy_from_momentum(k: ComplexValue) -> ComplexValue {
    k * k
}

/// `Γ = -2 Im E`, so that `|e^{-iEt}|² = e^{-Γt}`.
pub fn decay_rate(energy: ComplexValue) -> f64 {
    -2.0 * energy.im
}

fn require_real(z: ComplexValue, what: &str) -> Result<f64> {
    if z.im != 0.0 || !z.re.is_finite() {
        return Err(ResonanceError::Domain(format!("{what} must be a finite real coupling, got {z}")));
    }
    Ok(z.re)
}

/// Leading-order Winter decay rate `Γ_n = (n/π) ln[1 + (2πzn)²]` for real `z` and `n ≥ 1`.
pub fn gamma_leading(n: i64, z: ComplexValue) -> Result<f64> {
    if n < 1 {
        return Err(ResonanceError::Domain(format!("the leading rate needs n >= 1, got {n}")));
    }
    let z = require_real(z, "z")?;
    let x = TAU * z * n as f64;
    Ok(n as f64 / PI * (x * x).ln_1p())
}

/// Leading-order double-barrier rate: the sum of the two single-barrier rates.
pub fn gamma_leading_double(n: i64, z0: ComplexValue, z_plus: ComplexValue) -> Result<f64> {
    Ok(gamma_leading(n, z0)? + gamma_leading(n, z_plus)?)
}

/// Outside amplitude `a = πzk / (2πizk + 1)` of the Winter wavefunction.
pub fn outside_amplitude(k: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let den = TAU * I * z * k + 1.0;
    if den == Complex64::new(0.0, 0.0) {
        return Err(ResonanceError::Singularity("outside amplitude has a pole at 2πizk = -1".into()));
    }
    ensure_finite(PI * z * k / den, "outside amplitude")
}

/// One resolved pole. `k`, `energy` and `gamma` always derive from `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceRecord {
    pub model: String,
    pub n: i64,
    pub branch: Branch,
    pub order: usize,
    pub w: ComplexValue,
    pub k: ComplexValue,
    pub energy: ComplexValue,
    pub gamma: f64,
    /// `|f(w_exact)|` when an exact pole is attached, `|f(w)|` otherwise.
    pub residual: f64,
    pub w_exact: Option<ComplexValue>,
    pub rel_error: Option<f64>,
}

impl ResonanceRecord {
    pub fn from_pole(model: &ModelSpec, n: i64, branch: Branch, order: usize, w: ComplexValue) -> Self {
        let k = momentum_from_w(w);
        let energy = energy_from_momentum(k);
        Self {
            model: model.name().to_string(),
            n,
            branch,
            order,
            w,
            k,
            energy,
            gamma: decay_rate(energy),
            residual: model.residual(w).norm(),
            w_exact: None,
            rel_error: None,
        }
    }

    /// Expansion pole as `w`, with the Newton root attached as `w_exact`.
    pub fn from_exact(model: &ModelSpec, pole: &ExactPole) -> Self {
        let mut record = Self::from_pole(model, pole.n, pole.branch, pole.seed.order, pole.seed.w_approx);
        record.w_exact = Some(pole.root.w);
        record.residual = pole.root.residual_norm;
        record.rel_error = Some(pole.relative_error());
        record
    }

    /// Record whose `w` is the exact Newton root, for evaluating exact observables.
    pub fn exact_only(model: &ModelSpec, pole: &ExactPole) -> Self {
        let mut record = Self::from_pole(model, pole.n, pole.branch, pole.seed.order, pole.root.w);
        record.residual = pole.root.residual_norm;
        record
    }

    /// Resonances decay: `Γ ≥ 0` for physical couplings and `n ≥ 1`.
    pub fn is_decaying(&self) -> bool {
        self.gamma >= 0.0
    }
}

/// Winter-model Gamow wavefunction
/// `ψ(x, t) = √(2/π) e^{-iEt} · { sin(kx), 0 ≤ x ≤ π ; a e^{ikx}, x > π }`.
pub fn winter_wavefunction(x: f64, t: f64, record: &ResonanceRecord, z: ComplexValue) -> Result<ComplexValue> {
    if !x.is_finite() || x < 0.0 {
        return Err(ResonanceError::Domain(format!("wavefunction needs finite x >= 0, got {x}")));
    }
    if !t.is_finite() {
        return Err(ResonanceError::Domain(format!("time must be finite, got {t}")));
    }
    let k = record.k;
    let prefactor = (2.0 / PI).sqrt() * (-I * record.energy * t).exp();
    let spatial = if x <= PI {
        (k * x).sin()
    } else {
        outside_amplitude(k, z)? * (I * k * x).exp()
    };
    ensure_finite(prefactor * spatial, "wavefunction")
}

/// Flat row with the fixed output column names; shared by the CSV and JSON writers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub model: String,
    pub n: i64,
    pub branch: String,
    #[serde(rename = "K")]
    pub order: usize,
    pub re_w: f64,
    pub im_w: f64,
    pub re_k: f64,
    pub im_k: f64,
    #[serde(rename = "re_E")]
    pub re_energy: f64,
    #[serde(rename = "im_E")]
    pub im_energy: f64,
    pub gamma: f64,
    pub residual: f64,
    pub re_w_exact: Option<f64>,
    pub im_w_exact: Option<f64>,
    pub rel_error: Option<f64>,
}

impl From<&ResonanceRecord> for RecordRow {
    fn from(r: &ResonanceRecord) -> Self {
        Self {
            model: r.model.clone(),
            n: r.n,
            branch: r.branch.to_string(),
            order: r.order,
            re_w: r.w.re,
            im_w: r.w.im,
            re_k: r.k.re,
            im_k: r.k.im,
            re_energy: r.energy.re,
            im_energy: r.energy.im,
            gamma: r.gamma,
            residual: r.residual,
            re_w_exact: r.w_exact.map(|w| w.re),
            im_w_exact: r.w_exact.map(|w| w.im),
            rel_error: r.rel_error,
        }
    }
}
