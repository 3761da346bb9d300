//! The 1/n expansion of resonance poles.
//!
//! A pole of level `n` is written `w = 2πin + σ(n, ζ)` with `σ = Σ_k σ_k(ζ) ε^k`,
//! `ε = 1/(2πin)` and `ζ = 2πinz` the effective coupling. Each `σ_k` resums infinitely many
//! orders of the ordinary coupling expansion.
//!
//! Closed forms are provided for the Winter model (`σ_0..σ_2`), the double barrier
//! (`σ_0, σ_1`) and both determinations of the triple barrier (`σ_0^±, σ_1^±`). For the
//! Winter model the fixed-point relation `σ = ln[1 + ζ + εζσ]` is also iterated on truncated
//! series, which yields `σ_k` to any order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::complex::{ensure_finite, principal_log, principal_sqrt, ComplexValue};
use crate::error::{ResonanceError, Result};
use crate::models::{effective_coupling, free_pole, ModelSpec};
use crate::series::TruncatedSeries;

/// Determination of the square root in the triple-barrier formulas, labelled by the sign in
/// front of Δ. Single-valued models use `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Plus,
    Minus,
    None,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::None => "none",
        }
    }

    fn sign(&self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Branch {
    type Err = ResonanceError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            "none" => Ok(Branch::None),
            other => Err(ResonanceError::Config(format!("unknown branch '{other}'"))),
        }
    }
}

/// An approximate pole assembled from the expansion coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    pub n: i64,
    pub branch: Branch,
    pub order: usize,
    /// `σ_0 ..= σ_order` evaluated at the effective coupling(s).
    pub sigmas: Vec<ComplexValue>,
    pub w_approx: ComplexValue,
    /// Highest order the model supports; `None` means unbounded.
    pub available_order: Option<usize>,
}

impl ExpansionResult {
    fn assemble(
        n: i64,
        branch: Branch,
        sigmas: Vec<ComplexValue>,
        available_order: Option<usize>,
    ) -> Result<Self> {
        let order = sigmas.len() - 1;
        let w_approx = ensure_finite(resum(n, &sigmas), "approximate pole")?;
        Ok(Self { n, branch, order, sigmas, w_approx, available_order })
    }

    /// Recomputes `2πin + Σ σ_k / (2πin)^k` from the stored coefficients.
    pub fn resum(&self) -> ComplexValue {
        resum(self.n, &self.sigmas)
    }
}

fn resum(n: i64, sigmas: &[ComplexValue]) -> ComplexValue {
    let free = free_pole(n);
    let eps = free.inv();
    let mut power = Complex64::new(1.0, 0.0);
    let mut w = free;
    for s in sigmas {
        w += s * power;
        power *= eps;
    }
    w
}

fn one_plus(zeta: ComplexValue, what: &str) -> Result<ComplexValue> {
    ensure_finite(zeta, what)?;
    let s = 1.0 + zeta;
    if s == Complex64::new(0.0, 0.0) {
        return Err(ResonanceError::Singularity(format!("{what} = -1")));
    }
    Ok(s)
}

/// `σ_0(ζ) = ln(1 + ζ)`.
pub fn winter_sigma0(zeta: ComplexValue) -> Result<ComplexValue> {
    principal_log(one_plus(zeta, "effective coupling")?)
}

/// `σ_1(ζ) = ζ/(1+ζ) · ln(1+ζ)`.
pub fn winter_sigma1(zeta: ComplexValue) -> Result<ComplexValue> {
    let s = one_plus(zeta, "effective coupling")?;
    Ok(zeta / s * principal_log(s)?)
}

/// `σ_2(ζ) = -½ (ζ/(1+ζ))² · ln(1+ζ) · [ln(1+ζ) - 2]`.
pub fn winter_sigma2(zeta: ComplexValue) -> Result<ComplexValue> {
    let s = one_plus(zeta, "effective coupling")?;
    let l = principal_log(s)?;
    let r = zeta / s;
    Ok(-0.5 * r * r * l * (l - 2.0))
}

/// Solves `σ = ln[1 + ζ + εζσ]` order by order in `ε = 1/(2πin)`.
///
/// Each pass of the fixed-point map fixes one more coefficient, so `order + 1` passes give an
/// exact truncated solution. The coefficients depend on `ζ` alone; `n` only has to be a
/// valid level.
pub fn winter_sigma_series(n: i64, zeta: ComplexValue, order: usize) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(ResonanceError::Domain("excitation number n must be nonzero".into()));
    }
    let base = TruncatedSeries::constant(one_plus(zeta, "effective coupling")?, order);
    let step = |sigma: &TruncatedSeries| -> Result<TruncatedSeries> {
        base.add(&sigma.shift().scale(zeta))?.log()
    };

    let mut sigma = TruncatedSeries::zero(order);
    for _ in 0..=order {
        sigma = step(&sigma)?;
    }
    debug_assert!(
        step(&sigma)?.max_abs_diff(&sigma) <= 1e-12 * (1.0 + sigma.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)),
        "fixed-point residual did not vanish"
    );
    for c in sigma.coeffs() {
        ensure_finite(*c, "expansion coefficient")?;
    }
    Ok(sigma)
}

/// Winter-model pole of level `n` through order `order` in `1/(2πin)`.
///
/// Orders up to 2 use the closed forms; higher orders come from [`winter_sigma_series`].
pub fn winter_pole_approx(n: i64, z: ComplexValue, order: usize) -> Result<ExpansionResult> {
    let zeta = effective_coupling(n, z)?;
    let sigmas = if order <= 2 {
        let all = [winter_sigma0(zeta)?, winter_sigma1(zeta)?, winter_sigma2(zeta)?];
        all[..=order].to_vec()
    } else {
        winter_sigma_series(n, zeta, order)?.into_coeffs()
    };
    ExpansionResult::assemble(n, Branch::None, sigmas, None)
}

/// `σ_0(ζ_0, ζ_+) = ln[(1+ζ_0)(1+ζ_+)]`, one principal log of the product.
pub fn double_sigma0(zeta0: ComplexValue, zeta_plus: ComplexValue) -> Result<ComplexValue> {
    let p = one_plus(zeta0, "effective coupling ζ0")? * one_plus(zeta_plus, "effective coupling ζ+")?;
    principal_log(p)
}

/// `σ_1(ζ_0, ζ_+) = (ζ_0/(1+ζ_0) + ζ_+/(1+ζ_+)) · ln[(1+ζ_0)(1+ζ_+)]`.
pub fn double_sigma1(zeta0: ComplexValue, zeta_plus: ComplexValue) -> Result<ComplexValue> {
    let s0 = one_plus(zeta0, "effective coupling ζ0")?;
    let sp = one_plus(zeta_plus, "effective coupling ζ+")?;
    Ok((zeta0 / s0 + zeta_plus / sp) * principal_log(s0 * sp)?)
}

/// `Δ = [(ζ_+ - ζ_-)² + 4ζ_0²(1+ζ_+)(1+ζ_-)]^{1/2}`, principal root.
pub fn triple_delta_disc(
    zeta_minus: ComplexValue,
    zeta0: ComplexValue,
    zeta_plus: ComplexValue,
) -> ComplexValue {
    let d = zeta_plus - zeta_minus;
    principal_sqrt(d * d + 4.0 * zeta0 * zeta0 * (1.0 + zeta_plus) * (1.0 + zeta_minus))
}

/// Shared `ln[(2 + ζ_+ + ζ_- ± Δ) / (2(1 - ζ_0))]`.
fn triple_log(
    branch: Branch,
    zeta_minus: ComplexValue,
    zeta0: ComplexValue,
    zeta_plus: ComplexValue,
    delta: ComplexValue,
) -> Result<ComplexValue> {
    if branch == Branch::None {
        return Err(ResonanceError::Domain("the triple model needs the plus or minus branch".into()));
    }
    for (zeta, name) in [(zeta_minus, "ζ-"), (zeta0, "ζ0"), (zeta_plus, "ζ+")] {
        ensure_finite(zeta, name)?;
    }
    let den = 2.0 * (1.0 - zeta0);
    if den == Complex64::new(0.0, 0.0) {
        return Err(ResonanceError::Singularity("effective coupling ζ0 = 1".into()));
    }
    let num = 2.0 + zeta_plus + zeta_minus + branch.sign() * delta;
    if num == Complex64::new(0.0, 0.0) {
        return Err(ResonanceError::Singularity(format!(
            "numerator of the {branch} leading coefficient vanishes"
        )));
    }
    principal_log(num / den)
}

/// `σ_0^± = ln[(2 + ζ_+ + ζ_- ± Δ) / (2(1 - ζ_0))]`.
pub fn triple_sigma0(
    branch: Branch,
    zeta_minus: ComplexValue,
    zeta0: ComplexValue,
    zeta_plus: ComplexValue,
) -> Result<ComplexValue> {
    let delta = triple_delta_disc(zeta_minus, zeta0, zeta_plus);
    triple_log(branch, zeta_minus, zeta0, zeta_plus, delta)
}

/// `σ_1^± = (N^± / D^±) · ln[...]` with the same logarithm as `σ_0^±`.
///
/// ```text
/// N± = -2ζ0³(ζ- + ζ+ + 2ζ-ζ+) + ζ0²(4 + 6ζ- + 6ζ+ + 8ζ-ζ+) + (ζ- - ζ+)² ± (2ζ0 + ζ- + ζ+)Δ
/// D± = (1 - ζ0)[(ζ- - ζ+)² + 4ζ0²(1 + ζ+)(1 + ζ-) ± (2 + ζ- + ζ+)Δ]
/// ```
///
/// When the logarithm is exactly zero (free limit) the coefficient is zero even though `D±`
/// vanishes there too.
pub fn triple_sigma1(
    branch: Branch,
    zeta_minus: ComplexValue,
    zeta0: ComplexValue,
    zeta_plus: ComplexValue,
) -> Result<ComplexValue> {
    let delta = triple_delta_disc(zeta_minus, zeta0, zeta_plus);
    let log = triple_log(branch, zeta_minus, zeta0, zeta_plus, delta)?;
    if log == Complex64::new(0.0, 0.0) {
        return Ok(log);
    }
    let sign = branch.sign();
    let (m, o, p) = (zeta_minus, zeta0, zeta_plus);
    let o2 = o * o;
    let diff2 = (m - p) * (m - p);
    let numer = -2.0 * o2 * o * (m + p + 2.0 * m * p)
        + o2 * (4.0 + 6.0 * m + 6.0 * p + 8.0 * m * p)
        + diff2
        + sign * (2.0 * o + m + p) * delta;
    let denom = (1.0 - o) * (diff2 + 4.0 * o2 * (1.0 + p) * (1.0 + m) + sign * (2.0 + m + p) * delta);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(ResonanceError::DegenerateDenominator(format!(
            "D{} vanishes at ζ = ({m}, {o}, {p})",
            if sign > 0.0 { "+" } else { "-" }
        )));
    }
    ensure_finite(numer / denom * log, "triple next-to-leading coefficient")
}

/// Approximate pole of level `n` for any model, truncated at `order`.
///
/// The Winter model supports every order; the double and triple barriers stop at order 1.
/// Asking for more is an error, never a silent truncation.
pub fn generic_pole_approx(
    model: &ModelSpec,
    n: i64,
    branch: Branch,
    order: usize,
) -> Result<ExpansionResult> {
    match *model {
        ModelSpec::Winter { z } => {
            require_branchless(model, branch)?;
            winter_pole_approx(n, z, order)
        }
        ModelSpec::DoubleDelta { z0, z_plus } => {
            require_branchless(model, branch)?;
            require_order(model, order, 1)?;
            let zeta0 = effective_coupling(n, z0)?;
            let zeta_plus = effective_coupling(n, z_plus)?;
            let all = [double_sigma0(zeta0, zeta_plus)?, double_sigma1(zeta0, zeta_plus)?];
            ExpansionResult::assemble(n, branch, all[..=order].to_vec(), Some(1))
        }
        ModelSpec::TripleDelta { z_minus, z0, z_plus } => {
            if branch == Branch::None {
                return Err(ResonanceError::Domain("the triple model needs the plus or minus branch".into()));
            }
            require_order(model, order, 1)?;
            let zm = effective_coupling(n, z_minus)?;
            let zz = effective_coupling(n, z0)?;
            let zp = effective_coupling(n, z_plus)?;
            let mut sigmas = vec![triple_sigma0(branch, zm, zz, zp)?];
            if order >= 1 {
                sigmas.push(triple_sigma1(branch, zm, zz, zp)?);
            }
            ExpansionResult::assemble(n, branch, sigmas, Some(1))
        }
    }
}

fn require_branchless(model: &ModelSpec, branch: Branch) -> Result<()> {
    if branch != Branch::None {
        return Err(ResonanceError::Domain(format!(
            "the {} model has a single determination; branch must be none",
            model.name()
        )));
    }
    Ok(())
}

fn require_order(model: &ModelSpec, order: usize, available: usize) -> Result<()> {
    if order > available {
        return Err(ResonanceError::Capability { model: model.name(), requested: order, available });
    }
    Ok(())
}

/// Coefficients `p_k(n)` of the ordinary coupling expansion `w = 2πin + Σ_{k≥1} p_k(n) z^k`
/// of the Winter pole, from `δ = ln[1 + z(2πin + δ)]` iterated on series in `z`.
pub fn winter_z_coefficients(n: i64, order: usize) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(ResonanceError::Domain("excitation number n must be nonzero".into()));
    }
    let free = TruncatedSeries::constant(free_pole(n), order);
    let one = TruncatedSeries::constant(Complex64::new(1.0, 0.0), order);
    let mut delta = TruncatedSeries::zero(order);
    for _ in 0..=order {
        delta = one.add(&free.add(&delta)?.shift())?.log()?;
    }
    Ok(delta)
}

/// Fixed-order perturbative Winter pole: `2πin + Σ_{k=1}^{order} p_k(n) z^k`.
pub fn winter_fixed_order_pole(n: i64, z: ComplexValue, order: usize) -> Result<ComplexValue> {
    Ok(free_pole(n) + winter_z_coefficients(n, order)?.evaluate(z))
}

/// Pairs two pole sets by repeatedly taking the globally closest unmatched pair.
///
/// Returns `(index_a, index_b, distance)` triples, or `None` when the sets differ in size.
/// For sets whose matched distances are far below their internal spacing this is the
/// minimum-distance assignment.
pub fn pair_poles(a: &[ComplexValue], b: &[ComplexValue]) -> Option<Vec<(usize, usize, f64)>> {
    if a.len() != b.len() {
        return None;
    }
    let mut candidates: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, x)| b.iter().enumerate().map(move |(j, y)| ((x - y).norm(), i, j)))
        .collect();
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::with_capacity(a.len());
    for (d, i, j) in candidates {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j, d));
        }
    }
    pairs.sort_by_key(|p| p.0);
    Some(pairs)
}
