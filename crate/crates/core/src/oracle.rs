//! Exact poles by damped Newton iteration on the model residuals.
//!
//! Seeds come from the 1/n expansion. A root is only reported when the residual is below
//! tolerance and the iterate stayed within `basin_radius` of its seed; strips around `2πin`
//! are `2π` tall, so leaving a disc of radius π means a neighbouring pole took over.

use std::f64::consts::PI;

use crate::complex::{is_finite, ComplexValue};
use crate::error::{ResonanceError, Result};
use crate::expansion::{generic_pole_approx, Branch, ExpansionResult};
use crate::models::ModelSpec;

/// Environment variable that overrides [`NewtonOptions::basin_radius`].
pub const BASIN_ENV: &str = "RESONANCE_SEED_BASIN";

const MAX_HALVINGS: usize = 20;

/// A Newton correction this many ulps of `|w|` or smaller means `w` is a root to working
/// precision, whatever `|f|` is left.
const FLOOR_ULPS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub basin_radius: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-13, max_iter: 50, basin_radius: PI }
    }
}

impl NewtonOptions {
    /// Defaults, with the basin radius taken from `RESONANCE_SEED_BASIN` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = Self::default();
        if let Ok(raw) = std::env::var(BASIN_ENV) {
            opts.basin_radius = parse_basin(&raw)?;
        }
        Ok(opts)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ResonanceError::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.basin_radius.is_nan() || self.basin_radius <= 0.0 {
            return Err(ResonanceError::Domain(format!(
                "basin radius must be positive, got {}",
                self.basin_radius
            )));
        }
        Ok(())
    }
}

pub fn parse_basin(raw: &str) -> Result<f64> {
    match raw.trim().parse::<f64>() {
        Ok(r) if r > 0.0 && r.is_finite() => Ok(r),
        _ => Err(ResonanceError::Config(format!("{BASIN_ENV} must be a positive number, got '{raw}'"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub w: ComplexValue,
    pub iterations: usize,
    pub residual_norm: f64,
    pub seed: ComplexValue,
    pub converged: bool,
}

/// Damped Newton on `model.residual`, started at `seed`.
///
/// A step is halved (up to 20 times) while it would increase `|f|`. The iteration stops with
/// a converged root when `|f| < tol`, or when no step lowers `|f|` any more and the Newton
/// correction is below the resolution of `w` itself. Near `|w| ~ 60` the residual of the triple-barrier equation at
/// the correctly rounded root can exceed `1e-13`, so the second test is what certifies such
/// roots; `residual_norm` always reports the actual `|f(w)|`.
///
/// Returns an error on iteration exhaustion, stagnation or basin escape; an `Ok` result is
/// always converged.
pub fn newton_solve(model: &ModelSpec, seed: ComplexValue, opts: &NewtonOptions) -> Result<RootResult> {
    opts.validate()?;
    if !is_finite(seed) {
        return Err(ResonanceError::Domain(format!("seed {seed} is not finite")));
    }
    let mut w = seed;
    let mut f = model.residual(w);
    let mut norm = f.norm();

    for iterations in 0..=opts.max_iter {
        if norm < opts.tol {
            return Ok(RootResult { w, iterations, residual_norm: norm, seed, converged: true });
        }
        if iterations == opts.max_iter {
            break;
        }
        let step = f / model.residual_derivative(w);
        if !is_finite(step) {
            break;
        }

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = w - step * scale;
            let trial_f = model.residual(trial);
            if is_finite(trial_f) && trial_f.norm() < norm {
                accepted = Some((trial, trial_f));
                break;
            }
            scale *= 0.5;
        }
        let Some((next, next_f)) = accepted else {
            // No halving reduces |f|. That is a root if the full correction is already below
            // the resolution of w, and stagnation otherwise.
            if step.norm() <= FLOOR_ULPS * f64::EPSILON * w.norm().max(1.0) {
                return Ok(RootResult { w, iterations, residual_norm: norm, seed, converged: true });
            }
            break;
        };

        w = next;
        f = next_f;
        norm = f.norm();
        let distance = (w - seed).norm();
        if distance > opts.basin_radius {
            return Err(ResonanceError::BasinEscape { seed, last: w, distance, radius: opts.basin_radius });
        }
    }
    Err(ResonanceError::NonConvergence { iterations: opts.max_iter, last: w, residual: norm })
}

/// A Newton-refined pole together with the expansion that seeded it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPole {
    pub n: i64,
    pub branch: Branch,
    pub seed: ExpansionResult,
    pub root: RootResult,
}

impl ExactPole {
    /// `|w_approx - w_exact| / |w_exact|`.
    pub fn relative_error(&self) -> f64 {
        (self.seed.w_approx - self.root.w).norm() / self.root.w.norm()
    }
}

/// Seeds Newton with the order-`seed_order` expansion of level `n` and refines it.
pub fn exact_pole(
    model: &ModelSpec,
    n: i64,
    branch: Branch,
    seed_order: usize,
    opts: &NewtonOptions,
) -> Result<ExactPole> {
    let seed = generic_pole_approx(model, n, branch, seed_order)?;
    let root = newton_solve(model, seed.w_approx, opts)?;
    Ok(ExactPole { n, branch, seed, root })
}
