use rayon::prelude::*;

use crate::complex::ComplexValue;
use crate::error::{ResonanceError, Result};
use crate::expansion::{generic_pole_approx, winter_fixed_order_pole, Branch};
use crate::models::ModelSpec;
use crate::observables::ResonanceRecord;
use crate::oracle::{exact_pole, newton_solve};

use super::config::SweepConfig;

/// A `(n, branch)` row that could not be resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    pub n: i64,
    pub branch: Branch,
    pub error: ResonanceError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub records: Vec<ResonanceRecord>,
    pub failures: Vec<RowFailure>,
}

impl SolveReport {
    pub fn all_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expansion pole, Newton pole, relative error, rate and residual for every `(n, branch)`.
/// Rows are computed in parallel and returned ordered by `(n, branch)`.
pub fn solve(config: &SweepConfig) -> Result<SolveReport> {
    config.validate()?;
    let results: Vec<_> = config
        .jobs()
        .into_par_iter()
        .map(|(n, branch)| {
            exact_pole(&config.model, n, branch, config.order, &config.newton)
                .map(|pole| ResonanceRecord::from_exact(&config.model, &pole))
                .map_err(|error| RowFailure { n, branch, error })
        })
        .collect();

    let mut report = SolveReport { records: Vec::new(), failures: Vec::new() };
    for r in results {
        match r {
            Ok(rec) => report.records.push(rec),
            Err(f) => report.failures.push(f),
        }
    }
    Ok(report)
}

/// One level of the convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub n: i64,
    pub w_exact: ComplexValue,
    /// Relative error of the 1/n expansion truncated at K = 0, 1, ..., K_max.
    pub expansion_errors: Vec<f64>,
    /// Relative error of the fixed-order coupling expansion.
    pub fixed_order_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub k_max: usize,
    pub fixed_order: usize,
    pub rows: Vec<CompareRow>,
    pub failures: Vec<RowFailure>,
}

/// 1/n expansion at every order up to `config.order` against the Newton pole, alongside the
/// ordinary coupling expansion truncated at `fixed_order`. Winter model only.
pub fn compare(config: &SweepConfig, fixed_order: usize) -> Result<CompareReport> {
    config.validate()?;
    let ModelSpec::Winter { z } = config.model else {
        return Err(ResonanceError::Config("compare supports the winter model only".into()));
    };
    let k_max = config.order;
    let results: Vec<_> = (config.n_min..=config.n_max)
        .into_par_iter()
        .map(|n| -> std::result::Result<CompareRow, RowFailure> {
            let fail = |error| RowFailure { n, branch: Branch::None, error };
            let best = generic_pole_approx(&config.model, n, Branch::None, k_max).map_err(fail)?;
            let root = newton_solve(&config.model, best.w_approx, &config.newton).map_err(fail)?;
            let exact = root.w;
            let rel = |w: ComplexValue| (w - exact).norm() / exact.norm();
            let expansion_errors = (0..=k_max)
                .map(|k| generic_pole_approx(&config.model, n, Branch::None, k).map(|r| rel(r.w_approx)))
                .collect::<Result<Vec<_>>>()
                .map_err(fail)?;
            let fixed = winter_fixed_order_pole(n, z, fixed_order).map_err(fail)?;
            Ok(CompareRow { n, w_exact: exact, expansion_errors, fixed_order_error: rel(fixed) })
        })
        .collect();

    let mut report = CompareReport { k_max, fixed_order, rows: Vec::new(), failures: Vec::new() };
    for r in results {
        match r {
            Ok(row) => report.rows.push(row),
            Err(f) => report.failures.push(f),
        }
    }
    Ok(report)
}
