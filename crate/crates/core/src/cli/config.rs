//! Sweep configuration: a flat `key = value` file, overridable key by key from the command
//! line.
//!
//! ```text
//! # triple-barrier sweep, both branches
//! model    = triple
//! z_minus  = 0.1
//! z0       = -0.05
//! z_plus   = 0.15
//! n        = 1..10
//! order    = 1
//! branches = plus,minus
//! out      = csv,json,svg
//! path     = results/
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::complex::ComplexValue;
use crate::error::{ResonanceError, Result};
use crate::expansion::Branch;
use crate::models::ModelSpec;
use crate::oracle::NewtonOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = ResonanceError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(ResonanceError::Config(format!("unknown output format '{other}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: ModelSpec,
    pub n_min: i64,
    pub n_max: i64,
    pub order: usize,
    pub branches: Vec<Branch>,
    pub outputs: Vec<OutputFormat>,
    pub output_path: PathBuf,
    pub newton: NewtonOptions,
}

impl SweepConfig {
    /// Branches actually swept: both determinations for the triple model, `none` otherwise.
    pub fn effective_branches(&self) -> Vec<Branch> {
        match self.model {
            ModelSpec::TripleDelta { .. } => self.branches.clone(),
            _ => vec![Branch::None],
        }
    }

    /// `(n, branch)` jobs in output order.
    pub fn jobs(&self) -> Vec<(i64, Branch)> {
        let branches = self.effective_branches();
        (self.n_min..=self.n_max)
            .flat_map(|n| branches.iter().map(move |&b| (n, b)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(ResonanceError::Config(format!(
                "n range must satisfy 1 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.newton.tol.is_nan() || self.newton.tol <= 0.0 {
            return Err(ResonanceError::Config(format!("tol must be positive, got {}", self.newton.tol)));
        }
        if self.effective_branches().is_empty() {
            return Err(ResonanceError::Config("no branches selected".into()));
        }
        if self.branches.contains(&Branch::None) && matches!(self.model, ModelSpec::TripleDelta { .. }) {
            return Err(ResonanceError::Config("the triple model takes branches plus and/or minus".into()));
        }
        self.model.validate()?;
        Ok(())
    }
}

/// Ordered key-value settings prior to interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

fn canonical_key(key: &str) -> String {
    let key = key.trim().to_ascii_lowercase().replace('-', "_");
    match key.as_str() {
        "zp" | "z+" | "zplus" => "z_plus".into(),
        "zm" | "zminus" => "z_minus".into(),
        "outputs" | "output" => "out".into(),
        "output_path" => "path".into(),
        "k" => "order".into(),
        "maxiter" => "max_iter".into(),
        _ => key,
    }
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| ResonanceError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            raw.set(key, value.trim());
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(canonical_key(key), value.trim().to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn coupling(&self, key: &str) -> Result<ComplexValue> {
        match self.get(key) {
            None => Ok(Complex64::new(0.0, 0.0)),
            Some(v) => parse_complex(v).map_err(|_| ResonanceError::Config(format!("{key}: cannot parse '{v}'"))),
        }
    }

    fn parse_num<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ResonanceError::Config(format!("{key}: cannot parse '{v}'"))),
        }
    }

    pub fn build(&self, base: NewtonOptions) -> Result<SweepConfig> {
        let known = [
            "model", "z", "z0", "z_plus", "z_minus", "n", "order", "branches", "out", "path", "tol", "max_iter",
        ];
        if let Some(unknown) = self.entries.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(ResonanceError::Config(format!("unknown key '{unknown}'")));
        }

        let model = match self.get("model").unwrap_or("winter").to_ascii_lowercase().as_str() {
            "winter" => ModelSpec::Winter { z: self.coupling("z")? },
            "double" | "double_delta" => ModelSpec::DoubleDelta {
                z0: self.coupling("z0")?,
                z_plus: self.coupling("z_plus")?,
            },
            "triple" | "triple_delta" => ModelSpec::TripleDelta {
                z_minus: self.coupling("z_minus")?,
                z0: self.coupling("z0")?,
                z_plus: self.coupling("z_plus")?,
            },
            other => return Err(ResonanceError::Config(format!("unknown model '{other}'"))),
        };

        let (n_min, n_max) = parse_range(self.get("n").unwrap_or("1..10"))?;
        let default_order = if matches!(model, ModelSpec::Winter { .. }) { 2 } else { 1 };
        let order = self.parse_num("order", default_order)?;
        let branches = parse_list(self.get("branches").unwrap_or("plus,minus"))?;
        let outputs = parse_list(self.get("out").unwrap_or("csv"))?;
        let newton = NewtonOptions {
            tol: self.parse_num("tol", base.tol)?,
            max_iter: self.parse_num("max_iter", base.max_iter)?,
            basin_radius: base.basin_radius,
        };

        let config = SweepConfig {
            model,
            n_min,
            n_max,
            order,
            branches,
            outputs,
            output_path: PathBuf::from(self.get("path").unwrap_or(".")),
            newton,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Accepts `a`, `a+bi`, `a-bi`, `bi` (the num-complex grammar).
pub fn parse_complex(s: &str) -> Result<ComplexValue> {
    Complex64::from_str(s.trim()).map_err(|_| ResonanceError::Config(format!("not a complex number: '{s}'")))
}

/// `a..b` (inclusive) or a single level `a`.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || ResonanceError::Config(format!("n: expected 'a..b' or 'a', got '{s}'"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn parse_list<T: FromStr<Err = ResonanceError> + Ord>(s: &str) -> Result<Vec<T>> {
    let mut items = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<T>>>()?;
    items.sort();
    items.dedup();
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triple_file() {
        let text = "# comment\nmodel = triple\nz_minus = 0.1\nz0 = -0.05\nz+ = 0.15\nn = 1..10\norder = 1\nbranches = minus, plus\nout = svg,csv\n";
        let cfg = RawConfig::parse(text).unwrap().build(NewtonOptions::default()).unwrap();
        assert_eq!(cfg.model, ModelSpec::triple_delta(0.1, -0.05, 0.15));
        assert_eq!((cfg.n_min, cfg.n_max), (1, 10));
        assert_eq!(cfg.branches, vec![Branch::Plus, Branch::Minus]);
        assert_eq!(cfg.outputs, vec![OutputFormat::Csv, OutputFormat::Svg]);
        assert_eq!(cfg.jobs().len(), 20);
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut raw = RawConfig::parse("model = winter\nz = -0.1\nn = 1..5").unwrap();
        raw.set("n", "3");
        raw.set("z", "0.05+0.01i");
        let cfg = raw.build(NewtonOptions::default()).unwrap();
        assert_eq!((cfg.n_min, cfg.n_max), (3, 3));
        assert_eq!(cfg.model, ModelSpec::Winter { z: Complex64::new(0.05, 0.01) });
        assert_eq!(cfg.order, 2);
        assert_eq!(cfg.jobs(), vec![(3, Branch::None)]);
    }

    #[test]
    fn rejects_bad_input() {
        let build = |t: &str| RawConfig::parse(t).and_then(|r| r.build(NewtonOptions::default()));
        assert!(build("model = quadruple").is_err());
        assert!(build("n = 5..2").is_err());
        assert!(build("n = 0..2").is_err());
        assert!(build("tol = -1").is_err());
        assert!(build("colour = red").is_err());
        assert!(build("z = abc").is_err());
        assert!(build("out = png").is_err());
        assert!(build("this line has no separator").is_err());
        assert!(build("model = triple\nbranches = none").is_err());
    }

    #[test]
    fn range_forms() {
        assert_eq!(parse_range("2..7").unwrap(), (2, 7));
        assert_eq!(parse_range("2..=7").unwrap(), (2, 7));
        assert_eq!(parse_range(" 4 ").unwrap(), (4, 4));
        assert!(parse_range("a..b").is_err());
    }
}
