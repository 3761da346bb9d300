use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong between a coupling and a certified pole.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResonanceError {
    /// Input outside the domain of an operation (zero log argument, n = 0, complex z where a
    /// real coupling is required, non-finite values, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form expansion coefficient hits one of its singular loci.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The denominator of the triple-barrier next-to-leading coefficient vanishes.
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// The requested expansion order is not available for a model.
    #[error("order {requested} not available for the {model} model (highest available order is {available})")]
    Capability {
        model: &'static str,
        requested: usize,
        available: usize,
    },

    #[error("newton did not converge after {iterations} iterations (last w = {last}, |f| = {residual:e})")]
    NonConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    /// Newton left the disc of radius `radius` around its seed, which usually means it was
    /// captured by a neighbouring pole.
    #[error("newton left the basin around seed {seed} (|w - seed| = {distance} > {radius})")]
    BasinEscape {
        seed: Complex64,
        last: Complex64,
        distance: f64,
        radius: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("nothing to plot")]
    EmptyPlot,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ResonanceError {
    fn from(err: std::io::Error) -> Self {
        ResonanceError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ResonanceError>;
