//! Complex scalars with the branch conventions used throughout the crate.
//!
//! The logarithm takes `arg` in `(-π, π]`, so the negative real axis maps to `+iπ`.
//! The square root takes the root with `arg` in `(-π/2, π/2]`.

use num_complex::Complex64;

use crate::error::{ResonanceError, Result};

/// Every pole, coupling and expansion coefficient is one of these.
pub type ComplexValue = Complex64;

pub const I: ComplexValue = Complex64::new(0.0, 1.0);

pub fn is_finite(c: ComplexValue) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

pub(crate) fn ensure_finite(c: ComplexValue, what: &str) -> Result<ComplexValue> {
    if is_finite(c) {
        Ok(c)
    } else {
        Err(ResonanceError::Domain(format!("{what} is not finite: {c}")))
    }
}

/// Principal logarithm `ln|c| + i arg(c)`, `arg(c) ∈ (-π, π]`.
///
/// `f64::atan2` already returns `+π` for `(-x, +0.0)`. A negative zero imaginary part would
/// give `-π`, so the sign of zero is discarded before taking the argument.
pub fn principal_log(c: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(c, "logarithm argument")?;
    if c.re == 0.0 && c.im == 0.0 {
        return Err(ResonanceError::Domain("logarithm of zero".into()));
    }
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    Ok(Complex64::new(c.norm().ln(), im.atan2(c.re)))
}

/// Principal square root: `Re ≥ 0`, and `Im ≥ 0` whenever `Re = 0`.
pub fn principal_sqrt(c: ComplexValue) -> ComplexValue {
    if c.im == 0.0 {
        // Exact on the real axis, and the negative axis goes to +i√|x|.
        return if c.re >= 0.0 {
            Complex64::new(c.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-c.re).sqrt())
        };
    }
    // num-complex uses the half-angle formula with the cut on the negative real axis,
    // which is the principal determination off the axis.
    c.sqrt()
}

/// Exponential with a finiteness check on the way out.
pub fn checked_exp(c: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(c.exp(), "exponential")
}
