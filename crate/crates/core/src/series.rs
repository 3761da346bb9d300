//! Truncated power series with complex coefficients.
//!
//! A series of order `K` stores `K + 1` coefficients `c[0..=K]` of `Σ c[k] x^k`. All
//! arithmetic keeps the order of its operands and drops powers above `K`. The expansion
//! engine uses `x = 1/(2πin)`, the fixed-order coupling expansion uses `x = z`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::complex::{principal_log, ComplexValue};
use crate::error::{ResonanceError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ComplexValue>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<ComplexValue>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(ResonanceError::Domain("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(value: ComplexValue, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// `value · x`, i.e. the expansion variable scaled.
    pub fn variable(value: ComplexValue, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = value;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ComplexValue {
        self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<ComplexValue> {
        self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(ResonanceError::Domain(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let k_max = self.order();
        let coeffs = (0..=k_max)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: ComplexValue) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplication by the expansion variable: every coefficient moves up one power and
    /// the top one falls off.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        Self { coeffs }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let b0 = other.coeffs[0];
        if b0 == Complex64::new(0.0, 0.0) {
            return Err(ResonanceError::Domain("series division by a zero constant term".into()));
        }
        let mut q: Vec<ComplexValue> = Vec::with_capacity(self.coeffs.len());
        for k in 0..=self.order() {
            let acc: ComplexValue = (1..=k).map(|j| other.coeffs[j] * q[k - j]).sum();
            q.push((self.coeffs[k] - acc) / b0);
        }
        Ok(Self { coeffs: q })
    }

    /// Logarithm of a series. Only the constant term chooses a branch (principal); the
    /// remaining coefficients follow from `(ln s)' = s'/s`:
    /// `k f[k] s[0] = k s[k] - Σ_{j=1}^{k-1} j f[j] s[k-j]`.
    pub fn log(&self) -> Result<Self> {
        let s0 = self.coeffs[0];
        if s0 == Complex64::new(0.0, 0.0) {
            return Err(ResonanceError::Domain("logarithm of a series with zero constant term".into()));
        }
        let mut f = Vec::with_capacity(self.coeffs.len());
        f.push(principal_log(s0)?);
        for k in 1..=self.order() {
            let acc: ComplexValue =
                (1..k).map(|j| f[j] * self.coeffs[k - j] * j as f64).sum();
            f.push((self.coeffs[k] * k as f64 - acc) / (s0 * k as f64));
        }
        Ok(Self { coeffs: f })
    }

    /// Exponential of a series: `k e[k] = Σ_{j=1}^{k} j s[j] e[k-j]`.
    pub fn exp(&self) -> Self {
        let mut e = Vec::with_capacity(self.coeffs.len());
        e.push(self.coeffs[0].exp());
        for k in 1..=self.order() {
            let acc: ComplexValue = (1..=k).map(|j| self.coeffs[j] * e[k - j] * j as f64).sum();
            e.push(acc / k as f64);
        }
        Self { coeffs: e }
    }

    /// Horner evaluation at `x`.
    pub fn evaluate(&self, x: ComplexValue) -> ComplexValue {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs).expect("series orders differ")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs).expect("series orders differ")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs).expect("series orders differ")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
