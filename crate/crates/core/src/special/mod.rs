//! Special-function kernels: gamma/digamma, the Gauss hypergeometric
//! function and its continuation across the cut `z > 1`, and the Appell
//! function F1 including its `x = 1` boundary.

mod appell;
mod gamma;
mod hyp2f1;

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use appell::{appell_f1, appell_f1_on_branch};
pub use gamma::{cos_pi, digamma, gamma, rgamma, sin_pi};
pub use hyp2f1::{
    gauss_2f1, gauss_2f1_continued, gauss_2f1_continued_report, gauss_2f1_report, gauss_2f1_series,
};

/// Relative size below which a series term counts as negligible.
pub const SERIES_TOLERANCE: f64 = 1e-16;
/// Consecutive negligible terms required to stop a series.
pub const SERIES_QUIET_TERMS: usize = 3;
/// Hard cap on terms per series index.
pub const MAX_SERIES_TERMS: usize = 10_000;
/// Parameters this close to an integer are treated as that integer when
/// testing for poles and logarithmic cases.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

impl SpecialFunctionError {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, SpecialFunctionError::Degenerate(_))
    }
}

/// Side of the real cut `z > 1` a continued value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `z + i0`
    #[default]
    Above,
    /// `z - i0`
    Below,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Above => "above",
            Branch::Below => "below",
        }
    }

    pub(crate) fn sign(&self) -> f64 {
        match self {
            Branch::Above => 1.0,
            Branch::Below => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.re * factor, self.im * factor)
    }

    /// `exp(i pi t)`, accurate for large or integer `t`.
    pub fn unit_pi(t: f64) -> Self {
        // evaluated at |t| so opposite angles give exact conjugates
        let s = sin_pi(t.abs());
        Self::new(cos_pi(t.abs()), if t < 0.0 { -s } else { s })
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for ComplexValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Mul for ComplexValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{} - {}i", self.re, -self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Value of a kernel evaluation together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub value: ComplexValue,
    pub terms_used: usize,
    /// Only `true` values are ever handed out by the kernels; failures
    /// surface as [`SpecialFunctionError`].
    pub converged: bool,
    pub degenerate_parameters: bool,
}

impl EvaluationReport {
    pub(crate) fn converged(
        value: ComplexValue,
        terms_used: usize,
    ) -> Result<Self, SpecialFunctionError> {
        if !value.is_finite() {
            return Err(SpecialFunctionError::NonFinite(value.to_string()));
        }
        Ok(Self {
            value,
            terms_used,
            converged: true,
            degenerate_parameters: false,
        })
    }
}

/// Inverse hyperbolic cosine, `ln(t + sqrt(t^2 - 1))` for `t >= 1`.
pub fn arccosh(t: f64) -> Result<f64, SpecialFunctionError> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(SpecialFunctionError::Domain(format!(
            "arccosh requires t >= 1, got {t}"
        )));
    }
    // t - 1 is exact near 1, so ln_1p keeps full relative accuracy at small angles
    let e = t - 1.0;
    Ok((e + (e * (t + 1.0)).sqrt()).ln_1p())
}

/// `Some(k)` when `x` is within [`INTEGER_TOLERANCE`] of the integer `k`.
pub(crate) fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= INTEGER_TOLERANCE * r.abs().max(1.0) && r.abs() < 1e15 {
        Some(r as i64)
    } else {
        None
    }
}

/// `Some(p)` when `x` is (within tolerance) the non-positive integer `-p`.
pub(crate) fn non_positive_integer(x: f64) -> Option<u64> {
    near_integer(x).filter(|&k| k <= 0).map(|k| (-k) as u64)
}
