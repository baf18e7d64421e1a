//! Appell hypergeometric function
//!
//! ```text
//! F1(a; b1, b2; c; x, y) = Σ_m Σ_n (a)_{m+n} (b1)_m (b2)_n / ((c)_{m+n} m! n!) x^m y^n
//! ```
//!
//! Inside the unit polydisc the double series is summed row by row, each row
//! being a Gauss function in `y`. On the boundary `x = 1` (with
//! `c - a - b1 > 0`) the function collapses to
//!
//! ```text
//! F1(a; b1, b2; c; 1, y) = Γ(c) Γ(c-a-b1) / (Γ(c-a) Γ(c-b1)) · 2F1(a, b2; c-b1; y)
//! ```
//!
//! which is continued across `y > 1` like any Gauss function.

use super::gamma::{gamma, rgamma};
use super::hyp2f1::{gauss_2f1_continued_report, gauss_2f1_report, series};
use super::{
    non_positive_integer, Branch, ComplexValue, EvaluationReport, SpecialFunctionError,
    MAX_SERIES_TERMS, SERIES_QUIET_TERMS, SERIES_TOLERANCE,
};

type Result<T> = std::result::Result<T, SpecialFunctionError>;

/// `F1(a; b1, b2; c; x, y)`; a `y > 1` boundary value is taken on the upper side of the cut.
pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, x: f64, y: f64) -> Result<EvaluationReport> {
    appell_f1_on_branch(a, b1, b2, c, x, y, Branch::Above)
}

/// As [`appell_f1`] with an explicit side of the cut for continued arguments.
pub fn appell_f1_on_branch(
    a: f64,
    b1: f64,
    b2: f64,
    c: f64,
    x: f64,
    y: f64,
    branch: Branch,
) -> Result<EvaluationReport> {
    if ![a, b1, b2, c, x, y].iter().all(|v| v.is_finite()) {
        return Err(SpecialFunctionError::Domain("non-finite argument".into()));
    }
    check_denominator(a, b1, b2, c)?;

    // a vanishing index reduces to a single Gauss function
    if b1 == 0.0 || x == 0.0 {
        return gauss(a, b2, c, y, branch);
    }
    if b2 == 0.0 || y == 0.0 {
        return gauss(a, b1, c, x, branch);
    }
    if x == 1.0 {
        return boundary(a, b1, b2, c, y, branch);
    }
    if y == 1.0 {
        return boundary(a, b2, b1, c, x, branch);
    }
    if x.abs() < 1.0 && y.abs() < 1.0 {
        return double_series(a, b1, b2, c, x, y);
    }
    Err(SpecialFunctionError::Domain(format!(
        "F1 is implemented for |x|, |y| < 1 or one argument equal to 1; got x = {x}, y = {y}"
    )))
}

/// `(c)_{m+n}` must not reach zero before the numerator terminates.
fn check_denominator(a: f64, b1: f64, b2: f64, c: f64) -> Result<()> {
    let Some(q) = non_positive_integer(c) else {
        return Ok(());
    };
    let a_stops = non_positive_integer(a).is_some_and(|p| p <= q);
    let both_stop = matches!(
        (non_positive_integer(b1), non_positive_integer(b2)),
        (Some(p1), Some(p2)) if p1 + p2 <= q
    );
    if a_stops || both_stop {
        Ok(())
    } else {
        Err(SpecialFunctionError::Degenerate(format!(
            "(c)_(m+n) vanishes for c = {c} before the numerator terminates"
        )))
    }
}

fn gauss(a: f64, b: f64, c: f64, z: f64, branch: Branch) -> Result<EvaluationReport> {
    if z > 1.0 {
        gauss_2f1_continued_report(a, b, c, z, branch)
    } else {
        gauss_2f1_report(a, b, c, z)
    }
}

/// Reduction at `x = 1`, where `b_edge` pairs with the unit argument.
fn boundary(
    a: f64,
    b_edge: f64,
    b_other: f64,
    c: f64,
    y: f64,
    branch: Branch,
) -> Result<EvaluationReport> {
    let excess = c - a - b_edge;
    if !(excess > 0.0) {
        return Err(SpecialFunctionError::Domain(format!(
            "F1 at a unit argument needs c - a - b > 0, got {excess}"
        )));
    }
    if non_positive_integer(c).is_some() {
        return Err(SpecialFunctionError::Degenerate(format!(
            "Gamma(c) has a pole at c = {c}"
        )));
    }
    if non_positive_integer(c - b_edge).is_some() {
        return Err(SpecialFunctionError::Degenerate(format!(
            "reduced Gauss function has a non-positive integer c - b = {}",
            c - b_edge
        )));
    }
    let ratio = gamma(c) * gamma(excess) * rgamma(c - a) * rgamma(c - b_edge);
    if ratio == 0.0 {
        return Ok(EvaluationReport {
            value: ComplexValue::real(0.0),
            terms_used: 1,
            converged: true,
            degenerate_parameters: false,
        });
    }
    let inner = gauss(a, b_other, c - b_edge, y, branch)?;
    EvaluationReport::converged(inner.value.scale(ratio), inner.terms_used)
}

fn double_series(a: f64, b1: f64, b2: f64, c: f64, x: f64, y: f64) -> Result<EvaluationReport> {
    let mut sum = 0.0;
    // (a)_m (b1)_m / ((c)_m m!) x^m
    let mut outer = 1.0;
    let mut quiet = 0;
    let mut terms = 0;
    for m in 0..MAX_SERIES_TERMS {
        let mf = m as f64;
        if outer == 0.0 {
            return EvaluationReport::converged(ComplexValue::real(sum), terms);
        }
        // the connection formula near y = 1 overflows its gamma factors for
        // large rows, so positive y stays on the plain series
        let row = if y < 0.0 {
            let r = gauss_2f1_report(a + mf, b2, c + mf, y)?;
            (r.value.re, r.terms_used)
        } else {
            let r = series(a + mf, b2, c + mf, y)?;
            (r.value, r.terms)
        };
        terms += row.1;
        let term = outer * row.0;
        sum += term;
        if !sum.is_finite() {
            return Err(SpecialFunctionError::NonFinite(format!(
                "F1({a}; {b1}, {b2}; {c}; {x}, {y}) overflowed"
            )));
        }
        if term.abs() <= SERIES_TOLERANCE * sum.abs() {
            quiet += 1;
            if quiet >= SERIES_QUIET_TERMS {
                return EvaluationReport::converged(ComplexValue::real(sum), terms);
            }
        } else {
            quiet = 0;
        }
        outer *= (a + mf) * (b1 + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    Err(SpecialFunctionError::NonConvergence {
        terms: MAX_SERIES_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_2f1;

    #[test]
    fn origin_is_one() {
        let r = appell_f1(-1.5, 0.5, 0.5, -0.5, 0.0, 0.0).unwrap();
        assert_eq!(r.value, ComplexValue::real(1.0));
        assert!(r.converged);
    }

    #[test]
    fn vanishing_b2_reduces_to_gauss() {
        for &y in &[-0.7, 0.2, 0.9, 5.0] {
            let f1 = appell_f1(0.8, 1.3, 0.0, 2.1, 0.45, y).unwrap();
            let f = gauss_2f1(0.8, 1.3, 2.1, 0.45).unwrap();
            assert!((f1.value.re - f).abs() < 1e-14 * f.abs());
            assert_eq!(f1.value.im, 0.0);
        }
    }

    #[test]
    fn equal_arguments_collapse() {
        // F1(a; b1, b2; c; x, x) = 2F1(a, b1 + b2; c; x)
        let (a, b1, b2, c) = (0.7, 0.4, 1.1, 2.3);
        for &x in &[-0.6, 0.3, 0.8] {
            let f1 = appell_f1(a, b1, b2, c, x, x).unwrap().value.re;
            let f = gauss_2f1(a, b1 + b2, c, x).unwrap();
            assert!((f1 - f).abs() < 1e-12 * f.abs(), "x = {x}: {f1} vs {f}");
        }
    }

    #[test]
    fn boundary_reduction_matches_row_sum() {
        // x = 1 inside the convergent range of y: sum rows via the Gauss sum
        let (a, b1, b2, c, y) = (0.3, 0.5, 0.7, 2.4, 0.35);
        let reduced = appell_f1(a, b1, b2, c, 1.0, y).unwrap().value.re;
        let mut expected = 0.0;
        let mut coeff = 1.0;
        let mut gauss_sum = gamma(c) * gamma(c - a - b1) / (gamma(c - a) * gamma(c - b1));
        for n in 0..200 {
            let nf = n as f64;
            expected += coeff * gauss_sum;
            coeff *= (a + nf) * (b2 + nf) / ((c + nf) * (nf + 1.0)) * y;
            gauss_sum *= (c + nf) / (c + nf - b1);
        }
        assert!((reduced - expected).abs() < 1e-12 * expected.abs());
        // symmetric placement
        let swapped = appell_f1(a, b2, b1, c, y, 1.0).unwrap().value.re;
        assert!((reduced - swapped).abs() < 1e-14 * expected.abs());
    }

    #[test]
    fn boundary_requires_positive_excess() {
        assert!(matches!(
            appell_f1(1.0, 1.5, 0.5, 2.0, 1.0, 0.5),
            Err(SpecialFunctionError::Domain(_))
        ));
    }

    #[test]
    fn degenerate_parameters_are_refused() {
        // a = -3n, c = 1 - 3n at n = 1
        assert!(matches!(
            appell_f1(-3.0, 0.5, 0.5, -2.0, 1.0, 3.0),
            Err(SpecialFunctionError::Degenerate(_))
        ));
        assert!(matches!(
            appell_f1(-1.5, 0.5, 0.5, -2.0, 0.2, 0.3),
            Err(SpecialFunctionError::Degenerate(_))
        ));
    }

    #[test]
    fn outside_domain() {
        assert!(appell_f1(0.5, 0.5, 0.5, 2.0, 1.5, 0.2).is_err());
        assert!(appell_f1(0.5, 0.5, 0.5, 2.0, 0.2, f64::NAN).is_err());
    }

    #[test]
    fn continued_boundary_branches_conjugate() {
        let up = appell_f1_on_branch(-1.8, 0.5, 0.5, -0.8, 1.0, 3.0, Branch::Above).unwrap();
        let down = appell_f1_on_branch(-1.8, 0.5, 0.5, -0.8, 1.0, 3.0, Branch::Below).unwrap();
        assert_eq!(up.value, down.value.conj());
        assert!(up.value.im != 0.0);
    }
}
