//! Adaptive Gauss-Kronrod evaluation of the pressure-drop integral
//!
//! ```text
//! P = 2 C Q^n (3n + 1)^n / (pi^n n^n) * ∫_{-L/2}^{L/2} dx / r(x)^(3n + 1)
//! ```
//!
//! The radius is only ever obtained through [`geometry::radius_at`], so this
//! module shares nothing with the closed forms and serves as their oracle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{check_non_negative, check_positive, Error};
use crate::fluid::PowerLawFluid;
use crate::geometry::{radius_at, TubeSpec};

pub const MAX_PANELS: usize = 10_000;
/// Tolerance used by the validation suite.
pub const VALIDATION_REL_TOL: f64 = 1e-10;
/// Tolerance used when a closed form falls back to quadrature.
pub const FALLBACK_REL_TOL: f64 = 1e-8;
pub const MIN_REL_TOL: f64 = 1e-14;
pub const MAX_REL_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach rel_tol {rel_tol:e} within {} panels (best {} ± {})", best.subdivisions, best.value, best.error_estimate)]
    NonConvergence {
        rel_tol: f64,
        best: QuadratureResult,
    },
    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),
}

// Kronrod 15-point abscissae (descending, last is the centre) and weights,
// with the embedded 7-point Gauss weights for odd-indexed nodes and the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Sum of |f| weights, used to detect a roundoff-limited panel.
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // largest error first; ties broken by position for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod<F>(f: &F, lo: f64, hi: f64) -> Result<Panel, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFiniteIntegrand(x))
        }
    };
    let fc = eval(centre)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut magnitude = WGK[7] * fc.abs();
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let left = eval(centre - dx)?;
        let right = eval(centre + dx)?;
        k += w * (left + right);
        magnitude += w * (left.abs() + right.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (left + right);
        }
    }
    Ok(Panel {
        lo,
        hi,
        value: k * half,
        error: ((k - g) * half).abs(),
        magnitude: magnitude * half.abs(),
    })
}

/// Adaptive integration of `f` over `[lo, hi]`.
///
/// The panel with the largest `|K15 - G7|` is bisected until the summed
/// estimate drops to `rel_tol * |value|` or `max_panels` is reached. Panels
/// whose estimate is already at roundoff level are never split. The final
/// sum runs over panels sorted by position, so results are reproducible.
pub fn adaptive_integrate<F>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let mut active = BinaryHeap::new();
    let mut settled: Vec<Panel> = Vec::new();
    active.push(kronrod(&f, lo, hi)?);
    let mut panels = 1;

    let totals = |active: &BinaryHeap<Panel>, settled: &[Panel]| {
        let mut all: Vec<&Panel> = active.iter().chain(settled.iter()).collect();
        all.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        all.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    // running sums only decide when to do the exact, ordered summation
    let (mut run_value, mut run_error) = totals(&active, &settled);

    loop {
        let stalled = panels >= max_panels || active.is_empty();
        if stalled || run_error <= rel_tol * run_value.abs() {
            let (value, error) = totals(&active, &settled);
            let converged = error <= rel_tol * value.abs();
            if converged || stalled {
                let result = QuadratureResult {
                    value,
                    error_estimate: error,
                    subdivisions: panels,
                    converged,
                };
                return if converged {
                    Ok(result)
                } else {
                    Err(QuadratureError::NonConvergence {
                        rel_tol,
                        best: result,
                    })
                };
            }
            run_value = value;
            run_error = error;
        }
        let worst = active.pop().expect("active panels are non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        run_value -= worst.value;
        run_error -= worst.error;
        for child in [kronrod(&f, worst.lo, mid)?, kronrod(&f, mid, worst.hi)?] {
            run_value += child.value;
            run_error += child.error;
            let at_roundoff = child.error <= 4.0 * f64::EPSILON * child.magnitude;
            let too_narrow = (child.hi - child.lo).abs() <= 8.0 * f64::EPSILON * (hi - lo).abs();
            if at_roundoff || too_narrow {
                settled.push(child);
            } else {
                active.push(child);
            }
        }
        panels += 1;
    }
}

fn check_rel_tol(rel_tol: f64) -> Result<(), Error> {
    if (MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rel_tol",
            reason: format!("must lie in [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}], got {rel_tol}"),
        })
    }
}

fn inverse_power<'a>(spec: &'a TubeSpec, exponent: f64) -> impl Fn(f64) -> f64 + 'a {
    // NaN for positions outside the tube surfaces as a non-finite integrand
    move |x| radius_at(spec, x).map_or(f64::NAN, |r| r.powf(-exponent))
}

/// `∫_{-L/2}^{L/2} r(x)^(-exponent) dx`, integrating `[0, L/2]` and doubling.
pub fn integrate_inverse_radius_power(
    spec: &TubeSpec,
    exponent: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, Error> {
    check_positive("exponent", exponent)?;
    check_rel_tol(rel_tol)?;
    let half = adaptive_integrate(
        inverse_power(spec, exponent),
        0.0,
        spec.half_length(),
        rel_tol,
        MAX_PANELS,
    )
    .map_err(|e| match e {
        QuadratureError::NonConvergence { rel_tol, best } => QuadratureError::NonConvergence {
            rel_tol,
            best: QuadratureResult {
                value: 2.0 * best.value,
                error_estimate: 2.0 * best.error_estimate,
                ..best
            },
        },
        other => other,
    })?;
    Ok(QuadratureResult {
        value: 2.0 * half.value,
        error_estimate: 2.0 * half.error_estimate,
        ..half
    })
}

/// Same integral over the whole tube without using the mirror symmetry.
pub fn integrate_inverse_radius_power_full(
    spec: &TubeSpec,
    exponent: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, Error> {
    check_positive("exponent", exponent)?;
    check_rel_tol(rel_tol)?;
    let h = spec.half_length();
    Ok(adaptive_integrate(
        inverse_power(spec, exponent),
        -h,
        h,
        rel_tol,
        MAX_PANELS,
    )?)
}

/// Pressure drop by quadrature: master prefactor times `Q^n` times the integral.
pub fn pressure_drop_numeric(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    flow_rate: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, Error> {
    check_non_negative("flow_rate", flow_rate)?;
    let integral = integrate_inverse_radius_power(spec, fluid.radius_exponent(), rel_tol)?;
    let scale = fluid.master_prefactor() * flow_rate.powf(fluid.index());
    Ok(QuadratureResult {
        value: scale * integral.value,
        error_estimate: scale * integral.error_estimate,
        ..integral
    })
}
