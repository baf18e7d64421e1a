//! Closed-form pressure drop / flow rate relations for the five profiles.
//!
//! Every relation factors as `P = K Q^n` with
//! `K = 2 C (3n + 1)^n / (pi^n n^n) * J` and `J = ∫ dx / r^(3n + 1)`
//! evaluated in closed form:
//!
//! | shape             | J                                                                         |
//! |-------------------|---------------------------------------------------------------------------|
//! | conic             | L (r_min^-3n - r_max^-3n) / (3n (r_max - r_min))                          |
//! | parabolic         | L r_min^-(3n+1) 2F1(1/2, 3n+1; 3/2; 1 - ρ)                                |
//! | hyperbolic        | L r_min^-(3n+1) 2F1(1/2, (3n+1)/2; 3/2; 1 - ρ²)                           |
//! | hyperbolic cosine | L Im 2F1(1/2, -3n/2; (2-3n)/2; ρ²) / (3n r_min r_max^3n arccosh ρ)        |
//! | sinusoidal        | L Im F1(-3n; 1/2, 1/2; 1-3n; 1, ρ) / (3 pi n r_max^3n sqrt(r_max r_min)) |
//!
//! with `ρ = r_max / r_min`. The two `Im` forms are evaluated on both sides
//! of the cut and the side giving a positive integral is kept.
//!
//! When a kernel refuses (degenerate parameters, e.g. `3n` integral for the
//! sinusoid) the integral is computed by quadrature instead and the result
//! is marked [`Method::QuadratureFallback`].

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, Error};
use crate::fluid::PowerLawFluid;
use crate::geometry::{TubeShape, TubeSpec};
use crate::quadrature::{
    integrate_inverse_radius_power, pressure_drop_numeric, QuadratureResult, FALLBACK_REL_TOL,
    VALIDATION_REL_TOL,
};
use crate::special::{
    appell_f1_on_branch, arccosh, gauss_2f1_continued_report, gauss_2f1_report, Branch,
    EvaluationReport, SpecialFunctionError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    QuadratureFallback,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::QuadratureFallback => "quadrature_fallback",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Quadrature tolerance when the closed form is unavailable.
    pub fallback_rel_tol: f64,
    /// Co-evaluate the quadrature oracle and attach the relative error.
    pub validate: bool,
    pub validation_rel_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            fallback_rel_tol: FALLBACK_REL_TOL,
            validate: false,
            validation_rel_tol: VALIDATION_REL_TOL,
        }
    }
}

impl SolveOptions {
    pub fn validated() -> Self {
        Self {
            validate: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Special-function evaluation behind the closed form, if one was needed.
    pub report: Option<EvaluationReport>,
    /// Quadrature run behind a fallback result.
    pub quadrature: Option<QuadratureResult>,
    pub fallback_reason: Option<String>,
    /// `r_min == r_max`: solved with the constant-radius formula.
    pub straight_tube: bool,
    pub warnings: Vec<String>,
}

/// The closed-form value of `∫ dx / r^(3n+1)` for one tube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticIntegral {
    pub value: f64,
    pub branch_used: Option<Branch>,
    pub report: Option<EvaluationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conductance {
    /// `K` in `P = K Q^n`, units Pa·(m³/s)^-n.
    pub value: f64,
    pub method: Method,
    pub branch_used: Option<Branch>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub numeric_pressure_drop: f64,
    /// `|P - P_numeric| / P_numeric`, zero when both vanish.
    pub relative_error: f64,
    pub quadrature: QuadratureResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    pub pressure_drop: f64,
    pub flow_rate: f64,
    pub conductance: f64,
    pub method: Method,
    pub branch_used: Option<Branch>,
    pub diagnostics: Diagnostics,
    pub validation: Option<Validation>,
}

/// `∫_{-L/2}^{L/2} dx / r(x)^(3n+1)` from the shape's closed form.
///
/// Never falls back: kernel failures are returned as errors.
pub fn analytic_integral(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
) -> Result<AnalyticIntegral, SpecialFunctionError> {
    let n = fluid.index();
    let exponent = fluid.radius_exponent();
    let (r_min, r_max, length) = (spec.r_min(), spec.r_max(), spec.length());
    let ratio = spec.radius_ratio();
    let plain = |value: f64, report: Option<EvaluationReport>| AnalyticIntegral {
        value,
        branch_used: None,
        report,
    };

    if spec.is_straight() {
        return Ok(plain(length / r_min.powf(exponent), None));
    }
    let integral = match spec.shape() {
        TubeShape::Conic => {
            // r_min^-3n - r_max^-3n = -r_min^-3n expm1(-3n ln ρ)
            let ln_ratio = ((r_max - r_min) / r_min).ln_1p();
            let bracket = -r_min.powf(-3.0 * n) * (-3.0 * n * ln_ratio).exp_m1();
            plain(length * bracket / (3.0 * n * (r_max - r_min)), None)
        }
        TubeShape::Parabolic => {
            let report = gauss_2f1_report(0.5, exponent, 1.5, 1.0 - ratio)?;
            plain(
                length / r_min.powf(exponent) * report.value.re,
                Some(report),
            )
        }
        TubeShape::Hyperbolic => {
            let report = gauss_2f1_report(0.5, 0.5 * exponent, 1.5, 1.0 - ratio * ratio)?;
            plain(
                length / r_min.powf(exponent) * report.value.re,
                Some(report),
            )
        }
        TubeShape::HyperbolicCosine => {
            let angle = arccosh(ratio)?;
            let scale = length / (3.0 * n * r_min * r_max.powf(3.0 * n) * angle);
            positive_branch(scale, |branch| {
                gauss_2f1_continued_report(0.5, -1.5 * n, 1.0 - 1.5 * n, ratio * ratio, branch)
            })?
        }
        TubeShape::Sinusoidal => {
            let scale = length / (3.0 * PI * n * r_max.powf(3.0 * n) * (r_max * r_min).sqrt());
            positive_branch(scale, |branch| {
                appell_f1_on_branch(-3.0 * n, 0.5, 0.5, 1.0 - 3.0 * n, 1.0, ratio, branch)
            })?
        }
    };
    if !(integral.value > 0.0) || !integral.value.is_finite() {
        return Err(SpecialFunctionError::NonFinite(format!(
            "closed form gave a non-positive integral {}",
            integral.value
        )));
    }
    Ok(integral)
}

/// Evaluates an `Im(...)` closed form on both sides of the cut and keeps the
/// side whose integral is positive.
fn positive_branch<F>(scale: f64, eval: F) -> Result<AnalyticIntegral, SpecialFunctionError>
where
    F: Fn(Branch) -> Result<EvaluationReport, SpecialFunctionError>,
{
    let candidates = [Branch::Above, Branch::Below].map(|b| eval(b).map(|r| (b, r)));
    let mut best: Option<(Branch, EvaluationReport)> = None;
    for candidate in candidates {
        let (branch, report) = candidate?;
        if scale * report.value.im > 0.0 {
            best = Some((branch, report));
        }
    }
    match best {
        Some((branch, report)) => Ok(AnalyticIntegral {
            value: scale * report.value.im,
            branch_used: Some(branch),
            report: Some(report),
        }),
        None => Err(SpecialFunctionError::NonFinite(
            "imaginary part vanishes on both sides of the cut".into(),
        )),
    }
}

/// Conductance `K` with the automatic quadrature fallback.
pub fn conductance(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    options: &SolveOptions,
) -> Result<Conductance, Error> {
    let prefactor = fluid.master_prefactor();
    let mut diagnostics = Diagnostics {
        straight_tube: spec.is_straight(),
        warnings: fluid.accuracy_warning().into_iter().collect(),
        ..Diagnostics::default()
    };
    match analytic_integral(fluid, spec) {
        Ok(integral) => {
            diagnostics.report = integral.report;
            Ok(Conductance {
                value: prefactor * integral.value,
                method: Method::Analytic,
                branch_used: integral.branch_used,
                diagnostics,
            })
        }
        Err(analytic) => {
            let quad = integrate_inverse_radius_power(
                spec,
                fluid.radius_exponent(),
                options.fallback_rel_tol,
            )
            .map_err(|e| match e {
                Error::Quadrature(fallback) => Error::Evaluation {
                    analytic: analytic.to_string(),
                    fallback,
                },
                other => other,
            })?;
            diagnostics.quadrature = Some(quad);
            diagnostics.fallback_reason = Some(analytic.to_string());
            Ok(Conductance {
                value: prefactor * quad.value,
                method: Method::QuadratureFallback,
                branch_used: None,
                diagnostics,
            })
        }
    }
}

/// `K` such that `P = K Q^n`.
pub fn conductance_coefficient(fluid: &PowerLawFluid, spec: &TubeSpec) -> Result<f64, Error> {
    conductance(fluid, spec, &SolveOptions::default()).map(|k| k.value)
}

pub fn pressure_drop(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    flow_rate: f64,
) -> Result<FlowResult, Error> {
    pressure_drop_with(fluid, spec, flow_rate, &SolveOptions::default())
}

pub fn pressure_drop_with(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    flow_rate: f64,
    options: &SolveOptions,
) -> Result<FlowResult, Error> {
    check_non_negative("flow_rate", flow_rate)?;
    let k = conductance(fluid, spec, options)?;
    let pressure = k.value * flow_rate.powf(fluid.index());
    finish(fluid, spec, k, pressure, flow_rate, options)
}

pub fn flow_rate(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    pressure_drop: f64,
) -> Result<FlowResult, Error> {
    flow_rate_with(fluid, spec, pressure_drop, &SolveOptions::default())
}

/// Inverts `P = K Q^n` exactly: `Q = (P / K)^(1/n)`.
pub fn flow_rate_with(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    pressure_drop: f64,
    options: &SolveOptions,
) -> Result<FlowResult, Error> {
    check_non_negative("pressure_drop", pressure_drop)?;
    let k = conductance(fluid, spec, options)?;
    let flow = (pressure_drop / k.value).powf(1.0 / fluid.index());
    finish(fluid, spec, k, pressure_drop, flow, options)
}

fn finish(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    k: Conductance,
    pressure: f64,
    flow: f64,
    options: &SolveOptions,
) -> Result<FlowResult, Error> {
    let validation = if options.validate {
        let quadrature = pressure_drop_numeric(fluid, spec, flow, options.validation_rel_tol)?;
        let numeric = quadrature.value;
        let relative_error = if numeric == 0.0 && pressure == 0.0 {
            0.0
        } else {
            (pressure - numeric).abs() / numeric
        };
        Some(Validation {
            numeric_pressure_drop: numeric,
            relative_error,
            quadrature,
        })
    } else {
        None
    };
    Ok(FlowResult {
        pressure_drop: pressure,
        flow_rate: flow,
        conductance: k.value,
        method: k.method,
        branch_used: k.branch_used,
        diagnostics: k.diagnostics,
        validation,
    })
}
