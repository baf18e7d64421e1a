use std::fs;
use std::io::Write;

use capflow::flow::{flow_rate_with, pressure_drop_with};
use capflow::fluid::{apparent_viscosity, shear_stress};
use capflow::geometry::sample_profile;
use capflow::quadrature::{FALLBACK_REL_TOL, MAX_REL_TOL, MIN_REL_TOL, VALIDATION_REL_TOL};
use capflow::{FlowResult, PowerLawFluid, SolveOptions, TubeShape, TubeSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    Command, FluidArgs, Format, Grid, OutputArgs, ProfileArgs, RheologyArgs, SolveArgs,
    SolveControl, Spacing, SweepArgs, SweepParameter, TargetArgs, TubeArgs, ValidateArgs,
};
use crate::output::{csv, json, number, optional, CsvRow};
use crate::{Failure, EXIT_NUMERIC, EXIT_OK};

type Result<T> = std::result::Result<T, Failure>;

pub const SOLVE_HEADER: &str =
    "shape,n,C,r_min,r_max,length,periods,Q,P,K,method,branch,P_numeric,rel_err";
pub const VALIDATE_HEADER: &str =
    "shape,n,C,r_min,r_max,length,Q,P_analytic,P_numeric,rel_err,method,branch";
pub const PROFILE_HEADER: &str = "x,r";
pub const RHEOLOGY_HEADER: &str = "strain_rate,viscosity,stress";

pub(crate) fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve(args) => solve(args, out, err),
        Command::Sweep(args) => sweep(args, out, err),
        Command::Validate(args) => validate(args, out, err),
        Command::Profile(args) => profile(args, out),
        Command::Rheology(args) => rheology(args, out),
    }
}

fn require(value: Option<f64>, flag: &str) -> Result<f64> {
    value.ok_or_else(|| Failure::Usage(format!("{flag} is required")))
}

fn check_rel_tol(rel_tol: Option<f64>) -> Result<()> {
    match rel_tol {
        Some(t) if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&t) => Err(Failure::Usage(format!(
            "invalid --rel-tol: must lie in [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}], got {t}"
        ))),
        _ => Ok(()),
    }
}

fn solve_options(control: &SolveControl) -> SolveOptions {
    SolveOptions {
        fallback_rel_tol: control.rel_tol.unwrap_or(FALLBACK_REL_TOL),
        validate: control.validate,
        validation_rel_tol: control.rel_tol.unwrap_or(VALIDATION_REL_TOL),
    }
}

fn emit<C: Serialize, R: Serialize + CsvRow>(
    output: &OutputArgs,
    default: Format,
    header: &str,
    config: &C,
    rows: &[R],
    out: &mut dyn Write,
) -> Result<()> {
    let text = match output.format.unwrap_or(default) {
        Format::Csv => csv(header, rows),
        Format::Json => json(config, rows).map_err(|e| Failure::Numeric(e.to_string()))?,
    };
    match &output.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write --output {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

#[derive(Debug, Clone, Copy)]
enum Target {
    FlowRate(f64),
    Pressure(f64),
}

fn target(args: &TargetArgs) -> Result<Target> {
    match (args.flow_rate, args.pressure) {
        (Some(q), None) => Ok(Target::FlowRate(q)),
        (None, Some(p)) => Ok(Target::Pressure(p)),
        (Some(_), Some(_)) => Err(Failure::Usage(
            "--flow-rate and --pressure are mutually exclusive".into(),
        )),
        (None, None) => Err(Failure::Usage(
            "one of --flow-rate or --pressure is required".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
struct SolveRow {
    shape: &'static str,
    n: f64,
    #[serde(rename = "C")]
    consistency: f64,
    r_min: f64,
    r_max: f64,
    length: f64,
    periods: u32,
    #[serde(rename = "Q")]
    flow_rate: f64,
    #[serde(rename = "P")]
    pressure_drop: f64,
    /// `P = K Q^n` for the whole series of units
    #[serde(rename = "K")]
    conductance: f64,
    method: &'static str,
    branch: Option<&'static str>,
    #[serde(rename = "P_numeric")]
    numeric_pressure_drop: Option<f64>,
    rel_err: Option<f64>,
    notes: Vec<String>,
}

impl CsvRow for SolveRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.shape.to_owned(),
            number(self.n),
            number(self.consistency),
            number(self.r_min),
            number(self.r_max),
            number(self.length),
            self.periods.to_string(),
            number(self.flow_rate),
            number(self.pressure_drop),
            number(self.conductance),
            self.method.to_owned(),
            self.branch.unwrap_or_default().to_owned(),
            optional(self.numeric_pressure_drop),
            optional(self.rel_err),
        ]
    }
}

fn solve_point(
    fluid: &PowerLawFluid,
    spec: &TubeSpec,
    periods: u32,
    target: Target,
    options: &SolveOptions,
) -> Result<SolveRow> {
    let units = f64::from(periods);
    // units in series share Q and add their pressure drops
    let result: FlowResult = match target {
        Target::FlowRate(q) => pressure_drop_with(fluid, spec, q, options)?,
        Target::Pressure(p) => {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Failure::Usage(format!(
                    "invalid --pressure: must be non-negative and finite, got {p}"
                )));
            }
            flow_rate_with(fluid, spec, p / units, options)?
        }
    };
    let mut notes = Vec::new();
    if result.diagnostics.straight_tube {
        notes.push("degenerate: straight tube".to_owned());
    }
    if let Some(reason) = &result.diagnostics.fallback_reason {
        notes.push(format!("quadrature fallback: {reason}"));
    }
    notes.extend(result.diagnostics.warnings.iter().cloned());
    Ok(SolveRow {
        shape: spec.shape().name(),
        n: fluid.index(),
        consistency: fluid.consistency(),
        r_min: spec.r_min(),
        r_max: spec.r_max(),
        length: spec.length(),
        periods,
        flow_rate: result.flow_rate,
        pressure_drop: match target {
            Target::FlowRate(_) => units * result.pressure_drop,
            Target::Pressure(p) => p,
        },
        conductance: units * result.conductance,
        method: result.method.name(),
        branch: result.branch_used.map(|b| b.name()),
        numeric_pressure_drop: result.validation.map(|v| units * v.numeric_pressure_drop),
        rel_err: result.validation.map(|v| v.relative_error),
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
struct SolveConfig {
    command: &'static str,
    shape: &'static str,
    n: Option<f64>,
    consistency: f64,
    r_min: Option<f64>,
    r_max: Option<f64>,
    length: Option<f64>,
    periods: u32,
    flow_rate: Option<f64>,
    pressure: Option<f64>,
    rel_tol: Option<f64>,
    validate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Serialize)]
struct SweepConfig {
    vary: &'static str,
    start: f64,
    stop: f64,
    count: usize,
    spacing: &'static str,
}

fn solve_config(
    command: &'static str,
    tube: &TubeArgs,
    fluid: &FluidArgs,
    target: &TargetArgs,
    control: &SolveControl,
) -> SolveConfig {
    SolveConfig {
        command,
        shape: tube.shape.name(),
        n: fluid.n,
        consistency: fluid.consistency,
        r_min: tube.rmin,
        r_max: tube.rmax,
        length: tube.length,
        periods: control.periods,
        flow_rate: target.flow_rate,
        pressure: target.pressure,
        rel_tol: control.rel_tol,
        validate: control.validate,
        sweep: None,
    }
}

fn warn_once(fluid: &PowerLawFluid, err: &mut dyn Write) {
    if let Some(w) = fluid.accuracy_warning() {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    check_rel_tol(args.control.rel_tol)?;
    let target = target(&args.target)?;
    let fluid = PowerLawFluid::new(args.fluid.consistency, require(args.fluid.n, "--n")?)?;
    let spec = TubeSpec::new(
        args.tube.shape,
        require(args.tube.rmin, "--rmin")?,
        require(args.tube.rmax, "--rmax")?,
        require(args.tube.length, "--length")?,
    )?;
    warn_once(&fluid, err);
    let row = solve_point(
        &fluid,
        &spec,
        args.control.periods,
        target,
        &solve_options(&args.control),
    )?;
    let config = solve_config(
        "solve",
        &args.tube,
        &args.fluid,
        &args.target,
        &args.control,
    );
    emit(
        &args.output,
        Format::Json,
        SOLVE_HEADER,
        &config,
        &[row],
        out,
    )?;
    Ok(EXIT_OK)
}

/// `count` points from `start` to `stop`, both ends exact.
fn grid_points(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Failure::Usage(format!(
            "invalid --count: need at least 2, got {count}"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start < stop) {
        return Err(Failure::Usage(format!(
            "invalid --start/--stop: need finite start < stop, got {start} and {stop}"
        )));
    }
    if spacing == Spacing::Log && start <= 0.0 {
        return Err(Failure::Usage(format!(
            "invalid --start: log spacing needs a positive start, got {start}"
        )));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                return start;
            }
            if i == count - 1 {
                return stop;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => start + (stop - start) * t,
                // base 10 keeps decade points exact
                Spacing::Log => 10f64.powf(start.log10() + (stop.log10() - start.log10()) * t),
            }
        })
        .collect())
}

fn parameter_name(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::FlowRate => "flow-rate",
        SweepParameter::Pressure => "pressure",
        SweepParameter::N => "n",
        SweepParameter::Consistency => "consistency",
        SweepParameter::Rmin => "rmin",
        SweepParameter::Rmax => "rmax",
        SweepParameter::Length => "length",
    }
}

fn sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    check_rel_tol(args.control.rel_tol)?;
    let points = grid_points(args.start, args.stop, args.count, args.spacing)?;
    let vary = args.vary;
    let fixed_target = match vary {
        SweepParameter::FlowRate | SweepParameter::Pressure => None,
        _ => Some(target(&args.target)?),
    };
    let given = |value: Option<f64>, flag: &str, p: SweepParameter| -> Result<f64> {
        if vary == p {
            Ok(f64::NAN)
        } else {
            require(value, flag)
        }
    };
    let n = given(args.fluid.n, "--n", SweepParameter::N)?;
    let r_min = given(args.tube.rmin, "--rmin", SweepParameter::Rmin)?;
    let r_max = given(args.tube.rmax, "--rmax", SweepParameter::Rmax)?;
    let length = given(args.tube.length, "--length", SweepParameter::Length)?;
    let shape: TubeShape = args.tube.shape;
    let options = solve_options(&args.control);
    let periods = args.control.periods;

    if vary != SweepParameter::N {
        warn_once(&PowerLawFluid::new(args.fluid.consistency, n)?, err);
    }

    let rows: Vec<Result<SolveRow>> = points
        .par_iter()
        .map(|&v| {
            let pick = |p: SweepParameter, base: f64| if vary == p { v } else { base };
            let fluid = PowerLawFluid::new(
                pick(SweepParameter::Consistency, args.fluid.consistency),
                pick(SweepParameter::N, n),
            )?;
            let spec = TubeSpec::new(
                shape,
                pick(SweepParameter::Rmin, r_min),
                pick(SweepParameter::Rmax, r_max),
                pick(SweepParameter::Length, length),
            )?;
            let target = match vary {
                SweepParameter::FlowRate => Target::FlowRate(v),
                SweepParameter::Pressure => Target::Pressure(v),
                _ => fixed_target.expect("fixed target checked above"),
            };
            solve_point(&fluid, &spec, periods, target, &options)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let mut config = solve_config(
        "sweep",
        &args.tube,
        &args.fluid,
        &args.target,
        &args.control,
    );
    config.sweep = Some(SweepConfig {
        vary: parameter_name(vary),
        start: args.start,
        stop: args.stop,
        count: args.count,
        spacing: match args.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        },
    });
    emit(&args.output, Format::Csv, SOLVE_HEADER, &config, &rows, out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub shape: TubeShape,
    pub n: f64,
    pub ratio: f64,
    pub length: f64,
    pub flow_rate: f64,
}

/// Points of a named validation grid, with `C = 1` and `r_min = 1`.
pub fn validation_grid(grid: Grid) -> Vec<GridPoint> {
    let (indices, ratios, lengths, flows): (&[f64], &[f64], &[f64], &[f64]) = match grid {
        Grid::Default => (
            &[0.4, 0.6, 0.8, 1.0, 1.2, 1.6],
            &[1.1, 2.0, 4.0, 10.0],
            &[1.0, 10.0],
            &[1e-3, 1.0],
        ),
        Grid::Quick => (&[0.5, 1.0], &[2.0], &[1.0], &[1.0]),
    };
    let mut points = Vec::new();
    for shape in TubeShape::ALL {
        for &n in indices {
            for &ratio in ratios {
                for &length in lengths {
                    for &flow_rate in flows {
                        points.push(GridPoint {
                            shape,
                            n,
                            ratio,
                            length,
                            flow_rate,
                        });
                    }
                }
            }
        }
    }
    points
}

#[derive(Debug, Clone, Serialize)]
struct ValidationRow {
    shape: &'static str,
    n: f64,
    #[serde(rename = "C")]
    consistency: f64,
    r_min: f64,
    r_max: f64,
    length: f64,
    #[serde(rename = "Q")]
    flow_rate: f64,
    #[serde(rename = "P_analytic")]
    analytic: f64,
    #[serde(rename = "P_numeric")]
    numeric: f64,
    rel_err: f64,
    method: &'static str,
    branch: Option<&'static str>,
}

impl CsvRow for ValidationRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.shape.to_owned(),
            number(self.n),
            number(self.consistency),
            number(self.r_min),
            number(self.r_max),
            number(self.length),
            number(self.flow_rate),
            number(self.analytic),
            number(self.numeric),
            number(self.rel_err),
            self.method.to_owned(),
            self.branch.unwrap_or_default().to_owned(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
struct ValidateConfig {
    command: &'static str,
    grid: &'static str,
    rel_tol: f64,
    threshold: f64,
}

fn validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    check_rel_tol(args.rel_tol)?;
    if !(args.threshold > 0.0 && args.threshold.is_finite()) {
        return Err(Failure::Usage(format!(
            "invalid --threshold: must be positive, got {}",
            args.threshold
        )));
    }
    let rel_tol = args.rel_tol.unwrap_or(VALIDATION_REL_TOL);
    let options = SolveOptions {
        validate: true,
        validation_rel_tol: rel_tol,
        ..SolveOptions::default()
    };
    let rows: Vec<Result<ValidationRow>> = validation_grid(args.grid)
        .par_iter()
        .map(|pt| {
            let fluid = PowerLawFluid::new(1.0, pt.n)?;
            let spec = TubeSpec::new(pt.shape, 1.0, pt.ratio, pt.length)?;
            let result = pressure_drop_with(&fluid, &spec, pt.flow_rate, &options)?;
            let check = result.validation.expect("validation was requested");
            Ok(ValidationRow {
                shape: pt.shape.name(),
                n: pt.n,
                consistency: 1.0,
                r_min: 1.0,
                r_max: pt.ratio,
                length: pt.length,
                flow_rate: pt.flow_rate,
                analytic: result.pressure_drop,
                numeric: check.numeric_pressure_drop,
                rel_err: check.relative_error,
                method: result.method.name(),
                branch: result.branch_used.map(|b| b.name()),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let config = ValidateConfig {
        command: "validate",
        grid: match args.grid {
            Grid::Default => "default",
            Grid::Quick => "quick",
        },
        rel_tol,
        threshold: args.threshold,
    };
    emit(
        &args.output,
        Format::Csv,
        VALIDATE_HEADER,
        &config,
        &rows,
        out,
    )?;
    let failing = rows
        .iter()
        .filter(|r| !(r.rel_err <= args.threshold))
        .count();
    if failing > 0 {
        let _ = writeln!(
            err,
            "error: {failing} of {} rows exceed rel_err {}",
            rows.len(),
            number(args.threshold)
        );
        return Ok(EXIT_NUMERIC);
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
struct ProfileRow {
    x: f64,
    r: f64,
}

impl CsvRow for ProfileRow {
    fn fields(&self) -> Vec<String> {
        vec![number(self.x), number(self.r)]
    }
}

#[derive(Debug, Clone, Serialize)]
struct ProfileConfig {
    command: &'static str,
    shape: &'static str,
    r_min: f64,
    r_max: f64,
    length: f64,
    samples: usize,
}

fn profile(args: &ProfileArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = TubeSpec::new(
        args.tube.shape,
        require(args.tube.rmin, "--rmin")?,
        require(args.tube.rmax, "--rmax")?,
        require(args.tube.length, "--length")?,
    )?;
    let rows: Vec<ProfileRow> = sample_profile(&spec, args.samples)?
        .into_iter()
        .map(|(x, r)| ProfileRow { x, r })
        .collect();
    let config = ProfileConfig {
        command: "profile",
        shape: spec.shape().name(),
        r_min: spec.r_min(),
        r_max: spec.r_max(),
        length: spec.length(),
        samples: args.samples,
    };
    emit(
        &args.output,
        Format::Csv,
        PROFILE_HEADER,
        &config,
        &rows,
        out,
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
struct RheologyRow {
    strain_rate: f64,
    viscosity: f64,
    stress: f64,
}

impl CsvRow for RheologyRow {
    fn fields(&self) -> Vec<String> {
        vec![
            number(self.strain_rate),
            number(self.viscosity),
            number(self.stress),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
struct RheologyConfig {
    command: &'static str,
    n: f64,
    consistency: f64,
    start: f64,
    stop: f64,
    count: usize,
}

fn rheology(args: &RheologyArgs, out: &mut dyn Write) -> Result<i32> {
    let fluid = PowerLawFluid::new(args.fluid.consistency, require(args.fluid.n, "--n")?)?;
    let rows = grid_points(args.start, args.stop, args.count, Spacing::Log)?
        .into_iter()
        .map(|g| {
            Ok(RheologyRow {
                strain_rate: g,
                viscosity: apparent_viscosity(&fluid, g)?,
                stress: shear_stress(&fluid, g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = RheologyConfig {
        command: "rheology",
        n: fluid.index(),
        consistency: fluid.consistency(),
        start: args.start,
        stop: args.stop,
        count: args.count,
    };
    emit(
        &args.output,
        Format::Csv,
        RHEOLOGY_HEADER,
        &config,
        &rows,
        out,
    )?;
    Ok(EXIT_OK)
}
