//! Converging-diverging tube profiles.
//!
//! Every profile lives on `x in [-L/2, L/2]` with the throat (`r_min`) at
//! `x = 0` and `r_max` at both ends:
//!
//! | shape              | r(x)              | a                 | b                              |
//! |--------------------|-------------------|-------------------|--------------------------------|
//! | conic              | a + b\|x\|        | r_min             | 2 (r_max - r_min) / L          |
//! | parabolic          | a + b x²          | r_min             | (2/L)² (r_max - r_min)         |
//! | hyperbolic         | sqrt(a + b x²)    | r_min²            | (2/L)² (r_max² - r_min²)       |
//! | hyperbolic cosine  | a cosh(b x)       | r_min             | (2/L) arccosh(r_max / r_min)   |
//! | sinusoidal         | a - b cos(k x)    | (r_max + r_min)/2 | (r_max - r_min)/2, k = 2 pi / L|

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error};
use crate::special::arccosh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TubeShape {
    Conic,
    Parabolic,
    Hyperbolic,
    HyperbolicCosine,
    Sinusoidal,
}

impl TubeShape {
    pub const ALL: [TubeShape; 5] = [
        TubeShape::Conic,
        TubeShape::Parabolic,
        TubeShape::Hyperbolic,
        TubeShape::HyperbolicCosine,
        TubeShape::Sinusoidal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TubeShape::Conic => "conic",
            TubeShape::Parabolic => "parabolic",
            TubeShape::Hyperbolic => "hyperbolic",
            TubeShape::HyperbolicCosine => "hyperbolic-cosine",
            TubeShape::Sinusoidal => "sinusoidal",
        }
    }
}

impl fmt::Display for TubeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TubeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conic" | "cone" => Ok(TubeShape::Conic),
            "parabolic" | "parabola" => Ok(TubeShape::Parabolic),
            "hyperbolic" | "hyperbola" => Ok(TubeShape::Hyperbolic),
            "hyperbolic-cosine" | "cosh" => Ok(TubeShape::HyperbolicCosine),
            "sinusoidal" | "sinusoid" => Ok(TubeShape::Sinusoidal),
            other => Err(Error::InvalidParameter {
                name: "shape",
                reason: format!("unknown shape '{other}'"),
            }),
        }
    }
}

/// One converging-diverging unit: shape, throat and end radii, and length (SI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeSpec {
    shape: TubeShape,
    r_min: f64,
    r_max: f64,
    length: f64,
}

impl TubeSpec {
    pub fn new(shape: TubeShape, r_min: f64, r_max: f64, length: f64) -> Result<Self, Error> {
        check_positive("r_min", r_min)?;
        check_positive("r_max", r_max)?;
        check_positive("length", length)?;
        if r_min > r_max {
            return Err(Error::InvalidParameter {
                name: "r_min",
                reason: format!("must not exceed r_max ({r_min} > {r_max})"),
            });
        }
        Ok(Self {
            shape,
            r_min,
            r_max,
            length,
        })
    }

    /// Constant-radius tube; every shape degenerates to it.
    pub fn straight(shape: TubeShape, radius: f64, length: f64) -> Result<Self, Error> {
        Self::new(shape, radius, radius, length)
    }

    pub fn shape(&self) -> TubeShape {
        self.shape
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length
    }

    pub fn radius_ratio(&self) -> f64 {
        self.r_max / self.r_min
    }

    pub fn is_straight(&self) -> bool {
        self.r_min == self.r_max
    }

    /// Same shape and radius ratio with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, Error> {
        Self::new(
            self.shape,
            self.r_min * factor,
            self.r_max * factor,
            self.length * factor,
        )
    }

    pub fn with_length(&self, length: f64) -> Result<Self, Error> {
        Self::new(self.shape, self.r_min, self.r_max, length)
    }

    pub fn with_radii(&self, r_min: f64, r_max: f64) -> Result<Self, Error> {
        Self::new(self.shape, r_min, r_max, self.length)
    }
}

/// Per-shape profile constants. `k` is only present for the sinusoid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileCoefficients {
    pub a: f64,
    pub b: f64,
    pub k: Option<f64>,
    /// `r_min == r_max`: `b` is zero and the profile is a straight tube.
    pub straight: bool,
}

pub fn coefficients(spec: &TubeSpec) -> ProfileCoefficients {
    let (r_min, r_max, length) = (spec.r_min, spec.r_max, spec.length);
    let straight = spec.is_straight();
    let (a, b, k) = match spec.shape {
        TubeShape::Conic => (r_min, 2.0 * (r_max - r_min) / length, None),
        TubeShape::Parabolic => (r_min, (2.0 / length).powi(2) * (r_max - r_min), None),
        TubeShape::Hyperbolic => (
            r_min * r_min,
            (2.0 / length).powi(2) * (r_max * r_max - r_min * r_min),
            None,
        ),
        TubeShape::HyperbolicCosine => {
            // ratio >= 1 is guaranteed by the TubeSpec invariant
            let angle = arccosh(spec.radius_ratio()).unwrap_or(0.0);
            (r_min, 2.0 / length * angle, None)
        }
        TubeShape::Sinusoidal => (
            0.5 * (r_max + r_min),
            0.5 * (r_max - r_min),
            Some(2.0 * PI / length),
        ),
    };
    ProfileCoefficients {
        a,
        b: if straight { 0.0 } else { b },
        k,
        straight,
    }
}

/// Tube radius at axial position `x`, with `|x| <= L/2`.
pub fn radius_at(spec: &TubeSpec, x: f64) -> Result<f64, Error> {
    if !x.is_finite() || x.abs() > spec.half_length() {
        return Err(Error::Domain(format!(
            "axial position {x} outside [-{h}, {h}]",
            h = spec.half_length()
        )));
    }
    Ok(profile_radius(spec.shape, &coefficients(spec), x))
}

pub(crate) fn profile_radius(shape: TubeShape, c: &ProfileCoefficients, x: f64) -> f64 {
    match shape {
        TubeShape::Conic => c.a + c.b * x.abs(),
        TubeShape::Parabolic => c.a + c.b * x * x,
        TubeShape::Hyperbolic => (c.a + c.b * x * x).sqrt(),
        TubeShape::HyperbolicCosine => c.a * (c.b * x).cosh(),
        TubeShape::Sinusoidal => c.a - c.b * (c.k.unwrap_or(0.0) * x).cos(),
    }
}

/// `samples` evenly spaced `(x, r)` pairs from `-L/2` to `L/2` inclusive.
pub fn sample_profile(spec: &TubeSpec, samples: usize) -> Result<Vec<(f64, f64)>, Error> {
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: format!("need at least 2 samples, got {samples}"),
        });
    }
    let h = spec.half_length();
    let intervals = (samples - 1) as f64;
    let coeffs = coefficients(spec);
    Ok((0..samples)
        .map(|i| {
            // symmetric about 0 and exact at both ends
            let x = h * (2.0 * i as f64 - intervals) / intervals;
            (x, profile_radius(spec.shape, &coeffs, x))
        })
        .collect())
}
