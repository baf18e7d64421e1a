//! Pressure drop and flow rate of power-law fluids through axisymmetric
//! converging-diverging capillaries.
//!
//! The five profiles in [`geometry::TubeShape`] each have a closed-form
//! relation `P = K Q^n` ([`flow`]); every closed form can be checked against
//! adaptive quadrature of `∫ dx / r^(3n + 1)` ([`quadrature`]).
//!
//! ```
//! use capflow::{flow, PowerLawFluid, TubeShape, TubeSpec};
//!
//! let fluid = PowerLawFluid::new(1.0, 1.0).unwrap();
//! let tube = TubeSpec::new(TubeShape::Conic, 0.5, 1.0, 1.0).unwrap();
//! let result = flow::pressure_drop(&fluid, &tube, 1.0).unwrap();
//! assert!((result.pressure_drop - 56.0 / (1.5 * std::f64::consts::PI)).abs() < 1e-12);
//! ```

// `!(x > 0.0)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod flow;
pub mod fluid;
pub mod geometry;
pub mod quadrature;
pub mod special;

pub use error::Error;
pub use flow::{FlowResult, Method, SolveOptions};
pub use fluid::PowerLawFluid;
pub use geometry::{TubeShape, TubeSpec};
pub use special::{Branch, ComplexValue};
