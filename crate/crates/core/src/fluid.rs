//! Power-law (Ostwald-de Waele) rheology and the constant-radius tube solution.
//!
//! ```text
//! mu = C * gamma_dot^(n - 1)
//! P  = 2 C Q^n (3n + 1)^n L / (pi^n n^n r^(3n + 1))
//! ```
//!
//! The second relation is the baseline every corrugated profile reduces to
//! when `r_min == r_max`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error};

/// Indices inside this range are covered by the accuracy targets of the
/// special-function kernels. Values outside still compute.
pub const SUPPORTED_INDEX_RANGE: (f64, f64) = (0.2, 2.0);

/// A power-law fluid: consistency factor `C` (Pa·s^n) and flow behaviour index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFluid {
    consistency: f64,
    index: f64,
}

impl PowerLawFluid {
    pub fn new(consistency: f64, index: f64) -> Result<Self, Error> {
        check_positive("consistency", consistency)?;
        check_positive("index", index)?;
        Ok(Self { consistency, index })
    }

    /// Newtonian fluid with dynamic viscosity `mu`.
    pub fn newtonian(viscosity: f64) -> Result<Self, Error> {
        Self::new(viscosity, 1.0)
    }

    pub fn consistency(&self) -> f64 {
        self.consistency
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn is_shear_thinning(&self) -> bool {
        self.index < 1.0
    }

    /// Returns a message when `n` lies outside [`SUPPORTED_INDEX_RANGE`].
    pub fn accuracy_warning(&self) -> Option<String> {
        let (lo, hi) = SUPPORTED_INDEX_RANGE;
        if self.index < lo || self.index > hi {
            Some(format!(
                "flow behaviour index n = {} is outside the validated range [{lo}, {hi}]",
                self.index
            ))
        } else {
            None
        }
    }

    /// `2 C (3n + 1)^n / (pi^n n^n)`, the fluid-dependent factor multiplying
    /// `Q^n * integral(dx / r^(3n + 1))`.
    pub fn master_prefactor(&self) -> f64 {
        let n = self.index;
        2.0 * self.consistency * ((3.0 * n + 1.0) / (PI * n)).powf(n)
    }

    /// Exponent of the radius in the pressure-drop integrand, `3n + 1`.
    pub fn radius_exponent(&self) -> f64 {
        3.0 * self.index + 1.0
    }
}

/// Apparent viscosity `C * gamma_dot^(n - 1)` in Pa·s.
///
/// The model has no zero-shear plateau, so `strain_rate` must be strictly positive.
pub fn apparent_viscosity(fluid: &PowerLawFluid, strain_rate: f64) -> Result<f64, Error> {
    if !(strain_rate > 0.0) || !strain_rate.is_finite() {
        return Err(Error::Domain(format!(
            "strain rate must be positive and finite, got {strain_rate}"
        )));
    }
    Ok(fluid.consistency * strain_rate.powf(fluid.index - 1.0))
}

/// Shear stress `C * gamma_dot^n` in Pa.
pub fn shear_stress(fluid: &PowerLawFluid, strain_rate: f64) -> Result<f64, Error> {
    Ok(apparent_viscosity(fluid, strain_rate)? * strain_rate)
}

/// Pressure drop across a straight tube of constant radius.
pub fn straight_tube_pressure_drop(
    fluid: &PowerLawFluid,
    radius: f64,
    length: f64,
    flow_rate: f64,
) -> Result<f64, Error> {
    let conductance = straight_tube_conductance(fluid, radius, length)?;
    check_non_negative("flow_rate", flow_rate)?;
    Ok(conductance * flow_rate.powf(fluid.index))
}

/// Volumetric flow rate through a straight tube under a given pressure drop.
pub fn straight_tube_flow_rate(
    fluid: &PowerLawFluid,
    radius: f64,
    length: f64,
    pressure_drop: f64,
) -> Result<f64, Error> {
    let conductance = straight_tube_conductance(fluid, radius, length)?;
    check_non_negative("pressure_drop", pressure_drop)?;
    Ok((pressure_drop / conductance).powf(1.0 / fluid.index))
}

/// `K` in `P = K * Q^n` for a straight tube.
pub fn straight_tube_conductance(
    fluid: &PowerLawFluid,
    radius: f64,
    length: f64,
) -> Result<f64, Error> {
    check_positive("radius", radius)?;
    check_positive("length", length)?;
    Ok(fluid.master_prefactor() * length / radius.powf(fluid.radius_exponent()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn viscosity_examples() {
        let newtonian = PowerLawFluid::new(1.0, 1.0).unwrap();
        assert_eq!(apparent_viscosity(&newtonian, 37.2).unwrap(), 1.0);
        let thinning = PowerLawFluid::new(2.0, 0.5).unwrap();
        assert!(rel(apparent_viscosity(&thinning, 4.0).unwrap(), 1.0) < 1e-15);
        let fluid = PowerLawFluid::new(1.5, 0.7).unwrap();
        let mu = apparent_viscosity(&fluid, 10.0).unwrap();
        assert!(rel(mu, 0.751_780_850_440_908_4) < 1e-14);
    }

    #[test]
    fn viscosity_rejects_zero_shear() {
        let fluid = PowerLawFluid::new(1.0, 0.5).unwrap();
        assert!(matches!(
            apparent_viscosity(&fluid, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(apparent_viscosity(&fluid, -1.0).is_err());
        assert!(apparent_viscosity(&fluid, f64::NAN).is_err());
    }

    #[test]
    fn fluid_invariants() {
        assert!(PowerLawFluid::new(0.0, 1.0).is_err());
        assert!(PowerLawFluid::new(1.0, -0.5).is_err());
        assert!(PowerLawFluid::new(f64::INFINITY, 1.0).is_err());
        assert!(PowerLawFluid::new(1.0, 0.5).unwrap().is_shear_thinning());
        assert!(PowerLawFluid::new(1.0, 0.1)
            .unwrap()
            .accuracy_warning()
            .is_some());
        assert!(PowerLawFluid::new(1.0, 2.0)
            .unwrap()
            .accuracy_warning()
            .is_none());
    }

    #[test]
    fn hagen_poiseuille() {
        let fluid = PowerLawFluid::newtonian(1.0).unwrap();
        let p = straight_tube_pressure_drop(&fluid, 1.0, 1.0, PI / 8.0).unwrap();
        assert!(rel(p, 1.0) < 1e-15);
        let q = straight_tube_flow_rate(&fluid, 1.0, 1.0, 1.0).unwrap();
        assert!(rel(q, PI / 8.0) < 1e-15);
    }

    #[test]
    fn shear_thinning_straight_tube() {
        // 2 * 2.5^0.5 * 2 / (pi^0.5 * 0.5^0.5)
        let expected = 4.0 * 2.5f64.sqrt() / (PI * 0.5).sqrt();
        let fluid = PowerLawFluid::new(1.0, 0.5).unwrap();
        let p = straight_tube_pressure_drop(&fluid, 1.0, 2.0, 1.0).unwrap();
        assert!(rel(p, expected) < 1e-14);
        assert!(rel(p, 5.046_265_044_040_32) < 1e-13);
        let q = straight_tube_flow_rate(&fluid, 1.0, 2.0, p).unwrap();
        assert!(rel(q, 1.0) < 1e-14);
    }

    #[test]
    fn zero_flow_and_zero_pressure() {
        let fluid = PowerLawFluid::new(3.0, 0.4).unwrap();
        assert_eq!(
            straight_tube_pressure_drop(&fluid, 0.1, 2.0, 0.0).unwrap(),
            0.0
        );
        assert_eq!(straight_tube_flow_rate(&fluid, 0.1, 2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn straight_tube_preconditions() {
        let fluid = PowerLawFluid::new(1.0, 1.0).unwrap();
        assert!(straight_tube_pressure_drop(&fluid, 0.0, 1.0, 1.0).is_err());
        assert!(straight_tube_pressure_drop(&fluid, 1.0, -1.0, 1.0).is_err());
        assert!(straight_tube_pressure_drop(&fluid, 1.0, 1.0, -1.0).is_err());
        assert!(straight_tube_flow_rate(&fluid, 1.0, 1.0, -1.0).is_err());
    }
}
