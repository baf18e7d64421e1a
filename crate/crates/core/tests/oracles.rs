//! Checks against values computed independently of the library's kernels.

use std::f64::consts::PI;

use capflow::flow::{analytic_integral, conductance_coefficient, pressure_drop};
use capflow::fluid::{straight_tube_pressure_drop, PowerLawFluid};
use capflow::geometry::{TubeShape, TubeSpec};
use capflow::quadrature::{integrate_inverse_radius_power, integrate_inverse_radius_power_full};
use capflow::special::{appell_f1, gamma, gauss_2f1, gauss_2f1_continued, Branch, ComplexValue};
use capflow::Method;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Plain double sum of the Appell series, 200 terms per index.
fn appell_naive(a: f64, b1: f64, b2: f64, c: f64, x: f64, y: f64) -> f64 {
    let mut total = 0.0;
    // (a)_m (b1)_m / ((c)_m m!) x^m
    let mut head = 1.0;
    for m in 0..200 {
        let mf = m as f64;
        let mut cell = head;
        for n in 0..200 {
            let nf = n as f64;
            total += cell;
            cell *= (a + mf + nf) * (b2 + nf) / ((c + mf + nf) * (nf + 1.0)) * y;
        }
        head *= (a + mf) * (b1 + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    total
}

#[test]
fn gauss_identity_table() {
    assert_eq!(gauss_2f1(0.3, 1.7, 2.2, 0.0).unwrap(), 1.0);
    assert!(rel(gauss_2f1(1.0, 1.0, 2.0, 0.5).unwrap(), 2.0 * 2f64.ln()) < 1e-14);
    assert!(rel(gauss_2f1(0.5, 1.0, 1.5, -1.0).unwrap(), PI / 4.0) < 1e-14);
}

#[test]
fn gauss_approaches_gamma_ratio_at_one() {
    for &(a, b, c) in &[
        (0.3, 0.4, 2.0),
        (-0.5, 1.2, 2.7),
        (0.5, -1.5, 1.0),
        (1.1, 0.2, 3.9),
    ] {
        let ratio = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
        assert!(rel(gauss_2f1(a, b, c, 1.0).unwrap(), ratio) < 1e-12);
        // c - a - b >= 1 keeps the approach linear in 1 - z
        let near = gauss_2f1(a, b, c, 1.0 - 1e-10).unwrap();
        assert!(
            rel(near, ratio) < 1e-8,
            "({a}, {b}, {c}): {near} vs {ratio}"
        );
    }
}

#[test]
fn continued_real_part_joins_the_real_axis() {
    // this one vanishes at z = 1 like sqrt(1 - z)
    let left = gauss_2f1(0.5, -1.5, -0.5, 1.0 - 1e-12).unwrap();
    let right = gauss_2f1_continued(0.5, -1.5, -0.5, 1.0 + 1e-12, Branch::Above).unwrap();
    assert!(left.abs() < 1e-5 && right.re.abs() < 1e-5);
    for &(a, b, c) in &[(0.3, 0.4, 2.0), (0.5, -0.9, 0.1), (-0.5, 1.2, 2.7)] {
        let at_one = gauss_2f1(a, b, c, 1.0).unwrap();
        let right = gauss_2f1_continued(a, b, c, 1.0 + 1e-10, Branch::Above).unwrap();
        assert!(
            (right.re - at_one).abs() < 1e-4 * at_one.abs(),
            "({a}, {b}, {c})"
        );
    }
}

#[test]
fn continued_reference_value() {
    // elementary continuation: 2F1(1/2, -3/2; -1/2; z) = (1 - z)^(1/2) (1 + 2z)
    let below = gauss_2f1_continued(0.5, -1.5, -0.5, 4.0, Branch::Below).unwrap();
    let expected = 9.0 * 3f64.sqrt();
    assert!(below.re.abs() < 1e-13 * expected);
    assert!(rel(below.im, expected) < 1e-13);
    let above = gauss_2f1_continued(0.5, -1.5, -0.5, 4.0, Branch::Above).unwrap();
    assert_eq!(above, below.conj());
}

#[test]
fn continued_branches_are_conjugate() {
    for &(a, b, c, z) in &[
        (0.5, -0.9, 0.1, 2.5),
        (0.5, -1.2, -0.2, 9.0),
        (0.5, -2.4, -1.4, 1.5),
        (0.3, 0.45, 1.7, 30.0),
    ] {
        let up = gauss_2f1_continued(a, b, c, z, Branch::Above).unwrap();
        let down = gauss_2f1_continued(a, b, c, z, Branch::Below).unwrap();
        assert!((up.re - down.re).abs() <= 1e-13 * up.abs());
        assert!((up.im + down.im).abs() <= 1e-13 * up.abs());
    }
}

#[test]
fn appell_matches_naive_double_sum() {
    let cases = [
        (-1.5, 0.5, 0.5, -0.5, 0.3, 0.4),
        (0.7, 0.4, 1.1, 2.3, -0.5, 0.45),
        (2.2, -0.3, 0.8, 3.1, 0.5, -0.5),
        (-0.6, 1.5, 0.5, 0.4, 0.2, 0.1),
        (1.0, 1.0, 1.0, 2.0, -0.4, -0.3),
    ];
    for &(a, b1, b2, c, x, y) in &cases {
        let f = appell_f1(a, b1, b2, c, x, y).unwrap().value;
        let expected = appell_naive(a, b1, b2, c, x, y);
        assert_eq!(f.im, 0.0);
        assert!(
            rel(f.re, expected) < 1e-10,
            "{:?}: {} vs {expected}",
            (a, b1, b2, c, x, y),
            f.re
        );
    }
}

#[test]
fn appell_pinned_value() {
    let f = appell_f1(-1.5, 0.5, 0.5, -0.5, 0.3, 0.4).unwrap().value;
    assert!(rel(f.re, 1.621_501_412_648_850_5) < 1e-13);
}

#[test]
fn quadrature_exact_polynomial_antiderivative() {
    for m in 2..8 {
        let spec = TubeSpec::new(TubeShape::Conic, 0.5, 1.0, 1.0).unwrap();
        let mf = m as f64;
        let exact = 2.0 * (0.5f64.powf(1.0 - mf) - 1.0) / (mf - 1.0);
        let q = integrate_inverse_radius_power(&spec, mf, 1e-13).unwrap();
        assert!(rel(q.value, exact) < 1e-12);
    }
}

#[test]
fn quadrature_hyperbolic_arctan_case_is_honest() {
    let spec = TubeSpec::new(TubeShape::Hyperbolic, 1.0, 2.0, 1.0).unwrap();
    let exact = 3f64.sqrt().atan() / 3f64.sqrt();
    for &tol in &[1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
        let q = integrate_inverse_radius_power(&spec, 2.0, tol).unwrap();
        assert!((q.value - exact).abs() <= q.error_estimate.max(4.0 * f64::EPSILON * exact));
    }
}

#[test]
fn halving_tolerance_does_not_lose_accuracy() {
    let cases = [
        (
            TubeSpec::new(TubeShape::Hyperbolic, 1.0, 2.0, 1.0).unwrap(),
            2.0,
            3f64.sqrt().atan() / 3f64.sqrt(),
        ),
        (
            TubeSpec::new(TubeShape::Conic, 1.0, 4.0, 2.0).unwrap(),
            2.8,
            2.0 * (1.0 - 4f64.powf(-1.8)) / (1.8 * 3.0),
        ),
        (
            TubeSpec::new(TubeShape::Conic, 1.0, 10.0, 2.0).unwrap(),
            5.5,
            2.0 * (1.0 - 10f64.powf(-4.5)) / (4.5 * 9.0),
        ),
    ];
    for (spec, m, exact) in cases {
        let mut tol = 1e-3;
        let mut previous = f64::INFINITY;
        while tol >= 1e-13 {
            let err = (integrate_inverse_radius_power(&spec, m, tol).unwrap().value - exact).abs();
            // differences below a few ulps are rounding, not accuracy
            assert!(
                err <= previous + 4.0 * f64::EPSILON * exact,
                "tol {tol}: {err} > {previous}"
            );
            previous = err;
            tol /= 2.0;
        }
    }
}

#[test]
fn half_interval_doubling_matches_full_interval() {
    for shape in TubeShape::ALL {
        for &n in &[0.4, 1.0, 1.6] {
            let spec = TubeSpec::new(shape, 1.0, 3.0, 2.0).unwrap();
            let half = integrate_inverse_radius_power(&spec, 3.0 * n + 1.0, 1e-12).unwrap();
            let full = integrate_inverse_radius_power_full(&spec, 3.0 * n + 1.0, 1e-12).unwrap();
            assert!(
                rel(half.value, full.value) < 1e-13,
                "{shape} n={n}: {} vs {}",
                half.value,
                full.value
            );
        }
    }
}

#[test]
fn cosh_newtonian_matches_sech_antiderivative() {
    let spec = TubeSpec::new(TubeShape::HyperbolicCosine, 1.0, 2.0, 2.0).unwrap();
    let fluid = PowerLawFluid::newtonian(1.0).unwrap();
    let b = (2.0 + 3f64.sqrt()).ln();
    let t = 3f64.sqrt() / 2.0;
    let exact = 2.0 * (t - t.powi(3) / 3.0) / b;
    let j = analytic_integral(&fluid, &spec).unwrap();
    assert!(rel(j.value, exact) < 1e-12);
    assert_eq!(j.branch_used, Some(Branch::Below));
}

#[test]
fn sinusoid_newtonian_matches_residue_closed_form() {
    // ∫ dθ / (a - b cos θ)^4 over a period = 2π P3(a / s) / s^4 with s = sqrt(a² - b²)
    let (r_min, r_max, l) = (1.0, 3.0, 5.0);
    let spec = TubeSpec::new(TubeShape::Sinusoidal, r_min, r_max, l).unwrap();
    let fluid = PowerLawFluid::newtonian(1.0).unwrap();
    let (a, b) = ((r_max + r_min) / 2.0, (r_max - r_min) / 2.0);
    let s2: f64 = a * a - b * b;
    let t = a / s2.sqrt();
    let exact_j = l * (5.0 * t.powi(3) - 3.0 * t) / 2.0 / (s2 * s2);
    let result = pressure_drop(&fluid, &spec, 1.0).unwrap();
    assert_eq!(result.method, Method::QuadratureFallback);
    assert!(rel(result.pressure_drop, 8.0 / PI * exact_j) < 1e-8);
}

#[test]
fn straight_tube_limit() {
    for shape in TubeShape::ALL {
        for &n in &[0.5, 1.0, 1.5] {
            let fluid = PowerLawFluid::new(1.0, n).unwrap();
            let spec = TubeSpec::new(shape, 1.0, 1.0 + 1e-6, 1.0).unwrap();
            let p = pressure_drop(&fluid, &spec, 1.0).unwrap().pressure_drop;
            let straight = straight_tube_pressure_drop(&fluid, 1.0, 1.0, 1.0).unwrap();
            assert!(rel(p, straight) < 1e-4, "{shape} n={n}: {p} vs {straight}");
        }
    }
}

#[test]
fn radius_monotonicity() {
    for shape in TubeShape::ALL {
        for &n in &[0.4, 1.0, 1.6] {
            let fluid = PowerLawFluid::new(1.0, n).unwrap();
            let p = |r_min: f64, r_max: f64| {
                let spec = TubeSpec::new(shape, r_min, r_max, 2.0).unwrap();
                pressure_drop(&fluid, &spec, 1.0).unwrap().pressure_drop
            };
            let mut last = f64::INFINITY;
            for &r_max in &[1.2, 1.5, 2.0, 3.0, 5.0] {
                let value = p(1.0, r_max);
                assert!(value < last, "{shape} n={n} r_max={r_max}");
                last = value;
            }
            let mut last = f64::INFINITY;
            for &r_min in &[0.3, 0.6, 1.0, 1.5, 1.9] {
                let value = p(r_min, 2.0);
                assert!(value < last, "{shape} n={n} r_min={r_min}");
                last = value;
            }
        }
    }
}

#[test]
fn length_and_consistency_are_prefactors() {
    for shape in TubeShape::ALL {
        for &n in &[0.4, 0.8, 1.2, 1.6] {
            let fluid = PowerLawFluid::new(1.0, n).unwrap();
            let spec = TubeSpec::new(shape, 1.0, 2.5, 1.5).unwrap();
            let k = conductance_coefficient(&fluid, &spec).unwrap();
            let long = conductance_coefficient(&fluid, &spec.with_length(3.0).unwrap()).unwrap();
            assert!(rel(long, 2.0 * k) < 1e-10);
            let thick = PowerLawFluid::new(2.0, n).unwrap();
            assert!(rel(conductance_coefficient(&thick, &spec).unwrap(), 2.0 * k) < 1e-10);
        }
    }
}

#[test]
fn newtonian_conic_reduction() {
    let fluid = PowerLawFluid::new(1.7, 1.0).unwrap();
    for &(r_min, r_max, l, q) in &[
        (0.5, 1.0, 1.0, 1.0),
        (1.0, 4.0, 3.0, 0.2),
        (0.01, 0.02, 0.1, 1e-6),
    ] {
        let spec = TubeSpec::new(TubeShape::Conic, r_min, r_max, l).unwrap();
        let p = pressure_drop(&fluid, &spec, q).unwrap().pressure_drop;
        let expected =
            8.0 * 1.7 * q * l / (3.0 * PI * (r_max - r_min)) * (r_min.powi(-3) - r_max.powi(-3));
        assert!(rel(p, expected) < 1e-13);
    }
}

#[test]
fn complex_value_of_unit_angle() {
    let half = ComplexValue::unit_pi(-0.5);
    assert_eq!(half, ComplexValue::new(0.0, -1.0));
}
