//! Real-argument gamma and digamma.

use std::f64::consts::PI;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi x)` with exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x % 2.0; // (-2, 2)
    let r = if r < -1.0 {
        r + 2.0
    } else if r > 1.0 {
        r - 2.0
    } else {
        r
    };
    // r in [-1, 1]; fold onto [-1/2, 1/2]
    if r > 0.5 {
        ((1.0 - r) * PI).sin()
    } else if r < -0.5 {
        (-(1.0 + r) * PI).sin()
    } else {
        (r * PI).sin()
    }
}

/// `cos(pi x)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x.abs() % 2.0;
    let r = if r > 1.0 { 2.0 - r } else { r };
    if r == 0.5 {
        0.0
    } else if r < 0.25 {
        (r * PI).cos()
    } else if r < 0.75 {
        ((0.5 - r) * PI).sin()
    } else {
        -((1.0 - r) * PI).cos()
    }
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function. Poles (non-positive integers) return NaN.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() || is_pole(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so large arguments do not overflow early
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * half * (-t).exp() * sum
}

/// `1 / Gamma(x)`, zero at the poles of gamma.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    1.0 / gamma(x)
}

/// Digamma `psi(x) = Gamma'(x)/Gamma(x)`. Poles return NaN.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || is_pole(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        // psi(1 - x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - PI * cos_pi(x) / sin_pi(x);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: B_2k / (2k x^2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - tail
}
