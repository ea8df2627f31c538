//! Discrete power-law fit of the in-degree distribution with `x_min = 1`.
//!
//! The estimate maximises the zeta likelihood `P(x) = x^-a / zeta(a)`, i.e.
//! it solves `-zeta'(a)/zeta(a) = mean(ln x)`. The closed-form approximation
//! `1 + n / sum(ln(x / (x_min - 0.5)))` is also reported; it is used as the
//! answer when every sample equals `x_min`, where the likelihood has no finite
//! maximiser.

use alloc::vec::Vec;

use super::CollateralNetwork;
use crate::error::{Error, Result};

pub const MIN_POWER_LAW_SAMPLES: usize = 10;

const METHOD: &str = "discrete-mle(x_min=1)";
const ALPHA_UPPER: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub alpha: f64,
    /// Closed-form approximation `1 + n / sum(ln(x / 0.5))`.
    pub approx_alpha: f64,
    pub sample_count: usize,
    pub x_min: u64,
    /// No interior likelihood maximum (all samples equal, or a vanishing tail).
    pub degenerate: bool,
    pub method: &'static str,
}

// B_{2j} / (2j)!
const BERNOULLI_TERMS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];
const EM_CUTOFF: usize = 16;

/// `(zeta(s), zeta'(s))` for `s > 1` by Euler-Maclaurin summation.
fn zeta_and_derivative(s: f64) -> (f64, f64) {
    let mut z = 0.0;
    let mut dz = 0.0;
    for k in 1..EM_CUTOFF {
        let kf = k as f64;
        let t = libm::pow(kf, -s);
        z += t;
        dz -= libm::log(kf) * t;
    }
    let n = EM_CUTOFF as f64;
    let ln_n = libm::log(n);
    let tail = libm::pow(n, 1.0 - s) / (s - 1.0);
    z += tail;
    dz += -ln_n * tail - tail / (s - 1.0);
    let half = 0.5 * libm::pow(n, -s);
    z += half;
    dz -= ln_n * half;

    // T_j = c_j * s(s+1)..(s+2j-2) * n^(-s-2j+1)
    let mut rising = s;
    let mut rising_log_deriv = 1.0 / s;
    for (j, c) in BERNOULLI_TERMS.iter().enumerate() {
        if j > 0 {
            let a = s + (2 * j - 1) as f64;
            let b = s + (2 * j) as f64;
            rising *= a * b;
            rising_log_deriv += 1.0 / a + 1.0 / b;
        }
        let power = libm::pow(n, -s - (2 * (j + 1)) as f64 + 1.0);
        let term = c * rising * power;
        z += term;
        dz += term * (rising_log_deriv - ln_n);
    }
    (z, dz)
}

/// `E[ln x]` under the zeta distribution with exponent `s`.
fn expected_log(s: f64) -> f64 {
    let (z, dz) = zeta_and_derivative(s);
    -dz / z
}

/// Fits positive integer samples. Zeros are ignored.
pub fn fit_discrete_power_law(samples: &[u64]) -> Result<PowerLawFit> {
    let xs: Vec<f64> = samples
        .iter()
        .filter(|&&x| x >= 1)
        .map(|&x| x as f64)
        .collect();
    if xs.len() < MIN_POWER_LAW_SAMPLES {
        return Err(Error::InsufficientSamples {
            requested: xs.len(),
            required: MIN_POWER_LAW_SAMPLES,
        });
    }
    let n = xs.len() as f64;
    let sum_ln: f64 = xs.iter().map(|&x| libm::log(x)).sum();
    let sum_ln_shifted: f64 = xs.iter().map(|&x| libm::log(x / 0.5)).sum();
    let approx_alpha = 1.0 + n / sum_ln_shifted;
    let mean_ln = sum_ln / n;

    let mut fit = PowerLawFit {
        alpha: approx_alpha,
        approx_alpha,
        sample_count: xs.len(),
        x_min: 1,
        degenerate: true,
        method: METHOD,
    };
    if mean_ln <= 0.0 || expected_log(ALPHA_UPPER) >= mean_ln {
        return Ok(fit);
    }

    // expected_log decreases monotonically from +inf at 1 to 0 at infinity.
    let (mut lo, mut hi) = (1.0 + 1e-12, ALPHA_UPPER);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if expected_log(mid) > mean_ln {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    fit.alpha = 0.5 * (lo + hi);
    fit.degenerate = false;
    Ok(fit)
}

/// Fits the in-degrees (edge counts) of all nodes with at least one in-edge.
pub fn power_law_exponent(net: &CollateralNetwork) -> Result<PowerLawFit> {
    let degrees: Vec<u64> = (0..net.node_count())
        .map(|v| net.in_degree(v) as u64)
        .collect();
    fit_discrete_power_law(&degrees)
}
