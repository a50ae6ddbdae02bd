// SPDX-License-Identifier: Apache-2.0

//! Standard normal distribution function and its inverse.
//!
//! Both are expressed through the complementary error function so that the
//! lower tail keeps full relative precision down to `x = -8` and beyond.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Φ(x).
pub fn cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Φ⁻¹(p), with `±∞` at the endpoints.
///
/// One Newton step on Φ polishes the erfc-inverse estimate.
pub fn quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    if !x.is_finite() {
        return x;
    }
    let dens = pdf(x);
    if dens > 0.0 {
        // Work in the tail where the probability is representable precisely.
        let step = if x < 0.0 {
            (cdf(x) - p) / dens
        } else {
            ((1.0 - p) - cdf(-x)) / -dens
        };
        if step.is_finite() {
            return x - step;
        }
    }
    x
}
