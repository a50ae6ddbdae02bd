// SPDX-License-Identifier: Apache-2.0

//! Canonical noise distributions for symmetric tradeoff functions.
//!
//! The CDF is linear on `[−1/2, 1/2]` between `c` and `1 − c`, where `c` is
//! the fixed point `f(1 − c) = c`, and is extended one unit at a time by
//! `F(x) = f(F(x + 1))` to the left and `F(x) = 1 − f(1 − F(x − 1))` to the
//! right. A unit shift of this distribution has tradeoff exactly `f`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::RngSeed;
use crate::tradeoff::TradeoffSpec;

const BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CndSpec {
    pub f: TradeoffSpec,
    pub c: f64,
}

impl CndSpec {
    /// `f` must be symmetric; every built-in family is.
    pub fn new(f: TradeoffSpec) -> Result<Self> {
        let c = solve_c(&f)?;
        Ok(Self { f, c })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        cnd_cdf(self, x)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        cnd_quantile(self, u)
    }
}

/// Root of `f(1 − c) = c` on `[0, 1/2]` by bisection.
pub fn solve_c(f: &TradeoffSpec) -> Result<f64> {
    let g = |c: f64| f.eval_unchecked(1.0 - c) - c;
    let (g0, ghalf) = (g(0.0), g(0.5));
    if !(ghalf < 0.0) {
        return Err(Error::TrivialTradeoff(format!("{f} has f(1/2) = 1/2; nothing to calibrate")));
    }
    if !(g0 > 0.0) {
        return Err(Error::TrivialTradeoff(format!("{f} gives c = 0 (f(1) = 0)")));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn cnd_cdf(spec: &CndSpec, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let c = spec.c;
    let central = |z: f64| c * (0.5 - z) + (1.0 - c) * (z + 0.5);
    if x < -0.5 {
        let steps = (-x - 0.5).ceil();
        let mut v = central(x + steps);
        for _ in 0..steps as u64 {
            if v == 0.0 {
                break;
            }
            v = spec.f.eval_unchecked(v);
        }
        v
    } else if x > 0.5 {
        let steps = (x - 0.5).ceil();
        let mut v = central(x - steps);
        for _ in 0..steps as u64 {
            if v == 1.0 {
                break;
            }
            v = 1.0 - spec.f.eval_unchecked(1.0 - v);
        }
        v
    } else {
        central(x)
    }
}

/// `F⁻¹(u)` by bracket expansion and bisection.
pub fn cnd_quantile(spec: &CndSpec, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {u}"));
    }
    let c = spec.c;
    if u >= c && u <= 1.0 - c {
        return Ok((u - 0.5) / (1.0 - 2.0 * c));
    }
    let (mut lo, mut hi) = if u < c {
        let mut lo = -1.5;
        while cnd_cdf(spec, lo) >= u {
            lo *= 2.0;
            if lo < -1e12 {
                return Err(Error::IterationCap(BISECTION_STEPS));
            }
        }
        (lo, -0.5)
    } else {
        let mut hi = 1.5;
        while cnd_cdf(spec, hi) <= u {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::IterationCap(BISECTION_STEPS));
            }
        }
        (0.5, hi)
    };
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cnd_cdf(spec, mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn cnd_sample(spec: &CndSpec, seed: RngSeed, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return domain("count must be >= 1");
    }
    let mut rng = seed.rng();
    (0..count).map(|_| cnd_quantile(spec, rng.uniform_open())).collect()
}
