// SPDX-License-Identifier: Apache-2.0

//! Private one-sided test for the odds ratio of a 2×2 table whose one-way
//! margins are released exactly.
//!
//! Conditional on the margins, `x11` follows Fisher's noncentral
//! hypergeometric law with odds ratio `w`. The test rejects `H0: w ≤ 1` with
//! probability `F(x11 − m)`, where `F` is the canonical noise CDF and `m` sets
//! the size to `α`.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::cnd::{cnd_quantile, CndSpec};
use crate::error::{domain, Error, Result};
use crate::rng::RngSeed;

const BISECTION_STEPS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Table2x2 {
    pub x11: u64,
    pub x12: u64,
    pub x21: u64,
    pub x22: u64,
}

impl Table2x2 {
    pub fn new(x11: u64, x12: u64, x21: u64, x22: u64) -> Self {
        Self { x11, x12, x21, x22 }
    }

    pub fn margins(&self) -> Margins {
        Margins {
            t1dot: self.x11 + self.x12,
            t2dot: self.x21 + self.x22,
            tdot1: self.x11 + self.x21,
            tdot2: self.x12 + self.x22,
        }
    }

    pub fn n(&self) -> u64 {
        self.x11 + self.x12 + self.x21 + self.x22
    }

    /// The table with these margins and top-left cell `x11`.
    pub fn from_margins(t: &Margins, x11: u64) -> Result<Self> {
        let (lo, hi) = t.support();
        if x11 < lo || x11 > hi {
            return domain(format!("x11 = {x11} outside support {lo}..={hi}"));
        }
        Ok(Self {
            x11,
            x12: t.t1dot - x11,
            x21: t.tdot1 - x11,
            x22: t.t2dot + x11 - t.tdot1,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Margins {
    pub t1dot: u64,
    pub t2dot: u64,
    pub tdot1: u64,
    pub tdot2: u64,
}

impl Margins {
    pub fn new(t1dot: u64, t2dot: u64, tdot1: u64, tdot2: u64) -> Result<Self> {
        if t1dot + t2dot != tdot1 + tdot2 {
            return domain(format!(
                "row total {} differs from column total {}",
                t1dot + t2dot,
                tdot1 + tdot2
            ));
        }
        Ok(Self {
            t1dot,
            t2dot,
            tdot1,
            tdot2,
        })
    }

    /// From row totals and the first column total.
    pub fn from_rows(t1dot: u64, t2dot: u64, tdot1: u64) -> Result<Self> {
        let n = t1dot + t2dot;
        if tdot1 > n {
            return domain(format!("column total {tdot1} exceeds n = {n}"));
        }
        Self::new(t1dot, t2dot, tdot1, n - tdot1)
    }

    pub fn n(&self) -> u64 {
        self.t1dot + self.t2dot
    }

    /// `(L, U)`: the attainable values of `x11`.
    pub fn support(&self) -> (u64, u64) {
        (self.tdot1.saturating_sub(self.t2dot), self.t1dot.min(self.tdot1))
    }
}

/// Whole pmf over the support, as `(x, P(x))`.
pub fn nchg_distribution(t: &Margins, w: f64) -> Result<Vec<(u64, f64)>> {
    if !(w > 0.0 && w.is_finite()) {
        return domain(format!("odds ratio must be finite and > 0, got {w}"));
    }
    let (lo, hi) = t.support();
    let lw = w.ln();
    let logs: Vec<f64> = (lo..=hi)
        .map(|x| ln_binomial(t.t1dot, x) + ln_binomial(t.t2dot, t.tdot1 - x) + x as f64 * lw)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    let log_norm = top + total.ln();
    Ok((lo..=hi).zip(logs).map(|(x, l)| (x, (l - log_norm).exp())).collect())
}

/// Fisher noncentral hypergeometric pmf; zero off the support.
pub fn nchg_pmf(t: &Margins, w: f64, x: u64) -> Result<f64> {
    let (lo, hi) = t.support();
    if x < lo || x > hi {
        if !(w > 0.0 && w.is_finite()) {
            return domain(format!("odds ratio must be finite and > 0, got {w}"));
        }
        return Ok(0.0);
    }
    Ok(nchg_distribution(t, w)?[(x - lo) as usize].1)
}

/// `E_w[F(H − m)]`, the rejection probability of the test at odds ratio `w`.
pub fn rejection_probability(t: &Margins, spec: &CndSpec, m: f64, w: f64) -> Result<f64> {
    Ok(nchg_distribution(t, w)?
        .iter()
        .map(|&(x, p)| p * spec.cdf(x as f64 - m))
        .sum())
}

/// Threshold `m(t)` giving the test size exactly `α` under `w = 1`.
pub fn solve_threshold_m(t: &Margins, spec: &CndSpec, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let (lo_x, hi_x) = t.support();
    if lo_x == hi_x {
        return Ok(lo_x as f64 - cnd_quantile(spec, alpha)?);
    }
    let dist = nchg_distribution(t, 1.0)?;
    let size = |m: f64| -> f64 { dist.iter().map(|&(x, p)| p * spec.cdf(x as f64 - m)).sum() };
    let mut lo = lo_x as f64 - cnd_quantile(spec, 1.0 - 1e-12)?;
    let mut hi = hi_x as f64 - cnd_quantile(spec, 1e-12)?;
    if !(size(lo) >= alpha && size(hi) <= alpha) {
        return Err(Error::Domain("threshold bracket has no sign change".into()));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if size(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `φ*(X) = F(x11 − m(t))`.
pub fn test_function(x11: u64, m: f64, spec: &CndSpec) -> f64 {
    spec.cdf(x11 as f64 - m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub phi_star: f64,
    pub m: f64,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub p_value: Option<f64>,
    pub alpha: f64,
}

pub fn umpu_test(x: &Table2x2, spec: &CndSpec, alpha: f64) -> Result<TestResult> {
    let t = x.margins();
    let m = solve_threshold_m(&t, spec, alpha)?;
    Ok(TestResult {
        phi_star: test_function(x.x11, m, spec),
        m,
        u: None,
        p_value: None,
        alpha,
    })
}

/// `p = E_{H ~ Hyper(t, 1)} F(H − U)` for a given noisy statistic `U`.
pub fn pvalue_at(t: &Margins, spec: &CndSpec, u: f64) -> Result<f64> {
    let p: f64 = nchg_distribution(t, 1.0)?
        .iter()
        .map(|&(x, p)| p * spec.cdf(x as f64 - u))
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// Draw `U = x11 + N` with `N` from the canonical noise distribution and
/// return `(U, p)`.
pub fn private_pvalue(x: &Table2x2, spec: &CndSpec, seed: RngSeed) -> Result<(f64, f64)> {
    let noise = cnd_quantile(spec, seed.rng().uniform_open())?;
    let u = x.x11 as f64 + noise;
    Ok((u, pvalue_at(&x.margins(), spec, u)?))
}

/// Test decision and private p-value together.
pub fn run_test(x: &Table2x2, spec: &CndSpec, alpha: f64, seed: RngSeed) -> Result<TestResult> {
    let mut r = umpu_test(x, spec, alpha)?;
    let (u, p) = private_pvalue(x, spec, seed)?;
    r.u = Some(u);
    r.p_value = Some(p);
    Ok(r)
}
