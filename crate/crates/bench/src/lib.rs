// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use semidp_core::cnd::CndSpec;
use semidp_core::inference::Margins;
use semidp_core::sensitivity::{contingency_s_semi, SensitivitySpace};
use semidp_core::tradeoff::TradeoffSpec;
use semidp_core::Result;

/// Semi-private sensitivity space of a `k × k` table.
pub fn table_space(k: usize) -> Result<SensitivitySpace> {
    contingency_s_semi(k, k)
}

/// A point strictly inside the hull: half of the first nonzero vector.
pub fn interior_point(s: &SensitivitySpace) -> Vec<f64> {
    s.nonzero().next().map(|v| v.iter().map(|x| 0.5 * x).collect()).unwrap_or_default()
}

/// A point outside the hull along the same direction.
pub fn exterior_point(s: &SensitivitySpace) -> Vec<f64> {
    s.nonzero().next().map(|v| v.iter().map(|x| 1.5 * x).collect()).unwrap_or_default()
}

pub fn gdp_cnd(mu: f64) -> Result<CndSpec> {
    CndSpec::new(TradeoffSpec::gaussian(mu)?)
}

pub fn approx_dp_cnd(epsilon: f64, delta: f64) -> Result<CndSpec> {
    CndSpec::new(TradeoffSpec::exact(epsilon, delta)?)
}

/// Balanced margins with `n` records.
pub fn balanced_margins(n: u64) -> Result<Margins> {
    Margins::from_rows(n / 2, n - n / 2, n / 2)
}
