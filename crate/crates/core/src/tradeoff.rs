// SPDX-License-Identifier: Apache-2.0

//! Tradeoff functions and the accounting built on them.
//!
//! Tradeoff functions here use the convention where the argument is one minus
//! the type I error, so every valid `f` is convex, continuous, non-decreasing
//! and satisfies `f(α) ≤ α`. Under this convention group privacy is plain
//! functional composition and the Gaussian family is
//! `G_μ(α) = Φ(Φ⁻¹(α) − μ)`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::normal;

/// Comparison tolerance for pointwise tradeoff checks.
pub const TRADEOFF_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum TradeoffSpec {
    /// `f_{ε,δ}`.
    #[serde(rename = "exact_dp")]
    ExactDp { epsilon: f64, delta: f64 },
    /// `G_μ`.
    #[serde(rename = "gdp")]
    GaussianDp { mu: f64 },
    /// `base` composed with itself `k` times.
    #[serde(rename = "self_power")]
    SelfPower { base: Box<TradeoffSpec>, k: u32 },
}

impl TradeoffSpec {
    pub fn exact(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return domain(format!("epsilon must be finite and >= 0, got {epsilon}"));
        }
        if !(0.0..=1.0).contains(&delta) {
            return domain(format!("delta must lie in [0, 1], got {delta}"));
        }
        Ok(TradeoffSpec::ExactDp { epsilon, delta })
    }

    pub fn gaussian(mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return domain(format!("mu must be finite and >= 0, got {mu}"));
        }
        Ok(TradeoffSpec::GaussianDp { mu })
    }

    /// The identity tradeoff (perfect privacy).
    pub fn identity() -> Self {
        TradeoffSpec::ExactDp { epsilon: 0.0, delta: 0.0 }
    }

    pub fn family(&self) -> &'static str {
        match self {
            TradeoffSpec::ExactDp { .. } => "exact_dp",
            TradeoffSpec::GaussianDp { .. } => "gdp",
            TradeoffSpec::SelfPower { .. } => "self_power",
        }
    }

    /// Evaluate `f(α)`.
    pub fn eval(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha must lie in [0, 1], got {alpha}"));
        }
        Ok(self.eval_unchecked(alpha))
    }

    pub(crate) fn eval_unchecked(&self, alpha: f64) -> f64 {
        match self {
            TradeoffSpec::ExactDp { epsilon, delta } => {
                let e = epsilon.exp();
                let upper = 1.0 - delta - e + e * alpha;
                let lower = (alpha - delta) / e;
                upper.max(lower).max(0.0).min(alpha)
            }
            TradeoffSpec::GaussianDp { mu } => {
                if *mu == 0.0 {
                    return alpha;
                }
                normal::cdf(normal::quantile(alpha) - mu)
            }
            TradeoffSpec::SelfPower { base, k } => {
                let mut v = alpha;
                for _ in 0..*k {
                    v = base.eval_unchecked(v);
                }
                v
            }
        }
    }

    /// Resolve to a GDP parameter for a Gaussian tradeoff or a power of one.
    pub fn as_gdp(&self) -> Option<f64> {
        match self {
            TradeoffSpec::GaussianDp { mu } => Some(*mu),
            TradeoffSpec::SelfPower { base, k } => base.as_gdp().map(|mu| mu * *k as f64),
            TradeoffSpec::ExactDp { .. } => None,
        }
    }

    /// Kinks of the piecewise-linear pieces, in `[0, 1]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            TradeoffSpec::ExactDp { epsilon, delta } => {
                let e = epsilon.exp();
                let mut pts = vec![*delta];
                if e > 1.0 {
                    pts.push((e - 1.0 + delta * (1.0 - 1.0 / e)) / (e - 1.0 / e));
                }
                pts.into_iter().filter(|p| (0.0..=1.0).contains(p)).collect()
            }
            TradeoffSpec::GaussianDp { .. } => Vec::new(),
            TradeoffSpec::SelfPower { base, .. } => base.breakpoints(),
        }
    }

    /// `f(α) < α` for some α on the standard grid.
    pub fn is_nontrivial(&self) -> bool {
        standard_grid(&[self])
            .into_iter()
            .any(|a| self.eval_unchecked(a) < a - TRADEOFF_TOL)
    }
}

impl fmt::Display for TradeoffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TradeoffSpec::ExactDp { epsilon, delta } => write!(f, "f({epsilon}, {delta})"),
            TradeoffSpec::GaussianDp { mu } => write!(f, "G({mu})"),
            TradeoffSpec::SelfPower { base, k } => write!(f, "({base})^{k}"),
        }
    }
}

/// 101 equispaced points on `[0, 1]` plus the breakpoints of every listed spec.
pub fn standard_grid(specs: &[&TradeoffSpec]) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for s in specs {
        pts.extend(s.breakpoints());
    }
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    pts
}

/// `f^{∘k}`; Gaussian powers collapse to `G_{kμ}`.
pub fn compose_self(f: &TradeoffSpec, k: u32) -> Result<TradeoffSpec> {
    if k == 0 {
        return domain("group size k must be >= 1");
    }
    if k == 1 {
        return Ok(f.clone());
    }
    Ok(match f {
        TradeoffSpec::GaussianDp { mu } => TradeoffSpec::GaussianDp { mu: mu * k as f64 },
        TradeoffSpec::SelfPower { base, k: j } => TradeoffSpec::SelfPower {
            base: base.clone(),
            k: j * k,
        },
        other => TradeoffSpec::SelfPower {
            base: Box::new(other.clone()),
            k,
        },
    })
}

/// `G_{μ1} ⊗ G_{μ2} = G_{√(μ1² + μ2²)}`.
pub fn tensor_gdp(mu1: f64, mu2: f64) -> Result<TradeoffSpec> {
    if !(mu1 >= 0.0 && mu2 >= 0.0) {
        return domain(format!("mu values must be >= 0, got {mu1}, {mu2}"));
    }
    TradeoffSpec::gaussian(mu1.hypot(mu2))
}

/// Tensor product of a sequence of Gaussian tradeoffs.
pub fn tensor(fs: &[TradeoffSpec]) -> Result<TradeoffSpec> {
    let mut acc = 0.0f64;
    for f in fs {
        let mu = f.as_gdp().ok_or_else(|| Error::UnsupportedFamily {
            op: "tensor",
            family: f.family().to_string(),
        })?;
        acc = acc.hypot(mu);
    }
    TradeoffSpec::gaussian(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedTradeoff {
    pub spec: TradeoffSpec,
    pub kind: BoundKind,
}

/// Basic composition for pure/approximate DP, `f_{ε1+ε2, δ1+δ2}`.
///
/// Only a lower bound on `f_{ε1,δ1} ⊗ f_{ε2,δ2}`.
pub fn tensor_exact_lower_bound(a: &TradeoffSpec, b: &TradeoffSpec) -> Result<BoundedTradeoff> {
    match (a, b) {
        (
            TradeoffSpec::ExactDp { epsilon: e1, delta: d1 },
            TradeoffSpec::ExactDp { epsilon: e2, delta: d2 },
        ) => Ok(BoundedTradeoff {
            spec: TradeoffSpec::exact(e1 + e2, (d1 + d2).min(1.0))?,
            kind: BoundKind::LowerBound,
        }),
        (x, y) => Err(Error::UnsupportedFamily {
            op: "tensor_exact_lower_bound",
            family: format!("{} x {}", x.family(), y.family()),
        }),
    }
}

/// Pointwise comparison of the two ways of accounting for `k` mechanisms
/// under a common adjacency radius `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    pub grid: Vec<f64>,
    /// `(f1 ⊗ … ⊗ fk)^{∘a}`, evaluated by nested composition.
    pub composition_first: Vec<f64>,
    /// `f1^{∘a} ⊗ … ⊗ fk^{∘a}`, evaluated in closed form.
    pub semi_first: Vec<f64>,
    /// Largest `composition_first - semi_first` (≤ 0 when the order holds).
    pub max_excess: f64,
    pub largest_gap: f64,
    pub holds: bool,
}

pub fn composition_order_check(fs: &[TradeoffSpec], a: u32, grid: &[f64]) -> Result<OrderingReport> {
    if fs.is_empty() {
        return domain("need at least one tradeoff function");
    }
    if a == 0 {
        return domain("adjacency radius must be >= 1");
    }
    let joint = tensor(fs)?;
    let composition_first = TradeoffSpec::SelfPower {
        base: Box::new(joint),
        k: a,
    };
    let powered = fs
        .iter()
        .map(|f| compose_self(f, a))
        .collect::<Result<Vec<_>>>()?;
    let semi_first = tensor(&powered)?;

    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    let mut max_excess = f64::NEG_INFINITY;
    let mut largest_gap = 0.0f64;
    for &alpha in grid {
        let l = composition_first.eval(alpha)?;
        let r = semi_first.eval(alpha)?;
        max_excess = max_excess.max(l - r);
        largest_gap = largest_gap.max((l - r).abs());
        lhs.push(l);
        rhs.push(r);
    }
    Ok(OrderingReport {
        grid: grid.to_vec(),
        composition_first: lhs,
        semi_first: rhs,
        max_excess,
        largest_gap,
        holds: max_excess <= TRADEOFF_TOL,
    })
}

/// δ(ε) for a μ-GDP guarantee.
///
/// `μ = 0` gives `δ = 0` for every ε.
pub fn gdp_to_approx_dp(mu: f64, epsilon: f64) -> Result<f64> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return domain(format!("mu must be finite and >= 0, got {mu}"));
    }
    if !(epsilon >= 0.0) {
        return domain(format!("epsilon must be >= 0, got {epsilon}"));
    }
    if mu == 0.0 {
        return Ok(0.0);
    }
    let a = normal::cdf(-epsilon / mu + mu / 2.0);
    let b = normal::cdf(-epsilon / mu - mu / 2.0);
    let tail = if b == 0.0 { 0.0 } else { epsilon.exp() * b };
    Ok((a - tail).clamp(0.0, 1.0))
}

/// Group privacy for zCDP: `k² ρ`.
pub fn zcdp_group(rho: f64, k: u32) -> Result<f64> {
    if !(rho >= 0.0) {
        return domain(format!("rho must be >= 0, got {rho}"));
    }
    if k == 0 {
        return domain("group size k must be >= 1");
    }
    Ok((k as f64).powi(2) * rho)
}

/// `ε = ρ + 2√(ρ ln(1/δ))`.
pub fn zcdp_to_approx_dp(rho: f64, delta: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return domain(format!("rho must be >= 0, got {rho}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    Ok(rho + 2.0 * (rho * (1.0 / delta).ln()).sqrt())
}

/// A privacy statement `(dataspace, A_a, f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyGuarantee {
    pub dataspace: String,
    pub adjacency_radius: u32,
    #[serde(flatten)]
    pub tradeoff: TradeoffSpec,
}

impl PrivacyGuarantee {
    /// Radius 0 is only meaningful for a singleton conforming set.
    pub fn new(
        dataspace: impl Into<String>,
        adjacency_radius: u32,
        tradeoff: TradeoffSpec,
        singleton: bool,
    ) -> Result<Self> {
        if adjacency_radius == 0 && !singleton {
            return domain("adjacency radius 0 requires a singleton conforming set");
        }
        Ok(Self {
            dataspace: dataspace.into(),
            adjacency_radius,
            tradeoff,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GuaranteeOrder {
    FirstStronger,
    SecondStronger,
    Equal,
    Incomparable,
}

/// Place two guarantees in the partial order given their explicit
/// indistinguishable-pair sets.
///
/// A guarantee is stronger when it protects a superset of pairs with a
/// pointwise larger tradeoff function and is strictly better on at least one
/// of the two axes.
pub fn compare_guarantees<P: Ord>(
    g1: &PrivacyGuarantee,
    g2: &PrivacyGuarantee,
    ind1: &BTreeSet<P>,
    ind2: &BTreeSet<P>,
    grid: &[f64],
) -> Result<GuaranteeOrder> {
    let mut pts = grid.to_vec();
    pts.extend(g1.tradeoff.breakpoints());
    pts.extend(g2.tradeoff.breakpoints());

    let mut f1_ge = true;
    let mut f2_ge = true;
    for &alpha in &pts {
        let a = g1.tradeoff.eval(alpha)?;
        let b = g2.tradeoff.eval(alpha)?;
        if a < b - TRADEOFF_TOL {
            f1_ge = false;
        }
        if b < a - TRADEOFF_TOL {
            f2_ge = false;
        }
    }
    let ind2_in_1 = ind2.is_subset(ind1);
    let ind1_in_2 = ind1.is_subset(ind2);

    let first_weakly = ind2_in_1 && f1_ge;
    let second_weakly = ind1_in_2 && f2_ge;
    Ok(match (first_weakly, second_weakly) {
        (true, true) => GuaranteeOrder::Equal,
        (true, false) => GuaranteeOrder::FirstStronger,
        (false, true) => GuaranteeOrder::SecondStronger,
        (false, false) => GuaranteeOrder::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid101() -> Vec<f64> {
        (0..=100).map(|i| i as f64 / 100.0).collect()
    }

    #[test]
    fn eval_examples() {
        let id = TradeoffSpec::exact(0.0, 0.0).unwrap();
        assert_eq!(id.eval(0.3).unwrap(), 0.3);
        let g0 = TradeoffSpec::gaussian(0.0).unwrap();
        assert_eq!(g0.eval(0.7).unwrap(), 0.7);
        let f = TradeoffSpec::exact(2f64.ln(), 0.0).unwrap();
        assert!((f.eval(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let f = TradeoffSpec::gaussian(1.0).unwrap();
        assert!(matches!(f.eval(-0.1), Err(Error::Domain(_))));
        assert!(matches!(f.eval(1.5), Err(Error::Domain(_))));
        assert!(TradeoffSpec::exact(1.0, 1.5).is_err());
        assert!(TradeoffSpec::gaussian(-1.0).is_err());
    }

    #[test]
    fn gaussian_endpoints() {
        let g = TradeoffSpec::gaussian(1.3).unwrap();
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        assert_eq!(g.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn compose_self_identity_case() {
        let f = TradeoffSpec::exact(0.7, 0.01).unwrap();
        let g = compose_self(&f, 1).unwrap();
        for a in grid101() {
            assert_eq!(f.eval(a).unwrap(), g.eval(a).unwrap());
        }
    }

    #[test]
    fn compose_self_gaussian_closed_form() {
        let g = compose_self(&TradeoffSpec::gaussian(0.5).unwrap(), 3).unwrap();
        assert_eq!(g, TradeoffSpec::GaussianDp { mu: 1.5 });
    }

    #[test]
    fn compose_self_gaussian_matches_nested() {
        for &(mu, k) in &[(0.3, 2u32), (1.0, 3), (0.7, 5)] {
            let base = TradeoffSpec::gaussian(mu).unwrap();
            let closed = compose_self(&base, k).unwrap();
            let nested = TradeoffSpec::SelfPower { base: Box::new(base), k };
            for a in grid101() {
                let d = (closed.eval(a).unwrap() - nested.eval(a).unwrap()).abs();
                assert!(d < 1e-9, "mu={mu} k={k} a={a} diff={d}");
            }
        }
    }

    // The two-fold power of f_{0.4,0} is not f_{0.8,0}: nested composition is
    // pointwise at least as large and strictly larger in the middle.
    #[test]
    fn exact_dp_power_is_not_the_doubled_epsilon() {
        let f = TradeoffSpec::exact(0.4, 0.0).unwrap();
        let nested = compose_self(&f, 2).unwrap();
        assert!(matches!(nested, TradeoffSpec::SelfPower { .. }));
        let doubled = TradeoffSpec::exact(0.8, 0.0).unwrap();
        let mut strict = 0;
        for i in 0..=10 {
            let a = i as f64 / 10.0;
            let n = nested.eval(a).unwrap();
            let d = doubled.eval(a).unwrap();
            assert!(n >= d - 1e-12);
            if n > d + 1e-6 {
                strict += 1;
            }
        }
        // Hand computation at α = 0.7: f(0.7) = 1 - e^0.4·0.3, then
        // f(that) = e^-0.4·(1 - e^0.4·0.3).
        let e = 0.4f64.exp();
        let want = (1.0 - e * 0.3) / e;
        assert!((nested.eval(0.7).unwrap() - want).abs() < 1e-12);
        assert!(strict >= 2);
        // Agreement near the endpoints where only the outer linear pieces act.
        for a in [0.0, 0.1, 1.0] {
            assert!((nested.eval(a).unwrap() - doubled.eval(a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_gdp_examples() {
        assert_eq!(tensor_gdp(0.0, 0.8).unwrap(), TradeoffSpec::GaussianDp { mu: 0.8 });
        assert_eq!(tensor_gdp(3.0, 4.0).unwrap(), TradeoffSpec::GaussianDp { mu: 5.0 });
        match tensor_gdp(1.0, 1.0).unwrap() {
            TradeoffSpec::GaussianDp { mu } => assert!((mu - 2f64.sqrt()).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_rejects_exact() {
        let f = TradeoffSpec::exact(1.0, 0.0).unwrap();
        assert!(matches!(tensor(&[f]), Err(Error::UnsupportedFamily { .. })));
    }

    #[test]
    fn exact_lower_bound_is_labelled() {
        let a = TradeoffSpec::exact(0.5, 0.01).unwrap();
        let b = TradeoffSpec::exact(0.25, 0.02).unwrap();
        let bound = tensor_exact_lower_bound(&a, &b).unwrap();
        assert_eq!(bound.kind, BoundKind::LowerBound);
        assert_eq!(bound.spec, TradeoffSpec::ExactDp { epsilon: 0.75, delta: 0.03 });
        assert_eq!(serde_json::to_value(bound.kind).unwrap(), "LOWER_BOUND");
    }

    #[test]
    fn composition_order_examples() {
        let g1 = TradeoffSpec::gaussian(1.0).unwrap();
        let rep = composition_order_check(&[g1.clone(), g1], 2, &grid101()).unwrap();
        let target = TradeoffSpec::gaussian(2.0 * 2f64.sqrt()).unwrap();
        for (i, &a) in rep.grid.iter().enumerate() {
            let t = target.eval(a).unwrap();
            assert!((rep.composition_first[i] - t).abs() < 1e-12, "a={a} {} {t}", rep.composition_first[i]);
            assert!((rep.semi_first[i] - t).abs() < 1e-12);
        }
        assert!(rep.holds);

        let g0 = TradeoffSpec::gaussian(0.0).unwrap();
        let rep = composition_order_check(&[g0], 4, &grid101()).unwrap();
        for (i, &a) in rep.grid.iter().enumerate() {
            assert_eq!(rep.composition_first[i], a);
            assert_eq!(rep.semi_first[i], a);
        }

        let fs = [TradeoffSpec::gaussian(0.5).unwrap(), TradeoffSpec::gaussian(1.2).unwrap()];
        let rep = composition_order_check(&fs, 3, &grid101()).unwrap();
        assert!(rep.holds);
        assert!(rep.largest_gap < 1e-12, "gap {}", rep.largest_gap);
    }

    #[test]
    fn gdp_conversion_examples() {
        let d = gdp_to_approx_dp(1.0, 0.0).unwrap();
        let want = normal::cdf(0.5) - normal::cdf(-0.5);
        assert!((d - want).abs() < 1e-15);
        assert!((d - 0.3829249).abs() < 1e-7);
        assert!(gdp_to_approx_dp(1.0, 40.0).unwrap() < 1e-15);
        assert!(gdp_to_approx_dp(2.0, 1.0).unwrap() > gdp_to_approx_dp(2.0, 2.0).unwrap());
        assert_eq!(gdp_to_approx_dp(0.0, 0.3).unwrap(), 0.0);
        assert!(gdp_to_approx_dp(-1.0, 0.3).is_err());
    }

    #[test]
    fn zcdp_examples() {
        assert!((zcdp_group(2.56, 2).unwrap() - 10.24).abs() < 1e-12);
        assert_eq!(zcdp_group(0.0, 7).unwrap(), 0.0);
        assert!((zcdp_group(0.07, 3).unwrap() - 0.63).abs() < 1e-12);

        assert!((zcdp_to_approx_dp(2.56, 1e-10).unwrap() - 17.91528).abs() < 5e-5);
        assert!((zcdp_to_approx_dp(10.24, 1e-10).unwrap() - 40.95057).abs() < 5e-5);
        assert_eq!(zcdp_to_approx_dp(0.0, 0.3).unwrap(), 0.0);
        assert!(zcdp_to_approx_dp(1.0, 0.0).is_err());
        assert!(zcdp_to_approx_dp(1.0, 1.0).is_err());
    }

    #[test]
    fn guarantee_json_shape() {
        let g = PrivacyGuarantee::new("D_t", 2, TradeoffSpec::gaussian(1.5).unwrap(), false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        assert_eq!(v["dataspace"], "D_t");
        assert_eq!(v["adjacency_radius"], 2);
        assert_eq!(v["family"], "gdp");
        assert_eq!(v["params"]["mu"], 1.5);
        let back = PrivacyGuarantee::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);

        let nested = PrivacyGuarantee::new(
            "D",
            3,
            compose_self(&TradeoffSpec::exact(1.0, 0.0).unwrap(), 3).unwrap(),
            false,
        )
        .unwrap();
        let back = PrivacyGuarantee::from_json(&nested.to_json().unwrap()).unwrap();
        assert_eq!(back, nested);
    }

    #[test]
    fn radius_zero_needs_singleton() {
        let f = TradeoffSpec::identity();
        assert!(PrivacyGuarantee::new("D_t", 0, f.clone(), false).is_err());
        assert!(PrivacyGuarantee::new("D_t", 0, f, true).is_ok());
    }

    #[test]
    fn compare_identical_is_equal() {
        let f = TradeoffSpec::gaussian(1.0).unwrap();
        let g = PrivacyGuarantee::new("D", 1, f, false).unwrap();
        let ind: BTreeSet<(u8, u8)> = [(0, 1), (1, 2)].into_iter().collect();
        let ord = compare_guarantees(&g, &g, &ind, &ind, &grid101()).unwrap();
        assert_eq!(ord, GuaranteeOrder::Equal);
    }

    #[test]
    fn breakpoints_are_kinks() {
        let f = TradeoffSpec::exact(1.0, 0.05).unwrap();
        for b in f.breakpoints() {
            let h = 1e-6;
            let l = f.eval(b - h).unwrap();
            let m = f.eval(b).unwrap();
            let r = f.eval(b + h).unwrap();
            let left = (m - l) / h;
            let right = (r - m) / h;
            assert!(right - left > 1e-3, "no kink at {b}");
        }
    }
}
