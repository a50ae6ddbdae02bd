// SPDX-License-Identifier: Apache-2.0

//! Additive noise mechanisms: projected Gaussian, optimal K-norm by rejection
//! sampling, the ℓ1/ℓ2/ℓ∞ mechanisms, and naive group-privacy baselines.
//!
//! Each mechanism has a prepared sampler (for repeated draws from one
//! generator) and a one-shot function taking an [`RngSeed`].

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{domain, Error, Result};
use crate::rng::{NoiseRng, RngSeed, GAMMA_METHOD, GENERATOR, NORMAL_METHOD};
use crate::sensitivity::{
    lp, lp_sensitivity, projection_matrix, span_basis, Norm, OrthonormalBasis, ProjectionMatrix,
    SensitivitySpace, RANK_TOL,
};

/// Consecutive rejections after which the K-norm sampler gives up.
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

/// Hull-membership tolerance used when accepting K-norm proposals.
pub const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismMeta {
    pub mechanism: String,
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejections: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub seed: RngSeed,
    pub generator: String,
    pub normal_method: String,
    pub gamma_method: String,
}

impl MechanismMeta {
    fn new(mechanism: &str, params: &[(&str, f64)], seed: RngSeed) -> Self {
        Self {
            mechanism: mechanism.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            rejections: None,
            warning: None,
            seed,
            generator: GENERATOR.to_string(),
            normal_method: NORMAL_METHOD.to_string(),
            gamma_method: GAMMA_METHOD.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismOutput {
    pub value: Vec<f64>,
    pub noise: Vec<f64>,
    pub meta: MechanismMeta,
}

impl MechanismOutput {
    fn assemble(query: &[f64], noise: Vec<f64>, meta: MechanismMeta) -> Self {
        let value = query.iter().zip(&noise).map(|(q, n)| q + n).collect();
        Self { value, noise, meta }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn check_query(query: &[f64], d: usize) -> Result<()> {
    if query.len() != d {
        return Err(Error::Shape(format!("query has dimension {}, expected {d}", query.len())));
    }
    Ok(())
}

/// `N_d(0, (Δ₂/μ)² P)`, drawn as `P z` with `z ~ N(0, (Δ₂/μ)² I)`.
#[derive(Debug, Clone)]
pub struct ProjectedGaussian {
    pub projection: ProjectionMatrix,
    pub basis: OrthonormalBasis,
    pub scale: f64,
    pub l2_sensitivity: f64,
    pub mu: f64,
}

impl ProjectedGaussian {
    pub fn new(s: &SensitivitySpace, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return domain(format!("mu must be finite and > 0, got {mu}"));
        }
        let l2 = lp_sensitivity(s, Norm::L2)?;
        let basis = span_basis(s, RANK_TOL);
        let projection = projection_matrix(&basis, s.ambient_dim)?;
        Ok(Self {
            projection,
            basis,
            scale: l2 / mu,
            l2_sensitivity: l2,
            mu,
        })
    }

    pub fn dim(&self) -> usize {
        self.projection.rows.len()
    }

    pub fn sample(&self, rng: &mut NoiseRng) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim()).map(|_| self.scale * rng.standard_normal()).collect();
        self.projection.apply(&z)
    }
}

pub fn gaussian_semi(query: &[f64], s: &SensitivitySpace, mu: f64, seed: RngSeed) -> Result<MechanismOutput> {
    check_query(query, s.ambient_dim)?;
    let mech = ProjectedGaussian::new(s, mu)?;
    let mut meta = MechanismMeta::new(
        "gaussian_semi",
        &[("mu", mu), ("l2_sensitivity", mech.l2_sensitivity), ("span_dim", mech.basis.dim() as f64)],
        seed,
    );
    if mech.basis.dim() == 0 {
        meta.warning = Some("sensitivity space is {0}; no noise added".into());
    }
    let noise = mech.sample(&mut seed.rng());
    Ok(MechanismOutput::assemble(query, noise, meta))
}

/// Rejection sampler for the density `∝ exp(−ε‖v‖_K)` on `span(S)`, with
/// `K = hull(S)`, worked in orthonormal coordinates of the span.
#[derive(Debug, Clone)]
pub struct KNormSampler {
    pub basis: OrthonormalBasis,
    /// Hull vertices in basis coordinates.
    pub vertices: Vec<Vec<f64>>,
    /// Half-widths of the bounding box in basis coordinates.
    pub half_widths: Vec<f64>,
    pub epsilon: f64,
    pub gauge_sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KNormDraw {
    /// Radial factor.
    pub radius: f64,
    /// Accepted direction in basis coordinates.
    pub direction: Vec<f64>,
    /// Noise in the ambient space.
    pub noise: Vec<f64>,
    pub rejections: u64,
}

impl KNormSampler {
    pub fn new(s: &SensitivitySpace, epsilon: f64) -> Result<Self> {
        Self::with_gauge_sensitivity(s, epsilon, 1.0)
    }

    /// `gauge_sensitivity` is the sensitivity in the gauge of `hull(S)`,
    /// which is 1 by construction; other values exist for testing.
    pub fn with_gauge_sensitivity(s: &SensitivitySpace, epsilon: f64, gauge_sensitivity: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return domain(format!("epsilon must be finite and > 0, got {epsilon}"));
        }
        if !(gauge_sensitivity > 0.0) {
            return domain("gauge sensitivity must be > 0");
        }
        if s.is_empty() {
            return domain("sensitivity space is empty");
        }
        let basis = span_basis(s, RANK_TOL);
        let vertices: Vec<Vec<f64>> = s.vectors.iter().map(|v| basis.coords(v)).collect();
        let half_widths: Vec<f64> = (0..basis.dim())
            .map(|i| vertices.iter().fold(0.0f64, |m, v| m.max(v[i].abs())))
            .collect();
        debug_assert!(vertices
            .iter()
            .all(|v| v.iter().zip(&half_widths).all(|(x, c)| x.abs() <= *c)));
        Ok(Self {
            basis,
            vertices,
            half_widths,
            epsilon,
            gauge_sensitivity,
        })
    }

    pub fn span_dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn sample(&self, rng: &mut NoiseRng) -> Result<KNormDraw> {
        let s = self.span_dim();
        if s == 0 {
            return Ok(KNormDraw {
                radius: 0.0,
                direction: Vec::new(),
                noise: vec![0.0; self.basis.ambient_dim],
                rejections: 0,
            });
        }
        let radius = rng.gamma(s as f64 + 1.0, self.epsilon / self.gauge_sensitivity)?;
        let mut rejections = 0u64;
        loop {
            let v: Vec<f64> = self.half_widths.iter().map(|&c| rng.uniform_in(-c, c)).collect();
            if lp::in_convex_hull(&self.vertices, &v, HULL_TOL)? {
                let theta: Vec<f64> = v.iter().map(|x| radius * x).collect();
                return Ok(KNormDraw {
                    radius,
                    noise: self.basis.embed(&theta),
                    direction: v,
                    rejections,
                });
            }
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::RejectionCap(rejections));
            }
        }
    }
}

pub fn knorm_optimal(query: &[f64], s: &SensitivitySpace, epsilon: f64, seed: RngSeed) -> Result<MechanismOutput> {
    check_query(query, s.ambient_dim)?;
    let sampler = KNormSampler::new(s, epsilon)?;
    let draw = sampler.sample(&mut seed.rng())?;
    let mut meta = MechanismMeta::new(
        "knorm_optimal",
        &[
            ("epsilon", epsilon),
            ("gauge_sensitivity", sampler.gauge_sensitivity),
            ("span_dim", sampler.span_dim() as f64),
        ],
        seed,
    );
    meta.rejections = Some(draw.rejections);
    if sampler.span_dim() == 0 {
        meta.warning = Some("sensitivity space is {0}; no noise added".into());
    }
    Ok(MechanismOutput::assemble(query, draw.noise, meta))
}

/// The ℓ1 (Laplace), ℓ2 and ℓ∞ mechanisms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpMechanism {
    pub norm: Norm,
    pub sensitivity: f64,
    pub epsilon: f64,
    pub dim: usize,
}

impl LpMechanism {
    pub fn new(norm: Norm, sensitivity: f64, epsilon: f64, dim: usize) -> Result<Self> {
        if !(sensitivity > 0.0 && sensitivity.is_finite()) {
            return domain(format!("sensitivity must be finite and > 0, got {sensitivity}"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return domain(format!("epsilon must be finite and > 0, got {epsilon}"));
        }
        if dim == 0 {
            return domain("dimension must be >= 1");
        }
        Ok(Self {
            norm,
            sensitivity,
            epsilon,
            dim,
        })
    }

    pub fn sample(&self, rng: &mut NoiseRng) -> Result<Vec<f64>> {
        let d = self.dim;
        let rate = self.epsilon / self.sensitivity;
        Ok(match self.norm {
            Norm::L1 => {
                let b = self.sensitivity / self.epsilon;
                (0..d).map(|_| rng.laplace(b)).collect()
            }
            Norm::L2 => {
                let r = rng.gamma(d as f64, rate)?;
                let z: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
                let len = Norm::L2.of(&z);
                z.iter().map(|x| r * x / len).collect()
            }
            Norm::LInf => {
                let r = rng.gamma(d as f64 + 1.0, rate)?;
                (0..d).map(|_| r * rng.uniform_in(-1.0, 1.0)).collect()
            }
        })
    }
}

pub fn lp_mechanism(
    query: &[f64],
    sensitivity: f64,
    epsilon: f64,
    norm: Norm,
    seed: RngSeed,
) -> Result<MechanismOutput> {
    let mech = LpMechanism::new(norm, sensitivity, epsilon, query.len())?;
    let noise = mech.sample(&mut seed.rng())?;
    let meta = MechanismMeta::new(
        &format!("{norm}_mechanism"),
        &[("epsilon", epsilon), ("sensitivity", sensitivity)],
        seed,
    );
    Ok(MechanismOutput::assemble(query, noise, meta))
}

/// ℓp sensitivities of single-record replacement on a contingency table.
pub fn s_dp_sensitivity(norm: Norm) -> f64 {
    match norm {
        Norm::L1 => 2.0,
        Norm::L2 => std::f64::consts::SQRT_2,
        Norm::LInf => 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MechanismKind {
    Gaussian,
    Lp(Norm),
}

/// Baseline that protects groups of size `a` by running a record-level
/// mechanism at a parameter divided by `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NaiveGroupMechanism {
    /// `N(0, (Δ₂ a / μ)² I)`.
    Gaussian { mu: f64, sensitivity: f64, dim: usize },
    Lp(LpMechanism),
}

pub fn naive_group_wrapper(kind: MechanismKind, a: u32, param: f64, dim: usize) -> Result<NaiveGroupMechanism> {
    if a == 0 {
        return domain("group size must be >= 1");
    }
    if !(param > 0.0 && param.is_finite()) {
        return domain(format!("privacy parameter must be finite and > 0, got {param}"));
    }
    let scaled = param / a as f64;
    Ok(match kind {
        MechanismKind::Gaussian => NaiveGroupMechanism::Gaussian {
            mu: scaled,
            sensitivity: s_dp_sensitivity(Norm::L2),
            dim,
        },
        MechanismKind::Lp(norm) => {
            NaiveGroupMechanism::Lp(LpMechanism::new(norm, s_dp_sensitivity(norm), scaled, dim)?)
        }
    })
}

impl NaiveGroupMechanism {
    /// Standard deviation of each Gaussian coordinate, or the Laplace scale.
    pub fn scale(&self) -> f64 {
        match self {
            NaiveGroupMechanism::Gaussian { mu, sensitivity, .. } => sensitivity / mu,
            NaiveGroupMechanism::Lp(m) => m.sensitivity / m.epsilon,
        }
    }

    pub fn sample(&self, rng: &mut NoiseRng) -> Result<Vec<f64>> {
        match self {
            NaiveGroupMechanism::Gaussian { dim, .. } => {
                let sd = self.scale();
                Ok((0..*dim).map(|_| sd * rng.standard_normal()).collect())
            }
            NaiveGroupMechanism::Lp(m) => m.sample(rng),
        }
    }

    pub fn release(&self, query: &[f64], seed: RngSeed) -> Result<MechanismOutput> {
        let dim = match self {
            NaiveGroupMechanism::Gaussian { dim, .. } => *dim,
            NaiveGroupMechanism::Lp(m) => m.dim,
        };
        check_query(query, dim)?;
        let noise = self.sample(&mut seed.rng())?;
        let meta = match self {
            NaiveGroupMechanism::Gaussian { mu, sensitivity, .. } => {
                MechanismMeta::new("naive_gaussian", &[("mu", *mu), ("sensitivity", *sensitivity)], seed)
            }
            NaiveGroupMechanism::Lp(m) => MechanismMeta::new(
                &format!("naive_{}", m.norm),
                &[("epsilon", m.epsilon), ("sensitivity", m.sensitivity)],
                seed,
            ),
        };
        Ok(MechanismOutput::assemble(query, noise, meta))
    }
}
