// SPDX-License-Identifier: Apache-2.0

//! Mean ℓ2 cost of semi-private mechanisms against naive group-privacy
//! baselines on a fixed k×k table.
//!
//! The table is drawn once from the model on stream 0; replicate `r` draws
//! all of its noise from stream `r + 1`, so results do not depend on how
//! replicates are scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;

use semidp_core::dataspace::semi_adjacent_bound;
use semidp_core::diagnostics::mean_se;
use semidp_core::mechanisms::{naive_group_wrapper, KNormSampler, MechanismKind, ProjectedGaussian};
use semidp_core::rng::RngSeed;
use semidp_core::sensitivity::{contingency_s_semi, Norm};

use crate::CliError;

pub const CSV_HEADER: [&str; 6] = ["k", "model", "method", "param", "mean_l2", "se"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Uniform cell probabilities.
    I,
    /// Cell `i` (1-based, row-major) has probability proportional to `i`.
    II,
}

impl Model {
    pub fn probabilities(self, k: usize) -> Vec<f64> {
        let cells = k * k;
        match self {
            Model::I => vec![1.0 / cells as f64; cells],
            Model::II => {
                let total = (cells * (cells + 1) / 2) as f64;
                (1..=cells).map(|i| i as f64 / total).collect()
            }
        }
    }
}

impl FromStr for Model {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "I" | "1" => Ok(Model::I),
            "II" | "2" => Ok(Model::II),
            other => Err(CliError::Usage(format!("unknown model {other:?}; use I or II"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::I => "I",
            Model::II => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Privacy {
    Gdp { mu: f64 },
    Pure { epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n: u64,
    pub model: Model,
    pub privacy: Privacy,
    pub replicates: usize,
    pub seed: RngSeed,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.k < 2 {
            return Err(CliError::Usage(format!("k must be >= 2, got {}", self.k)));
        }
        if self.n == 0 {
            return Err(CliError::Usage("n must be >= 1".into()));
        }
        if self.replicates == 0 {
            return Err(CliError::Usage("replicates must be >= 1".into()));
        }
        Ok(())
    }

    /// The fixed table for this configuration, row-major.
    pub fn table(&self) -> Vec<f64> {
        let mut rng = self.seed.with_stream(0).rng();
        rng.multinomial(self.n, &self.model.probabilities(self.k))
            .into_iter()
            .map(|c| c as f64)
            .collect()
    }

    fn replicate_seed(&self, r: usize) -> RngSeed {
        self.seed.with_stream(r as u64 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub k: usize,
    pub model: Model,
    pub method: String,
    pub param: f64,
    pub mean_l2: f64,
    pub se: f64,
}

fn l2_cost(table: &[f64], released: &[f64]) -> f64 {
    let diff: Vec<f64> = released.iter().zip(table).map(|(a, b)| a - b).collect();
    Norm::L2.of(&diff)
}

fn summarise(cfg: &ExperimentConfig, param: f64, names: &[&str], costs: &[Vec<f64>]) -> Vec<ExperimentRow> {
    names
        .iter()
        .enumerate()
        .map(|(m, name)| {
            let column: Vec<f64> = costs.iter().map(|c| c[m]).collect();
            let (mean_l2, se) = mean_se(&column);
            ExperimentRow {
                k: cfg.k,
                model: cfg.model,
                method: name.to_string(),
                param,
                mean_l2,
                se,
            }
        })
        .collect()
}

/// Projected Gaussian on the semi-private sensitivity space against a
/// Gaussian mechanism run at `μ / a` on record-level sensitivity.
pub fn run_gaussian_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, CliError> {
    cfg.validate()?;
    let Privacy::Gdp { mu } = cfg.privacy else {
        return Err(CliError::Usage("the Gaussian experiment needs a GDP parameter".into()));
    };
    let d = cfg.k * cfg.k;
    let table = cfg.table();
    let semi = ProjectedGaussian::new(&contingency_s_semi(cfg.k, cfg.k)?, mu)?;
    let a = semi_adjacent_bound(2) as u32;
    let naive = naive_group_wrapper(MechanismKind::Gaussian, a, mu, d)?;

    let costs = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.replicate_seed(r).rng();
            let s = semi.sample(&mut rng);
            let n = naive.sample(&mut rng)?;
            let released_s: Vec<f64> = table.iter().zip(&s).map(|(q, z)| q + z).collect();
            let released_n: Vec<f64> = table.iter().zip(&n).map(|(q, z)| q + z).collect();
            Ok(vec![l2_cost(&table, &released_s), l2_cost(&table, &released_n)])
        })
        .collect::<Result<Vec<_>, semidp_core::Error>>()?;
    Ok(summarise(cfg, mu, &["semi", "naive"], &costs))
}

/// Optimal K-norm mechanism against the ℓ1, ℓ2 and ℓ∞ mechanisms at `ε / a`
/// on record-level sensitivities.
pub fn run_knorm_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, CliError> {
    cfg.validate()?;
    let Privacy::Pure { epsilon } = cfg.privacy else {
        return Err(CliError::Usage("the K-norm experiment needs a pure-DP parameter".into()));
    };
    let d = cfg.k * cfg.k;
    let table = cfg.table();
    let knorm = KNormSampler::new(&contingency_s_semi(cfg.k, cfg.k)?, epsilon)?;
    let a = semi_adjacent_bound(2) as u32;
    let naive = [Norm::L1, Norm::L2, Norm::LInf]
        .iter()
        .map(|&p| naive_group_wrapper(MechanismKind::Lp(p), a, epsilon, d))
        .collect::<Result<Vec<_>, _>>()?;

    let costs = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.replicate_seed(r).rng();
            let mut out = Vec::with_capacity(4);
            let k = knorm.sample(&mut rng)?;
            let released: Vec<f64> = table.iter().zip(&k.noise).map(|(q, z)| q + z).collect();
            out.push(l2_cost(&table, &released));
            for m in &naive {
                let z = m.sample(&mut rng)?;
                let released: Vec<f64> = table.iter().zip(&z).map(|(q, z)| q + z).collect();
                out.push(l2_cost(&table, &released));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, semidp_core::Error>>()?;
    Ok(summarise(
        cfg,
        epsilon,
        &["knorm", "naive_l1", "naive_l2", "naive_linf"],
        &costs,
    ))
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in rows {
        wr.write_record([
            r.k.to_string(),
            r.model.to_string(),
            r.method.clone(),
            r.param.to_string(),
            r.mean_l2.to_string(),
            r.se.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(k: usize, model: Model, privacy: Privacy) -> ExperimentConfig {
        ExperimentConfig {
            k,
            n: 500,
            model,
            privacy,
            replicates: 30,
            seed: RngSeed::new(7, 0),
        }
    }

    #[test]
    fn model_probabilities() {
        let p = Model::II.probabilities(2);
        assert_eq!(p, vec![0.1, 0.2, 0.3, 0.4]);
        assert!((Model::I.probabilities(3).iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn table_sums_to_n() {
        let c = cfg(4, Model::II, Privacy::Gdp { mu: 1.0 });
        assert_eq!(c.table().iter().sum::<f64>(), 500.0);
        assert_eq!(c.table(), c.table());
    }

    #[test]
    fn gaussian_rows() {
        let rows = run_gaussian_experiment(&cfg(3, Model::I, Privacy::Gdp { mu: 1.0 })).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].method, "semi");
        assert!(rows[0].mean_l2 < rows[1].mean_l2);
    }

    #[test]
    fn large_mu_means_small_cost() {
        for k in [2, 5] {
            let rows = run_gaussian_experiment(&cfg(k, Model::II, Privacy::Gdp { mu: 1e3 })).unwrap();
            assert!(rows.iter().all(|r| r.mean_l2 < 0.05));
        }
    }

    #[test]
    fn wrong_privacy_kind_is_usage_error() {
        let err = run_knorm_experiment(&cfg(2, Model::I, Privacy::Gdp { mu: 1.0 })).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn csv_header() {
        let rows = run_knorm_experiment(&cfg(2, Model::I, Privacy::Pure { epsilon: 0.5 })).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "k,model,method,param,mean_l2,se");
        assert_eq!(text.lines().count(), 5);
    }
}
