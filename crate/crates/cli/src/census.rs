// SPDX-License-Identifier: Apache-2.0

//! zCDP accounting for a release whose total population counts are held
//! invariant.
//!
//! With one invariant count, replacing one person's record while staying in
//! the invariant-conforming set can take two record changes, so a `ρ`-zCDP
//! guarantee over record-level neighbours becomes `4ρ`-zCDP over the pairs
//! the mechanism actually has to protect.

use serde::{Deserialize, Serialize};

use semidp_core::dataspace::semi_adjacent_bound;
use semidp_core::tradeoff::{zcdp_group, zcdp_to_approx_dp};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusBudget {
    pub total_rho: f64,
    /// `(name, ρ)` per component table family.
    pub components: Vec<(String, f64)>,
    pub invariants: Vec<String>,
    pub delta: f64,
}

impl CensusBudget {
    pub fn new(rho_person: f64, rho_housing: f64, total_rho: Option<f64>, delta: f64) -> Result<Self, CliError> {
        let total = total_rho.unwrap_or(rho_person + rho_housing);
        let b = Self {
            total_rho: total,
            components: vec![("persons".into(), rho_person), ("housing_units".into(), rho_housing)],
            invariants: vec!["total population per geographic unit".into()],
            delta,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.components.iter().any(|(_, r)| !(*r >= 0.0)) || !(self.total_rho >= 0.0) {
            return Err(CliError::Usage("rho values must be >= 0".into()));
        }
        let sum: f64 = self.components.iter().map(|(_, r)| r).sum();
        if sum > self.total_rho + 1e-12 {
            return Err(CliError::Usage(format!(
                "component rho sum {sum} exceeds total {}",
                self.total_rho
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::Usage(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZcdpStatement {
    pub dataspace: String,
    pub adjacency_radius: usize,
    pub rho: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub name: String,
    pub advertised: ZcdpStatement,
    pub semi_adjacent_parameter: usize,
    pub effective: ZcdpStatement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub delta: f64,
    pub invariants: Vec<String>,
    pub components: Vec<ComponentReport>,
    pub total: ComponentReport,
}

fn component(name: &str, rho: f64, delta: f64) -> Result<ComponentReport, CliError> {
    let a = semi_adjacent_bound(1);
    let grown = zcdp_group(rho, a as u32)?;
    Ok(ComponentReport {
        name: name.to_string(),
        advertised: ZcdpStatement {
            dataspace: "D".into(),
            adjacency_radius: 1,
            rho,
            epsilon: zcdp_to_approx_dp(rho, delta)?,
        },
        semi_adjacent_parameter: a,
        effective: ZcdpStatement {
            dataspace: "D_t".into(),
            adjacency_radius: a,
            rho: grown,
            epsilon: zcdp_to_approx_dp(grown, delta)?,
        },
    })
}

pub fn census_report(budget: &CensusBudget) -> Result<CensusReport, CliError> {
    budget.validate()?;
    let components = budget
        .components
        .iter()
        .map(|(n, r)| component(n, *r, budget.delta))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CensusReport {
        delta: budget.delta,
        invariants: budget.invariants.clone(),
        components,
        total: component("total", budget.total_rho, budget.delta)?,
    })
}
