// SPDX-License-Identifier: Apache-2.0

//! Experiment harness and Census accounting on top of `semidp-core`.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod census;
pub mod experiment;

use semidp_core::tradeoff::TradeoffSpec;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] semidp_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Parse `gdp:MU`, `dp:EPS` or `dp:EPS,DELTA`.
pub fn parse_tradeoff(s: &str) -> Result<TradeoffSpec, CliError> {
    let (family, params) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected FAMILY:PARAMS, got {s:?}")))?;
    let nums = parse_list(params)?;
    let spec = match (family, nums.as_slice()) {
        ("gdp", [mu]) => TradeoffSpec::gaussian(*mu)?,
        ("dp", [eps]) => TradeoffSpec::exact(*eps, 0.0)?,
        ("dp", [eps, delta]) => TradeoffSpec::exact(*eps, *delta)?,
        _ => return Err(CliError::Usage(format!("unknown tradeoff {s:?}; use gdp:MU or dp:EPS[,DELTA]"))),
    };
    Ok(spec)
}

/// Comma-separated floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("not a number: {x:?}")))
        })
        .collect()
}

/// Comma-separated non-negative integers.
pub fn parse_counts(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("not a count: {x:?}")))
        })
        .collect()
}
