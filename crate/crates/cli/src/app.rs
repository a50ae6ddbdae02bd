// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and subcommand dispatch for the `semidp` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use semidp_core::cnd::{cnd_sample, CndSpec};
use semidp_core::inference::{run_test, Table2x2};
use semidp_core::mechanisms::{gaussian_semi, knorm_optimal, lp_mechanism, naive_group_wrapper, s_dp_sensitivity, MechanismKind};
use semidp_core::rng::RngSeed;
use semidp_core::sensitivity::{contingency_s_dp, contingency_s_semi, lp_sensitivity, rank, Norm, SensitivitySpace};
use semidp_core::tradeoff::{compose_self, gdp_to_approx_dp, zcdp_group, zcdp_to_approx_dp, TradeoffSpec};

use crate::census::{census_report, CensusBudget};
use crate::experiment::{self, ExperimentConfig, Model, Privacy};
use crate::{parse_counts, parse_list, parse_tradeoff, CliError};

pub const SEED_ENV: &str = "SEMIDP_SEED";

const SUBCOMMANDS: [&str; 7] = ["sens", "mech", "cnd", "test", "experiment", "census", "account"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "semidp", version, about = "Semi-private release, accounting and testing")]
pub struct Cli {
    /// Base RNG seed; SEMIDP_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON object of flag defaults for the subcommand, e.g. {"k": 3, "eps": 0.5}.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensitivity space of an r×c contingency table.
    Sens(SensArgs),
    /// Release a noisy query.
    Mech(MechArgs),
    /// Canonical noise distribution for a tradeoff function.
    Cnd(CndArgs),
    /// Semi-private UMPU test for a 2×2 table.
    Test(TestArgs),
    /// Mean ℓ2 cost of semi-private mechanisms against naive baselines.
    Experiment(ExperimentArgs),
    /// zCDP accounting under a total-population invariant.
    Census(CensusArgs),
    /// Privacy-parameter conversions.
    Account(AccountArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    Semi,
    Dp,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SensArgs {
    #[arg(long, default_value_t = 2)]
    pub rows: usize,
    #[arg(long, default_value_t = 2)]
    pub cols: usize,
    #[arg(long, value_enum, default_value_t = SpaceKind::Semi)]
    pub space: SpaceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechName {
    Gaussian,
    Knorm,
    L1,
    L2,
    Linf,
    NaiveGaussian,
    NaiveL1,
    NaiveL2,
    NaiveLinf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct MechArgs {
    #[arg(long, value_enum)]
    pub mechanism: MechName,
    /// Row-major table counts.
    #[arg(long)]
    pub query: String,
    /// Table rows; the column count is inferred from the query length.
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// ℓp sensitivity override for l1, l2, linf.
    #[arg(long)]
    pub sensitivity: Option<f64>,
    /// Group size for the naive mechanisms.
    #[arg(long, default_value_t = 3)]
    pub group: u32,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CndArgs {
    /// gdp:MU or dp:EPS[,DELTA].
    #[arg(long)]
    pub f: String,
    /// Evaluate the CDF at these points.
    #[arg(long)]
    pub cdf: Option<String>,
    /// Evaluate the quantile at these levels.
    #[arg(long)]
    pub quantile: Option<String>,
    /// Number of samples to draw.
    #[arg(long)]
    pub sample: Option<usize>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct TestArgs {
    /// x11,x12,x21,x22.
    #[arg(long)]
    pub table: String,
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Gaussian,
    Knorm,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    /// Table side lengths, comma-separated.
    #[arg(long, default_value = "2")]
    pub k: String,
    /// Models I and/or II, comma-separated.
    #[arg(long, default_value = "I")]
    pub model: String,
    /// GDP parameters for the Gaussian experiment.
    #[arg(long, default_value = "1")]
    pub mu: String,
    /// Pure-DP parameters for the K-norm experiment.
    #[arg(long, default_value = "0.1,0.5,1")]
    pub eps: String,
    #[arg(long, default_value_t = 500)]
    pub n: u64,
    #[arg(long, default_value_t = 30)]
    pub replicates: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 2.56)]
    pub rho_person: f64,
    #[arg(long, default_value_t = 0.07)]
    pub rho_housing: f64,
    /// Defaults to the sum of the components.
    #[arg(long)]
    pub rho_total: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub delta: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct AccountArgs {
    /// zCDP parameter; converted to (ε, δ) at --delta.
    #[arg(long, conflicts_with = "mu")]
    pub rho: Option<f64>,
    /// GDP parameter; converted to δ at --epsilon.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub group: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
}

/// What a subcommand produced, before formatting.
pub enum Output {
    Json(Value),
    /// Raw CSV text, already formatted.
    Csv(String),
}

/// Parse and run. Returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let mut cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    if let Ok(s) = std::env::var(SEED_ENV) {
        match s.trim().parse() {
            Ok(seed) => cli.seed = seed,
            Err(_) => {
                let _ = writeln!(stderr, "error: {SEED_ENV}={s:?} is not an unsigned integer");
                return 2;
            }
        }
    }
    match run(&cli).and_then(|out| emit(&cli, out, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Splice flags from a `--config` JSON object in right after the subcommand
/// name, so that flags given on the command line still win.
fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = it.next();
            if path.is_none() {
                return Err(CliError::Usage("--config needs a path".into()));
            }
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path)?;
    let Value::Object(map) = serde_json::from_str::<Value>(&text)? else {
        return Err(CliError::Usage("--config must hold a JSON object".into()));
    };
    let pos = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| CliError::Usage("--config needs a subcommand".into()))?;
    let mut extra = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar_text).collect::<Result<_, _>>()?;
                extra.push(flag);
                extra.push(joined.join(","));
            }
            v => {
                extra.push(flag);
                extra.push(scalar_text(&v)?);
            }
        }
    }
    rest.splice(pos + 1..pos + 1, extra.into_iter().map(OsString::from));
    Ok(rest)
}

fn scalar_text(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CliError::Usage(format!("unsupported config value {other}"))),
    }
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = match (out, cli.format) {
        (Output::Csv(s), None | Some(Format::Csv)) => s,
        (Output::Csv(_), Some(Format::Json)) => unreachable!("CSV outputs are produced only when JSON was not requested"),
        (Output::Json(v), None | Some(Format::Json)) => serde_json::to_string_pretty(&v)? + "\n",
        (Output::Json(v), Some(Format::Csv)) => json_to_csv(&v)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Flat objects become one row; arrays of flat objects become one row each.
fn json_to_csv(v: &Value) -> Result<String, CliError> {
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Object(m) => vec![m],
        Value::Array(items) => items
            .iter()
            .map(|x| x.as_object().ok_or_else(not_tabular))
            .collect::<Result<_, _>>()?,
        _ => return Err(not_tabular()),
    };
    let header: Vec<&String> = rows.first().map(|m| m.keys().collect()).unwrap_or_default();
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(&header)?;
    for row in rows {
        let cells = header
            .iter()
            .map(|k| match row.get(*k) {
                None | Some(Value::Null) => Ok(String::new()),
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => Ok(n.to_string()),
                Some(Value::Bool(b)) => Ok(b.to_string()),
                Some(_) => Err(not_tabular()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        wr.write_record(&cells)?;
    }
    let bytes = wr.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

fn not_tabular() -> CliError {
    CliError::Usage("this output is nested; use --format json".into())
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let seed = RngSeed::new(cli.seed, 0);
    let want_json = cli.format == Some(Format::Json);
    match &cli.command {
        Command::Sens(a) => sens(a, want_json),
        Command::Mech(a) => mech(a, seed),
        Command::Cnd(a) => cnd(a, seed),
        Command::Test(a) => test(a, seed),
        Command::Experiment(a) => run_experiment(a, cli.seed, want_json),
        Command::Census(a) => {
            let budget = CensusBudget::new(a.rho_person, a.rho_housing, a.rho_total, a.delta)?;
            Ok(Output::Json(serde_json::to_value(census_report(&budget)?)?))
        }
        Command::Account(a) => account(a),
    }
}

fn sens(a: &SensArgs, want_json: bool) -> Result<Output, CliError> {
    let s: SensitivitySpace = match a.space {
        SpaceKind::Semi => contingency_s_semi(a.rows, a.cols)?,
        SpaceKind::Dp => contingency_s_dp(a.rows, a.cols)?,
    };
    if !want_json {
        let mut buf = Vec::new();
        s.write_csv(&mut buf)?;
        return Ok(Output::Csv(String::from_utf8(buf).expect("csv writer emits utf-8")));
    }
    Ok(Output::Json(json!({
        "rows": a.rows,
        "cols": a.cols,
        "space": format!("{:?}", a.space).to_lowercase(),
        "count": s.len(),
        "rank": rank(&s.vectors, s.ambient_dim),
        "delta_l1": lp_sensitivity(&s, Norm::L1)?,
        "delta_l2": lp_sensitivity(&s, Norm::L2)?,
        "delta_linf": lp_sensitivity(&s, Norm::LInf)?,
        "vectors": s.vectors,
    })))
}

fn table_shape(len: usize, rows: Option<usize>) -> Result<(usize, usize), CliError> {
    let r = match rows {
        Some(r) => r,
        None => {
            let k = (len as f64).sqrt().round() as usize;
            if k * k != len {
                return Err(CliError::Usage(format!("query of length {len} is not square; pass --rows")));
            }
            k
        }
    };
    if r == 0 || !len.is_multiple_of(r) {
        return Err(CliError::Usage(format!("query of length {len} does not have {r} rows")));
    }
    Ok((r, len / r))
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("this mechanism needs --{flag}")))
}

fn mech(a: &MechArgs, seed: RngSeed) -> Result<Output, CliError> {
    let query = parse_list(&a.query)?;
    let d = query.len();
    let lp = |norm: Norm| -> Result<_, CliError> {
        let sens = a.sensitivity.unwrap_or(s_dp_sensitivity(norm));
        Ok(lp_mechanism(&query, sens, need(a.eps, "eps")?, norm, seed)?)
    };
    let naive = |kind: MechanismKind, flag: &str, param: Option<f64>| -> Result<_, CliError> {
        Ok(naive_group_wrapper(kind, a.group, need(param, flag)?, d)?.release(&query, seed)?)
    };
    let out = match a.mechanism {
        MechName::Gaussian => {
            let (r, c) = table_shape(d, a.rows)?;
            gaussian_semi(&query, &contingency_s_semi(r, c)?, need(a.mu, "mu")?, seed)?
        }
        MechName::Knorm => {
            let (r, c) = table_shape(d, a.rows)?;
            knorm_optimal(&query, &contingency_s_semi(r, c)?, need(a.eps, "eps")?, seed)?
        }
        MechName::L1 => lp(Norm::L1)?,
        MechName::L2 => lp(Norm::L2)?,
        MechName::Linf => lp(Norm::LInf)?,
        MechName::NaiveGaussian => naive(MechanismKind::Gaussian, "mu", a.mu)?,
        MechName::NaiveL1 => naive(MechanismKind::Lp(Norm::L1), "eps", a.eps)?,
        MechName::NaiveL2 => naive(MechanismKind::Lp(Norm::L2), "eps", a.eps)?,
        MechName::NaiveLinf => naive(MechanismKind::Lp(Norm::LInf), "eps", a.eps)?,
    };
    Ok(Output::Json(serde_json::to_value(out)?))
}

fn tradeoff_fields(f: &TradeoffSpec) -> Result<(Value, Value), CliError> {
    let v = serde_json::to_value(f)?;
    Ok((v["family"].clone(), v["params"].clone()))
}

fn cnd(a: &CndArgs, seed: RngSeed) -> Result<Output, CliError> {
    let f = parse_tradeoff(&a.f)?;
    let spec = CndSpec::new(f.clone())?;
    let (family, params) = tradeoff_fields(&f)?;
    let mut obj = json!({ "f_family": family, "params": params, "c": spec.c });
    if let Some(xs) = &a.cdf {
        let xs = parse_list(xs)?;
        obj["cdf"] = json!(xs.iter().map(|&x| json!({"x": x, "F": spec.cdf(x)})).collect::<Vec<_>>());
    }
    if let Some(us) = &a.quantile {
        let pts = parse_list(us)?
            .into_iter()
            .map(|u| Ok(json!({"u": u, "quantile": spec.quantile(u)?})))
            .collect::<Result<Vec<_>, CliError>>()?;
        obj["quantile"] = json!(pts);
    }
    if let Some(n) = a.sample {
        obj["sample"] = json!(cnd_sample(&spec, seed, n)?);
        obj["seed"] = serde_json::to_value(seed)?;
    }
    Ok(Output::Json(obj))
}

fn test(a: &TestArgs, seed: RngSeed) -> Result<Output, CliError> {
    let counts = parse_counts(&a.table)?;
    let [x11, x12, x21, x22] = counts[..] else {
        return Err(CliError::Usage(format!("--table needs four counts, got {}", counts.len())));
    };
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    let f = parse_tradeoff(&a.f)?;
    let spec = CndSpec::new(f.clone())?;
    let result = run_test(&Table2x2::new(x11, x12, x21, x22), &spec, a.alpha, seed)?;
    let mut v = serde_json::to_value(result)?;
    let (family, params) = tradeoff_fields(&f)?;
    v["f_family"] = family;
    v["params"] = params;
    Ok(Output::Json(v))
}

fn run_experiment(a: &ExperimentArgs, base_seed: u64, want_json: bool) -> Result<Output, CliError> {
    let ks: Vec<usize> = parse_counts(&a.k)?.into_iter().map(|k| k as usize).collect();
    let models: Vec<Model> = a.model.split(',').map(|m| m.trim().parse()).collect::<Result<_, _>>()?;
    let params = match a.kind {
        ExperimentKind::Gaussian => parse_list(&a.mu)?,
        ExperimentKind::Knorm => parse_list(&a.eps)?,
    };
    let mut rows = Vec::new();
    for &k in &ks {
        for &model in &models {
            for &p in &params {
                let privacy = match a.kind {
                    ExperimentKind::Gaussian => Privacy::Gdp { mu: p },
                    ExperimentKind::Knorm => Privacy::Pure { epsilon: p },
                };
                let cfg = ExperimentConfig {
                    k,
                    n: a.n,
                    model,
                    privacy,
                    replicates: a.replicates,
                    seed: RngSeed::new(base_seed, 0),
                };
                rows.extend(match a.kind {
                    ExperimentKind::Gaussian => experiment::run_gaussian_experiment(&cfg)?,
                    ExperimentKind::Knorm => experiment::run_knorm_experiment(&cfg)?,
                });
            }
        }
    }
    if want_json {
        return Ok(Output::Json(serde_json::to_value(rows)?));
    }
    let mut buf = Vec::new();
    experiment::write_csv(&rows, &mut buf)?;
    Ok(Output::Csv(String::from_utf8(buf).expect("csv writer emits utf-8")))
}

fn account(a: &AccountArgs) -> Result<Output, CliError> {
    match (a.rho, a.mu) {
        (Some(rho), None) => {
            let grouped = zcdp_group(rho, a.group)?;
            Ok(Output::Json(json!({
                "rho": rho,
                "group": a.group,
                "group_rho": grouped,
                "delta": a.delta,
                "epsilon": zcdp_to_approx_dp(grouped, a.delta)?,
            })))
        }
        (None, Some(mu)) => {
            let grouped = compose_self(&TradeoffSpec::gaussian(mu)?, a.group)?
                .as_gdp()
                .expect("group privacy keeps GDP closed");
            Ok(Output::Json(json!({
                "mu": mu,
                "group": a.group,
                "group_mu": grouped,
                "epsilon": a.epsilon,
                "delta": gdp_to_approx_dp(grouped, a.epsilon)?,
            })))
        }
        _ => Err(CliError::Usage("account needs exactly one of --rho or --mu".into())),
    }
}
