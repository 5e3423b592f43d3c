//! Batch property suites over seeded ensembles.
//!
//! Three suites run for every `(dim, trial)`:
//! - `minimax`: duality gap on a Ginibre pair,
//! - `agreement`: definitional vs witness route on a Ginibre pair,
//! - `witness`: witness quality on a constructed orthogonal pair.
//!
//! Each trial owns the substream `mix_seed(seed, dim, trial)`, so results do
//! not depend on execution order and any record can be replayed alone.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decision::{decide, DecisionOpts, Status, WitnessRoute, DEFAULT_DECISION_TOL};
use crate::ensemble::{gen_ginibre, gen_orthogonal_pair, mix_seed};
use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use crate::minimax::{minimax_report, MinimaxOpts, DEFAULT_GAP_TOL, DEFAULT_RESTARTS};
use crate::spectral::operator_norm;
use crate::witness::WitnessOpts;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub decision_tol: f64,
    pub gap_tol: f64,
    /// Relative: residuals are compared against `witness_eps·‖A‖` and
    /// `witness_eps·‖A‖‖B‖`.
    pub witness_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            decision_tol: DEFAULT_DECISION_TOL,
            gap_tol: DEFAULT_GAP_TOL,
            witness_eps: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    pub field: Field,
    pub tolerances: Tolerances,
    pub restarts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            dims: vec![2, 3, 4, 5, 6],
            trials_per_dim: 40,
            seed: 0,
            field: Field::Complex,
            tolerances: Tolerances::default(),
            restarts: DEFAULT_RESTARTS,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidInput("suite needs at least one dim".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(Error::Unsupported { dim: d, min: 2 });
        }
        if self.trials_per_dim == 0 {
            return Err(Error::InvalidInput("trials_per_dim must be ≥ 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be ≥ 1".into()));
        }
        let t = &self.tolerances;
        if !(t.decision_tol > 0.0 && t.gap_tol > 0.0 && t.witness_eps > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<SuiteConfig> {
        let cfg: SuiteConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Minimax,
    Agreement,
    Witness,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 3] = [SuiteKind::Minimax, SuiteKind::Agreement, SuiteKind::Witness];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteKind::Minimax => "minimax",
            SuiteKind::Agreement => "agreement",
            SuiteKind::Witness => "witness",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SuiteKind::Minimax => 1,
            SuiteKind::Agreement => 2,
            SuiteKind::Witness => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub suite: SuiteKind,
    pub dim: usize,
    pub trial: usize,
    pub trial_seed: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// Relative minimax gap `(rhs − lhs)/max(rhs, 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    /// `max(norm_residual/‖A‖, ip_residual/(‖A‖‖B‖))`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub record: TrialRecord,
    pub a: Value,
    pub b: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteAggregate {
    pub suite: Option<SuiteKind>,
    pub trials: usize,
    pub passed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_witness_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreements: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub suite: SuiteKind,
    pub dim: usize,
    pub trial: usize,
    pub millis: f64,
}

/// Full suite output. Everything except `runtimes` is a deterministic
/// function of the config.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: SuiteConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<SuiteAggregate>,
    pub failures: Vec<FailureRecord>,
    pub runtimes: Vec<Runtime>,
}

#[derive(Serialize)]
struct DeterministicView<'a> {
    schema_version: u32,
    config: &'a SuiteConfig,
    records: &'a [TrialRecord],
    aggregates: &'a [SuiteAggregate],
    failures: &'a [FailureRecord],
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// JSON without the runtime section; byte-identical across runs.
    pub fn deterministic_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DeterministicView {
            schema_version: self.schema_version,
            config: &self.config,
            records: &self.records,
            aggregates: &self.aggregates,
            failures: &self.failures,
        })?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per trial record.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "dim",
            "trial",
            "suite",
            "verdict",
            "margin",
            "gap",
            "witness_residual",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.dim.to_string(),
                r.trial.to_string(),
                r.suite.as_str().to_string(),
                r.verdict.map(|s| s.as_str().to_string()).unwrap_or_default(),
                opt(r.margin),
                opt(r.gap),
                opt(r.witness_residual),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Matrices used by one trial.
pub fn trial_inputs(config: &SuiteConfig, suite: SuiteKind, dim: usize, trial: usize) -> Result<(Matrix, Matrix)> {
    let s = trial_seed(config, dim, trial);
    let sub = |k: u64| mix_seed(&[s, suite.tag(), k]);
    match suite {
        SuiteKind::Minimax | SuiteKind::Agreement => Ok((
            gen_ginibre(dim, sub(1), config.field)?,
            gen_ginibre(dim, sub(2), config.field)?,
        )),
        SuiteKind::Witness => gen_orthogonal_pair(dim, sub(1), config.field),
    }
}

pub fn trial_seed(config: &SuiteConfig, dim: usize, trial: usize) -> u64 {
    mix_seed(&[config.seed, dim as u64, trial as u64])
}

/// Runs a single trial. Identical arguments give identical records.
pub fn run_trial(config: &SuiteConfig, suite: SuiteKind, dim: usize, trial: usize) -> TrialRecord {
    let seed = trial_seed(config, dim, trial);
    let mut rec = TrialRecord {
        suite,
        dim,
        trial,
        trial_seed: seed,
        pass: false,
        verdict: None,
        margin: None,
        gap: None,
        witness_residual: None,
        routes_agree: None,
        error: None,
    };
    if let Err(e) = fill_trial(config, &mut rec) {
        rec.pass = false;
        rec.error = Some(e.to_string());
    }
    rec
}

fn fill_trial(config: &SuiteConfig, rec: &mut TrialRecord) -> Result<()> {
    let tol = &config.tolerances;
    let (a, b) = trial_inputs(config, rec.suite, rec.dim, rec.trial)?;
    let decision_opts = DecisionOpts {
        tol: tol.decision_tol,
        witness: WitnessOpts {
            seed: rec.trial_seed,
            ..WitnessOpts::default()
        },
    };
    match rec.suite {
        SuiteKind::Minimax => {
            let report = minimax_report(
                &a,
                &b,
                &MinimaxOpts {
                    restarts: config.restarts,
                    seed: rec.trial_seed,
                    gap_tol: tol.gap_tol,
                    ..MinimaxOpts::default()
                },
            )?;
            let gap = report.relative_gap();
            rec.gap = Some(gap);
            rec.pass = gap <= tol.gap_tol;
        }
        SuiteKind::Agreement => {
            let d = decide(&a, &b, &decision_opts)?;
            rec.verdict = Some(d.status);
            rec.margin = Some(d.margin);
            rec.routes_agree = Some(d.agree);
            rec.pass = d.agree || d.margin.abs() <= 10.0 * tol.decision_tol;
        }
        SuiteKind::Witness => {
            let d = decide(&a, &b, &decision_opts)?;
            rec.verdict = Some(d.status);
            rec.margin = Some(d.margin);
            rec.routes_agree = Some(d.agree);
            let norm_a = operator_norm(&a);
            let norm_b = operator_norm(&b);
            match &d.witness {
                WitnessRoute::Found(w) => {
                    let rel = (w.norm_residual / norm_a).max(w.ip_residual / (norm_a * norm_b));
                    rec.witness_residual = Some(rel);
                    rec.pass = rel <= tol.witness_eps && d.status == Status::Orthogonal && d.agree;
                }
                _ => rec.pass = false,
            }
        }
    }
    Ok(())
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

fn aggregate(suite: SuiteKind, records: &[TrialRecord]) -> SuiteAggregate {
    let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.suite == suite).collect();
    let gaps: Vec<f64> = rs.iter().filter_map(|r| r.gap).collect();
    let residuals: Vec<f64> = rs.iter().filter_map(|r| r.witness_residual).collect();
    SuiteAggregate {
        suite: Some(suite),
        trials: rs.len(),
        passed: rs.iter().filter(|r| r.pass).count(),
        max_gap: gaps.iter().copied().reduce(f64::max),
        median_gap: median(gaps),
        max_witness_residual: residuals.iter().copied().reduce(f64::max),
        disagreements: (suite != SuiteKind::Minimax)
            .then(|| rs.iter().filter(|r| r.routes_agree == Some(false)).count()),
    }
}

/// Runs every suite on every `(dim, trial)` in parallel and assembles the
/// report in `(dim, trial, suite)` order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let jobs: Vec<(usize, usize, SuiteKind)> = config
        .dims
        .iter()
        .flat_map(|&d| {
            (0..config.trials_per_dim)
                .flat_map(move |t| SuiteKind::ALL.into_iter().map(move |s| (d, t, s)))
        })
        .collect();
    let results: Vec<(TrialRecord, f64)> = jobs
        .par_iter()
        .map(|&(dim, trial, suite)| {
            let start = Instant::now();
            let rec = run_trial(config, suite, dim, trial);
            (rec, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut runtimes = Vec::with_capacity(results.len());
    for (rec, millis) in results {
        runtimes.push(Runtime {
            suite: rec.suite,
            dim: rec.dim,
            trial: rec.trial,
            millis,
        });
        records.push(rec);
    }
    let mut failures = Vec::new();
    for rec in records.iter().filter(|r| !r.pass) {
        let (a, b) = trial_inputs(config, rec.suite, rec.dim, rec.trial)?;
        failures.push(FailureRecord {
            record: rec.clone(),
            a: a.to_json(),
            b: b.to_json(),
        });
    }
    let aggregates = SuiteKind::ALL
        .iter()
        .map(|&s| aggregate(s, &records))
        .collect();
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        records,
        aggregates,
        failures,
        runtimes,
    })
}
