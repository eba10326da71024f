//! Monte Carlo experiment runner.
//!
//! One trial: draw a fresh graph, vectorize, encode with sender noise,
//! run the composite attack, majority-decode, score. Trials are independent
//! and parallelized; every trial derives its graph/sender/attacker streams
//! from `(base_seed, trial_index, k, role)`, so results are byte-identical
//! regardless of worker count and any single trial can be replayed alone.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use graphshield_core::adversary::{attack_composite, AttackSpec};
use graphshield_core::codec::{decode, encode, NoiseSpec};
use graphshield_core::empirics::{self, ErrorSample, SampleMeta};
use graphshield_core::graph::{vectorize, GraphModel};
use graphshield_core::{RngSeed, StreamRole};

use crate::error::{Error, Result};
use crate::formats::format_sig;

fn default_kde_h() -> f64 {
    0.005
}

fn default_true() -> bool {
    true
}

/// Declarative experiment description; JSON mirrors these field names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph_model: GraphModelConfig,
    pub num_vertices: usize,
    pub nu: f64,
    pub attack: AttackConfig,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: SeedConfig,
    #[serde(default = "default_kde_h")]
    pub kde_h: f64,
    #[serde(default)]
    pub rho_grid: GridConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphModelConfig {
    Er { p: f64 },
    Ba { m: usize },
}

impl GraphModelConfig {
    pub fn to_model(self) -> GraphModel {
        match self {
            GraphModelConfig::Er { p } => GraphModel::ErdosRenyi { edge_prob: p },
            GraphModelConfig::Ba { m } => GraphModel::BarabasiAlbert { attach: m },
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    pub beta: f64,
    pub targeted: bool,
    #[serde(default = "default_true")]
    pub targeted_first: bool,
}

impl AttackConfig {
    pub fn to_spec(self) -> Result<AttackSpec> {
        let spec = AttackSpec::new(self.beta, self.targeted)?;
        Ok(if self.targeted_first {
            spec
        } else {
            spec.with_random_first()
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SeedConfig {
    pub seed: u64,
    #[serde(default)]
    pub stream_id: u64,
}

impl SeedConfig {
    pub fn to_seed(self) -> RngSeed {
        RngSeed::new(self.seed, self.stream_id)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            start: 0.0,
            end: empirics::DEFAULT_GRID_END,
            points: empirics::DEFAULT_GRID_POINTS,
        }
    }
}

impl GridConfig {
    pub fn to_grid(self) -> Vec<f64> {
        empirics::linear_grid(self.start, self.end, self.points)
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vertices < 2 {
            return Err(Error::Config("num_vertices must be at least 2".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.k_values.is_empty() {
            return Err(Error::Config("k_values must be nonempty".into()));
        }
        for &k in &self.k_values {
            if k < 2 || k % 2 != 0 {
                return Err(Error::Config(format!(
                    "k_values entry {k} must be even and >= 2"
                )));
            }
        }
        if self.kde_h <= 0.0 {
            return Err(Error::Config("kde_h must be positive".into()));
        }
        if self.rho_grid.points == 0 {
            return Err(Error::Config("rho_grid.points must be positive".into()));
        }
        NoiseSpec::new(self.nu)?;
        self.attack.to_spec()?;
        match self.graph_model {
            GraphModelConfig::Er { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Config(format!(
                        "edge probability {p} outside [0, 1]"
                    )));
                }
            }
            GraphModelConfig::Ba { m } => {
                if m == 0 || m >= self.num_vertices {
                    return Err(Error::Config(format!(
                        "attachment count {m} must be in [1, num_vertices)"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one decoded transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub k_copies: usize,
    /// Normalized ℓ₁ distance between decoded and original edge vectors.
    pub error: f64,
    pub p_hat: f64,
    pub mu_hat: f64,
    /// Base seed the derived streams were built from.
    pub seed: u64,
}

/// Deterministic single trial: fresh graph, encode, attack, decode, score.
pub fn run_trial(
    cfg: &ExperimentConfig,
    k_copies: usize,
    trial_index: usize,
) -> Result<TrialRecord> {
    let base = cfg.base_seed.to_seed();
    let trial = trial_index as u64;
    let k64 = k_copies as u64;

    let graph = cfg
        .graph_model
        .to_model()
        .generate(cfg.num_vertices, base.derive(trial, k64, StreamRole::Graph))?;
    let source = vectorize(&graph);
    let noise = NoiseSpec::new(cfg.nu)?;
    let sent = encode(
        &source,
        k_copies,
        &noise,
        base.derive(trial, k64, StreamRole::Sender),
    )?;
    let spec = cfg.attack.to_spec()?;
    let received = attack_composite(
        &sent,
        &spec,
        cfg.num_vertices,
        base.derive(trial, k64, StreamRole::Attacker),
    )?;
    let report = decode(&received);
    let error = report.error_against(&source)?;
    Ok(TrialRecord {
        trial_index,
        k_copies,
        error,
        p_hat: report.p_hat(),
        mu_hat: report.mu_hat(),
        seed: base.seed,
    })
}

/// Aggregates for one copy count.
#[derive(Debug, Clone, Serialize)]
pub struct KSummary {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    pub mean_error: Option<f64>,
    pub q50: Option<f64>,
    pub q90: Option<f64>,
    pub q99: Option<f64>,
    pub mean_p_hat: Option<f64>,
    pub mean_mu_hat: Option<f64>,
}

#[derive(Debug)]
pub struct KRun {
    pub k: usize,
    pub records: Vec<TrialRecord>,
    pub failures: usize,
    pub sample: ErrorSample,
    pub summary: KSummary,
}

#[derive(Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub per_k: Vec<KRun>,
}

impl ExperimentResult {
    pub fn run_for(&self, k: usize) -> Option<&KRun> {
        self.per_k.iter().find(|r| r.k == k)
    }
}

/// Run every `(k, trial)` cell; trials parallelized per `k`, aggregation in
/// trial order. Failed trials are counted and skipped, surviving records
/// are kept.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let spec = cfg.attack.to_spec()?;
    let mut per_k = Vec::with_capacity(cfg.k_values.len());
    for &k in &cfg.k_values {
        let outcomes: Vec<Result<TrialRecord>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| run_trial(cfg, k, trial))
            .collect();
        let mut records = Vec::with_capacity(cfg.trials);
        let mut failures = 0usize;
        for outcome in outcomes {
            match outcome {
                Ok(rec) => records.push(rec),
                Err(_) => failures += 1,
            }
        }
        let meta = SampleMeta {
            k_copies: k,
            nu: cfg.nu,
            attack: spec,
            graph_model: cfg.graph_model.to_model(),
            num_vertices: cfg.num_vertices,
        };
        let sample = ErrorSample::new(records.iter().map(|r| r.error).collect(), meta)?;
        let summary = summarize(k, &records, failures, &sample);
        per_k.push(KRun {
            k,
            records,
            failures,
            sample,
            summary,
        });
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        per_k,
    })
}

fn summarize(k: usize, records: &[TrialRecord], failures: usize, sample: &ErrorSample) -> KSummary {
    let mean = |f: fn(&TrialRecord) -> f64| -> Option<f64> {
        if records.is_empty() {
            None
        } else {
            Some(records.iter().map(f).sum::<f64>() / records.len() as f64)
        }
    };
    KSummary {
        k,
        trials: records.len(),
        failures,
        mean_error: mean(|r| r.error),
        q50: sample.quantile(0.5).ok(),
        q90: sample.quantile(0.9).ok(),
        q99: sample.quantile(0.99).ok(),
        mean_p_hat: mean(|r| r.p_hat),
        mean_mu_hat: mean(|r| r.mu_hat),
    }
}

/// Write `trials.csv`, per-K `kde_K<k>.csv` / `ecdf_K<k>.csv`, and
/// `summary.json` under `dir`.
pub fn write_run_dir(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("trials.csv"), trials_csv(result))?;

    let grid = result.config.rho_grid.to_grid();
    for run in &result.per_k {
        if !run.sample.is_empty() {
            let kde = run.sample.kde(result.config.kde_h, &grid)?;
            fs::write(
                dir.join(format!("kde_K{}.csv", run.k)),
                curve_csv("density", &kde),
            )?;
            let ecdf: Vec<(f64, f64)> = grid
                .iter()
                .map(|&rho| Ok((rho, run.sample.ecdf(rho)?)))
                .collect::<Result<_>>()?;
            fs::write(
                dir.join(format!("ecdf_K{}.csv", run.k)),
                curve_csv("ecdf", &ecdf),
            )?;
        }
    }

    let summary = serde_json::json!({
        "config": result.config,
        "per_k": result.per_k.iter().map(|r| &r.summary).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("serializable");
    text.push('\n');
    fs::write(dir.join("summary.json"), text)?;
    Ok(())
}

// Floats in trials.csv use the shortest round-trip form so downstream
// summaries rebuilt from the CSV are bit-identical to in-memory ones.
pub fn trials_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("trial_index,k,error,p_hat,mu_hat,seed\n");
    for run in &result.per_k {
        for rec in &run.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                rec.trial_index, rec.k_copies, rec.error, rec.p_hat, rec.mu_hat, rec.seed
            ));
        }
    }
    out
}

fn curve_csv(value_name: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("rho,{value_name}\n");
    for &(rho, value) in points {
        out.push_str(&format_sig(rho));
        out.push(',');
        out.push_str(&format_sig(value));
        out.push('\n');
    }
    out
}

/// Parse a `trials.csv` produced by [`write_run_dir`].
pub fn parse_trials_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line != "trial_index,k,error,p_hat,mu_hat,seed" {
                return Err(Error::Format(format!(
                    "unexpected trials.csv header {line:?}"
                )));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Format(format!("trials.csv line {i}: need 6 fields")));
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("trials.csv line {i}: bad {what} {s:?}")))
        };
        records.push(TrialRecord {
            trial_index: fields[0]
                .parse()
                .map_err(|_| Error::Format(format!("trials.csv line {i}: bad trial index")))?,
            k_copies: fields[1]
                .parse()
                .map_err(|_| Error::Format(format!("trials.csv line {i}: bad k")))?,
            error: parse_f(fields[2], "error")?,
            p_hat: parse_f(fields[3], "p_hat")?,
            mu_hat: parse_f(fields[4], "mu_hat")?,
            seed: fields[5]
                .parse()
                .map_err(|_| Error::Format(format!("trials.csv line {i}: bad seed")))?,
        });
    }
    Ok(records)
}
