//! Experiment orchestration: one full-horizon reference solve, then an
//! aggregated solve per method, strategy and weighting combination, each
//! scored by the investment gap and wall-time saving.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cep::{build_lp, extract_investments, InvestmentVector};
use crate::cluster::{
    cluster_clustering, initial_partition, kk_means, kmeans, level_correlation, FuzzyOpts,
    KmeansOpts,
};
use crate::features::{build_day_elements, FeatureSet};
use crate::instance::Instance;
use crate::select::{apply_plan, build_plan, dummy_selection, SelectionPlan, Strategy};
use crate::solve::{check_feasibility, solve_lp, SolveOpts};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance error: {0}")]
    Instance(#[from] crate::instance::InstanceError),
    #[error("model error: {0}")]
    Cep(#[from] crate::cep::CepError),
    #[error("solve error: {0}")]
    Solve(#[from] crate::solve::SolveError),
    #[error("config error: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dummy,
    K,
    Cc,
    Lc,
    Kk,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Dummy => "dummy",
            Method::K => "k",
            Method::Cc => "cc",
            Method::Lc => "lc",
            Method::Kk => "kk",
        }
    }

    fn is_double(self) -> bool {
        matches!(self, Method::Cc | Method::Lc | Method::Kk)
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dummy" => Ok(Method::Dummy),
            "k" => Ok(Method::K),
            "cc" => Ok(Method::Cc),
            "lc" => Ok(Method::Lc),
            "kk" => Ok(Method::Kk),
            other => Err(format!("unknown method {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Weighted selection: weight days per cluster.
    W,
    /// Non-weighted: one day per cluster.
    N,
    /// Non-weighted with the cluster count raised to the companion
    /// weighted run's selected-day total.
    Nl,
}

impl Weighting {
    pub fn tag(self) -> &'static str {
        match self {
            Weighting::W => "w",
            Weighting::N => "n",
            Weighting::Nl => "nl",
        }
    }
}

impl FromStr for Weighting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "w" => Ok(Weighting::W),
            "n" => Ok(Weighting::N),
            "nl" => Ok(Weighting::Nl),
            other => Err(format!("unknown weighting {other}")),
        }
    }
}

fn default_clusters() -> usize {
    28
}
fn default_outer() -> usize {
    7
}
fn default_inner() -> usize {
    4
}
fn default_strategies() -> Vec<String> {
    vec!["median".into()]
}
fn default_weightings() -> Vec<String> {
    vec!["w".into(), "n".into()]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: PathBuf,
    pub methods: Vec<String>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<String>,
    #[serde(default = "default_weightings")]
    pub weightings: Vec<String>,
    #[serde(default = "default_clusters")]
    pub clusters: usize,
    #[serde(default = "default_outer")]
    pub outer_clusters: usize,
    #[serde(default = "default_inner")]
    pub inner_clusters: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub time_limit_s: Option<f64>,
}

impl ExperimentConfig {
    pub fn parsed_methods(&self) -> Result<Vec<Method>, BenchError> {
        self.methods
            .iter()
            .map(|m| m.parse().map_err(BenchError::Config))
            .collect()
    }

    pub fn parsed_strategies(&self) -> Result<Vec<Strategy>, BenchError> {
        self.strategies
            .iter()
            .map(|s| s.parse().map_err(BenchError::Config))
            .collect()
    }

    pub fn parsed_weightings(&self) -> Result<Vec<Weighting>, BenchError> {
        self.weightings
            .iter()
            .map(|w| w.parse().map_err(BenchError::Config))
            .collect()
    }
}

/// Investment gap between an aggregated solution `x` and the full-horizon
/// reference `xbar`. The metric is undefined when the reference invests
/// nothing but the aggregation does; that case carries the stray total
/// instead of pretending a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gap {
    Defined(f64),
    UndefinedDenominator { stray: f64 },
}

impl Gap {
    pub fn value(self) -> Option<f64> {
        match self {
            Gap::Defined(g) => Some(g),
            Gap::UndefinedDenominator { .. } => None,
        }
    }
}

pub fn gap(x: &InvestmentVector, xbar: &InvestmentVector) -> Result<Gap, BenchError> {
    if x.entries.len() != xbar.entries.len()
        || x.entries
            .iter()
            .zip(&xbar.entries)
            .any(|((a, _), (b, _))| a != b)
    {
        return Err(BenchError::Config(
            "investment vectors have mismatched candidate ids".into(),
        ));
    }
    let num: f64 = x
        .entries
        .iter()
        .zip(&xbar.entries)
        .map(|((_, xi), (_, xb))| (xi - xb).abs())
        .sum();
    let den: f64 = xbar.entries.iter().map(|(_, v)| v).sum();
    if den == 0.0 {
        let stray: f64 = x.entries.iter().map(|(_, v)| v.abs()).sum();
        if stray == 0.0 {
            Ok(Gap::Defined(0.0))
        } else {
            Ok(Gap::UndefinedDenominator { stray })
        }
    } else {
        Ok(Gap::Defined(num / den))
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub method: String,
    pub strategy: String,
    pub weighting: String,
    pub clusters: usize,
    pub days_selected: usize,
    pub investments: Option<InvestmentVector>,
    pub objective: Option<f64>,
    pub gap: Option<Gap>,
    pub t_agg_s: f64,
    pub seed: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub instance_name: String,
    pub n_days: usize,
    pub reference: InvestmentVector,
    pub reference_objective: f64,
    pub t_full_s: f64,
    pub rows: Vec<BenchRow>,
}

impl GapReport {
    pub fn saving(&self, row: &BenchRow) -> f64 {
        1.0 - row.t_agg_s / self.t_full_s
    }
}

fn cluster_for(
    fs: &FeatureSet,
    method: Method,
    total: usize,
    outer: usize,
    inner: usize,
) -> crate::cluster::Clustering {
    match method {
        Method::Dummy => unreachable!("dummy selection bypasses clustering"),
        Method::K => kmeans(
            fs,
            total,
            &initial_partition(fs.n_days, total),
            KmeansOpts::default(),
        ),
        Method::Cc => cluster_clustering(fs, outer, inner, KmeansOpts::default()),
        Method::Lc => level_correlation(fs, outer, inner, FuzzyOpts::default()),
        Method::Kk => kk_means(fs, outer, inner, KmeansOpts::default()),
    }
}

/// Builds the selection plan for one row. `nl` rows first run the weighted
/// companion to learn its selected-day total, then re-cluster non-weighted
/// at that count (double methods scale the outer count, keeping the inner).
fn plan_for(
    fs: &FeatureSet,
    method: Method,
    strategy: Strategy,
    weighting: Weighting,
    clusters: usize,
    outer: usize,
    inner: usize,
    seed: u64,
) -> SelectionPlan {
    match weighting {
        Weighting::W => {
            let c = cluster_for(fs, method, clusters, outer, inner);
            build_plan(fs, &c, true, strategy, seed)
        }
        Weighting::N => {
            let c = cluster_for(fs, method, clusters, outer, inner);
            build_plan(fs, &c, false, strategy, seed)
        }
        Weighting::Nl => {
            let companion = cluster_for(fs, method, clusters, outer, inner);
            let target = build_plan(fs, &companion, true, strategy, seed).n_selected();
            let (total, outer) = if method.is_double() {
                let o = ((target as f64 / inner as f64).round() as usize).max(1);
                (o * inner, o)
            } else {
                (target, outer)
            };
            let c = cluster_for(fs, method, total, outer, inner);
            build_plan(fs, &c, false, strategy, seed)
        }
    }
}

fn run_row(
    instance: &Instance,
    fs: &FeatureSet,
    reference: &InvestmentVector,
    method: Method,
    strategy: Strategy,
    weighting: Weighting,
    config: &ExperimentConfig,
    opts: &SolveOpts,
) -> BenchRow {
    let n_days = instance.meta.horizon / instance.meta.day_length;
    let started = Instant::now();
    let result = (|| -> Result<(SelectionPlan, InvestmentVector, f64), BenchError> {
        let plan = if method == Method::Dummy {
            dummy_selection(n_days, 13)
        } else {
            plan_for(
                fs,
                method,
                strategy,
                weighting,
                config.clusters,
                config.outer_clusters,
                config.inner_clusters,
                config.seed,
            )
        };
        let aggregated = apply_plan(instance, &plan);
        let lp = build_lp(&aggregated)?;
        let sol = solve_lp(&lp, opts)?;
        if !sol.is_optimal() {
            return Err(BenchError::Config(format!(
                "aggregated solve ended with status {:?}",
                sol.status
            )));
        }
        check_feasibility(&lp, &sol.values, 1e-5).map_err(BenchError::Config)?;
        let inv = extract_investments(&lp, &sol.values)?;
        Ok((plan, inv, sol.objective))
    })();
    let t_agg_s = started.elapsed().as_secs_f64();
    let (strategy_tag, weighting_tag) = if method == Method::Dummy {
        ("-".to_string(), "n".to_string())
    } else {
        (strategy.tag().to_string(), weighting.tag().to_string())
    };
    match result {
        Ok((plan, inv, objective)) => {
            let g = gap(&inv, reference).ok();
            BenchRow {
                method: method.tag().into(),
                strategy: strategy_tag,
                weighting: weighting_tag,
                clusters: plan.per_cluster.len(),
                days_selected: plan.n_selected(),
                investments: Some(inv),
                objective: Some(objective),
                gap: g,
                t_agg_s,
                seed: config.seed,
                error: None,
            }
        }
        Err(e) => BenchRow {
            method: method.tag().into(),
            strategy: strategy_tag,
            weighting: weighting_tag,
            clusters: config.clusters,
            days_selected: 0,
            investments: None,
            objective: None,
            gap: None,
            t_agg_s,
            seed: config.seed,
            error: Some(e.to_string()),
        },
    }
}

/// Caps the worker pool from `AGGREX_THREADS` when set. Safe to call more
/// than once; only the first call takes effect.
pub fn configure_threads() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("AGGREX_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    }
}

/// Runs the whole experiment on an already loaded instance: one reference
/// solve, then every (method, strategy, weighting) row. Rows run in
/// parallel; the report is sorted by (method, strategy, weighting) so
/// parallelism never changes the output.
pub fn run_experiment_on(
    instance: &Instance,
    config: &ExperimentConfig,
) -> Result<GapReport, BenchError> {
    configure_threads();
    let methods = config.parsed_methods()?;
    let strategies = config.parsed_strategies()?;
    let weightings = config.parsed_weightings()?;
    if methods.is_empty() {
        return Err(BenchError::Config("no methods configured".into()));
    }
    if config.clusters == 0 {
        return Err(BenchError::Config("clusters must be positive".into()));
    }
    if instance.meta.horizon % instance.meta.day_length != 0 {
        return Err(BenchError::Config(
            "horizon must be a whole number of days".into(),
        ));
    }
    let opts = SolveOpts {
        time_limit: config
            .time_limit_s
            .map(std::time::Duration::from_secs_f64),
    };

    let fs = build_day_elements(instance);

    let started = Instant::now();
    let lp = build_lp(instance)?;
    let sol = solve_lp(&lp, &opts)?;
    let t_full_s = started.elapsed().as_secs_f64();
    if !sol.is_optimal() {
        return Err(BenchError::Config(format!(
            "reference solve ended with status {:?}",
            sol.status
        )));
    }
    check_feasibility(&lp, &sol.values, 1e-5).map_err(BenchError::Config)?;
    let reference = extract_investments(&lp, &sol.values)?;

    let mut combos: Vec<(Method, Strategy, Weighting)> = Vec::new();
    for &m in &methods {
        if m == Method::Dummy {
            combos.push((m, Strategy::Median, Weighting::N));
            continue;
        }
        for &s in &strategies {
            for &w in &weightings {
                combos.push((m, s, w));
            }
        }
    }

    let mut rows = crate::par::map_indexed(combos.len(), |i| {
        let (m, s, w) = combos[i];
        run_row(instance, &fs, &reference, m, s, w, config, &opts)
    });
    rows.sort_by(|a, b| {
        (&a.method, &a.strategy, &a.weighting).cmp(&(&b.method, &b.strategy, &b.weighting))
    });

    Ok(GapReport {
        instance_name: instance.meta.name.clone(),
        n_days: instance.meta.horizon / instance.meta.day_length,
        reference,
        reference_objective: sol.objective,
        t_full_s,
        rows,
    })
}

/// Loads the configured instance and runs the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<GapReport, BenchError> {
    let instance = crate::instance::load_instance(&config.instance)?;
    run_experiment_on(&instance, config)
}

fn gap_cell(row: &BenchRow) -> String {
    match (&row.error, row.gap) {
        (Some(_), _) => "error".into(),
        (None, Some(Gap::Defined(g))) => format!("{:.1}", g * 100.0),
        (None, Some(Gap::UndefinedDenominator { stray })) => format!("undef({stray:.3})"),
        (None, None) => "n/a".into(),
    }
}

pub const CSV_HEADER: &str =
    "method,strategy,weighting,clusters,days_selected,gap_pct,t_full_s,t_agg_s,saving_pct";

/// CSV report with the fixed column order. Gaps render as percentages with
/// one decimal; times in seconds with three.
pub fn emit_csv(report: &GapReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.3},{:.3},{:.1}\n",
            row.method,
            row.strategy,
            row.weighting,
            row.clusters,
            row.days_selected,
            gap_cell(row),
            report.t_full_s,
            row.t_agg_s,
            report.saving(row) * 100.0,
        ));
    }
    out
}

/// Same rows without the timing columns; byte-stable across runs for
/// deterministic configs.
pub fn emit_csv_deterministic(report: &GapReport) -> String {
    let mut out = String::from("method,strategy,weighting,clusters,days_selected,gap_pct,seed");
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.method,
            row.strategy,
            row.weighting,
            row.clusters,
            row.days_selected,
            gap_cell(row),
            row.seed,
        ));
    }
    out
}

pub fn emit_markdown(report: &GapReport) -> String {
    let mut out = format!(
        "# Investment gaps: {} ({} days, full solve {:.3} s)\n\n",
        report.instance_name, report.n_days, report.t_full_s
    );
    out.push_str(
        "| method | strategy | weighting | clusters | days | gap % | t_agg s | saving % |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for row in &report.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {:.3} | {:.1} |\n",
            row.method,
            row.strategy,
            row.weighting,
            row.clusters,
            row.days_selected,
            gap_cell(row),
            row.t_agg_s,
            report.saving(row) * 100.0,
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Method,
    Strategy,
    Weighting,
}

/// Mean defined gap per group, skipping errored and undefined rows. Output
/// is sorted by group key.
pub fn summarize(report: &GapReport, group: GroupBy) -> Vec<(String, f64)> {
    let mut acc: std::collections::BTreeMap<String, (f64, usize)> = Default::default();
    for row in &report.rows {
        let key = match group {
            GroupBy::Method => &row.method,
            GroupBy::Strategy => &row.strategy,
            GroupBy::Weighting => &row.weighting,
        };
        if let Some(Gap::Defined(g)) = row.gap {
            let e = acc.entry(key.clone()).or_insert((0.0, 0));
            e.0 += g;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect()
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::Config(e.to_string()))?;
    let mut config: ExperimentConfig =
        toml::from_str(&text).map_err(|e| BenchError::Config(e.to_string()))?;
    if config.instance.is_relative() {
        if let Some(dir) = path.parent() {
            config.instance = dir.join(&config.instance);
        }
    }
    Ok(config)
}
