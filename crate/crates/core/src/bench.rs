//! Plain A* versus mask-pruned A* over a dataset, reported per scenario.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::dataset::{Dataset, DatasetError};
use crate::maskpipe::{MaskError, Predictor};
use crate::par::Execution;
use crate::planner::{astar, masked_plan, space_from_scene};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("scenario {scenario}, scene {index}: {source}")]
    Mask {
        scenario: u8,
        index: u32,
        source: MaskError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Split {
    #[default]
    All,
    /// The last 20% of indices of each scenario.
    Test,
}

impl Split {
    /// Index range selected out of `count` scenes.
    pub fn range(self, count: u32) -> std::ops::Range<u32> {
        match self {
            Split::All => 0..count,
            Split::Test => train_len(count)..count,
        }
    }
}

/// Number of leading indices in the 80% training portion.
pub fn train_len(count: u32) -> u32 {
    (u64::from(count) * 4 / 5) as u32
}

impl FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Split::All),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split `{other}` (expected all|test)")),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::All => "all",
            Split::Test => "test",
        })
    }
}

/// Parses `allpass`, `oracle`, `oracle:<r>`, or `files:<dir>`.
pub fn parse_predictor(s: &str) -> Result<Predictor, String> {
    match s.split_once(':') {
        None if s == "allpass" => Ok(Predictor::AllPass),
        None if s == "oracle" => Ok(Predictor::Oracle { radius: 1 }),
        Some(("oracle", r)) => r
            .parse()
            .map(|radius| Predictor::Oracle { radius })
            .map_err(|_| format!("bad oracle radius `{r}`")),
        Some(("files", dir)) if !dir.is_empty() => Ok(Predictor::FromFiles(dir.into())),
        _ => Err(format!(
            "unknown predictor `{s}` (expected allpass|oracle[:r]|files:DIR)"
        )),
    }
}

pub fn predictor_label(p: &Predictor) -> String {
    match p {
        Predictor::AllPass => "allpass".into(),
        Predictor::Oracle { radius } => format!("oracle:{radius}"),
        Predictor::FromFiles(dir) => format!("files:{}", dir.display()),
    }
}

/// Per-scene measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneOutcome {
    pub baseline_iterations: u64,
    pub pruned_iterations: u64,
    pub fallback_used: bool,
    pub baseline_found: bool,
    pub pruned_found: bool,
    /// Pruned path cells over baseline path cells, when both found one.
    pub path_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabel {
    Scenario(u8),
    Sum,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Scenario(k) => write!(f, "{k}"),
            RowLabel::Sum => f.write_str("sum"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: RowLabel,
    pub scenes: u64,
    pub baseline_iterations: u64,
    pub pruned_iterations: u64,
    pub fallback_count: u64,
    path_ratio_sum: f64,
    solved: u64,
}

impl BenchRow {
    pub fn new(label: RowLabel) -> Self {
        BenchRow {
            label,
            scenes: 0,
            baseline_iterations: 0,
            pruned_iterations: 0,
            fallback_count: 0,
            path_ratio_sum: 0.0,
            solved: 0,
        }
    }

    /// A row from bare totals, without per-scene detail.
    pub fn from_totals(label: RowLabel, baseline: u64, pruned: u64) -> Self {
        BenchRow {
            baseline_iterations: baseline,
            pruned_iterations: pruned,
            ..BenchRow::new(label)
        }
    }

    pub fn add(&mut self, o: &SceneOutcome) {
        self.scenes += 1;
        self.baseline_iterations += o.baseline_iterations;
        self.pruned_iterations += o.pruned_iterations;
        self.fallback_count += u64::from(o.fallback_used);
        if let Some(r) = o.path_ratio {
            self.path_ratio_sum += r;
            self.solved += 1;
        }
    }

    fn absorb(&mut self, other: &BenchRow) {
        self.scenes += other.scenes;
        self.baseline_iterations += other.baseline_iterations;
        self.pruned_iterations += other.pruned_iterations;
        self.fallback_count += other.fallback_count;
        self.path_ratio_sum += other.path_ratio_sum;
        self.solved += other.solved;
    }

    /// `baseline − pruned`; negative when pruning cost more.
    pub fn difference(&self) -> i64 {
        self.baseline_iterations as i64 - self.pruned_iterations as i64
    }

    /// `100 · difference / baseline`, or 0 when the baseline is 0.
    pub fn improvement_pct(&self) -> f64 {
        if self.baseline_iterations == 0 {
            0.0
        } else {
            100.0 * self.difference() as f64 / self.baseline_iterations as f64
        }
    }

    /// Pruned iterations as a percentage of the baseline.
    pub fn remaining_pct(&self) -> f64 {
        if self.baseline_iterations == 0 {
            0.0
        } else {
            100.0 * self.pruned_iterations as f64 / self.baseline_iterations as f64
        }
    }

    /// Mean of pruned/baseline path lengths over scenes both searches solved.
    pub fn mean_path_ratio(&self) -> Option<f64> {
        (self.solved > 0).then(|| self.path_ratio_sum / self.solved as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dataset: String,
    pub predictor: String,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub sum: BenchRow,
    pub config: BenchConfig,
    pub version: String,
}

impl BenchReport {
    /// Builds the report, computing the Sum row from `rows`.
    pub fn new(rows: Vec<BenchRow>, config: BenchConfig) -> Self {
        let mut sum = BenchRow::new(RowLabel::Sum);
        for r in &rows {
            sum.absorb(r);
        }
        BenchReport {
            rows,
            sum,
            config,
            version: TOOLKIT_VERSION.to_string(),
        }
    }

    pub fn all_rows(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().chain(std::iter::once(&self.sum))
    }
}

pub fn evaluate_scene(
    dataset: &Dataset,
    predictor: &Predictor,
    scenario: u8,
    index: u32,
) -> Result<SceneOutcome, BenchError> {
    let (scene, answer) = dataset.load(scenario, index)?;
    let baseline = astar(&space_from_scene(&scene));
    let mask = predictor
        .predict(Some(&answer), index)
        .map_err(|source| BenchError::Mask {
            scenario,
            index,
            source,
        })?;
    let pruned = masked_plan(&scene, &mask);
    let path_ratio = (baseline.found && pruned.found)
        .then(|| pruned.path.len() as f64 / baseline.path.len() as f64);
    Ok(SceneOutcome {
        baseline_iterations: baseline.iterations,
        pruned_iterations: pruned.iterations,
        fallback_used: pruned.fallback_used,
        baseline_found: baseline.found,
        pruned_found: pruned.found,
        path_ratio,
    })
}

/// Evaluates every selected scene and aggregates in (scenario, index) order,
/// so the report is independent of `exec`.
pub fn run_bench(
    dataset: &Dataset,
    dataset_label: &str,
    predictor: &Predictor,
    split: Split,
    exec: Execution,
) -> Result<BenchReport, BenchError> {
    let mut scenarios: Vec<_> = dataset.manifest().scenarios.iter().collect();
    scenarios.sort_by_key(|s| s.scenario);

    let jobs: Vec<(u8, u32)> = scenarios
        .iter()
        .flat_map(|s| split.range(s.count).map(move |i| (s.scenario, i)))
        .collect();
    let per_scenario: Vec<(u8, Predictor)> = scenarios
        .iter()
        .map(|s| (s.scenario, predictor.for_scenario(s.scenario)))
        .collect();
    let predictor_for = |k: u8| &per_scenario.iter().find(|(s, _)| *s == k).unwrap().1;

    let outcomes = exec.try_map(jobs.len(), |j| {
        let (k, i) = jobs[j];
        evaluate_scene(dataset, predictor_for(k), k, i)
    })?;

    let mut rows: Vec<BenchRow> = scenarios
        .iter()
        .map(|s| BenchRow::new(RowLabel::Scenario(s.scenario)))
        .collect();
    for ((k, _), o) in jobs.iter().zip(&outcomes) {
        let row = rows
            .iter_mut()
            .find(|r| r.label == RowLabel::Scenario(*k))
            .unwrap();
        row.add(o);
    }
    Ok(BenchReport::new(
        rows,
        BenchConfig {
            dataset: dataset_label.to_string(),
            predictor: predictor_label(predictor),
            split,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format `{other}` (expected csv|md)")),
        }
    }
}

pub const CSV_HEADER: &str =
    "scenario,baseline_iters,pruned_iters,difference,improvement_pct,fallbacks,mean_path_ratio";

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "NA".to_string(), |r| format!("{r:.6}"))
}

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

fn emit_csv(report: &BenchReport) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in report.all_rows() {
        writeln!(
            out,
            "{},{},{},{},{:.4},{},{}",
            r.label,
            r.baseline_iterations,
            r.pruned_iterations,
            r.difference(),
            r.improvement_pct(),
            r.fallback_count,
            fmt_ratio(r.mean_path_ratio()),
        )
        .unwrap();
    }
    out
}

fn emit_markdown(report: &BenchReport) -> String {
    let mut out = String::new();
    let c = &report.config;
    writeln!(out, "# Iterations: A* vs. mask-pruned A*\n").unwrap();
    writeln!(
        out,
        "dataset `{}`, predictor `{}`, split `{}`, maskplan {}\n",
        c.dataset, c.predictor, c.split, report.version
    )
    .unwrap();

    let rows: Vec<&BenchRow> = report.all_rows().collect();
    let header: Vec<String> = rows
        .iter()
        .map(|r| match r.label {
            RowLabel::Scenario(k) => format!("Scene {k}"),
            RowLabel::Sum => "Sum".into(),
        })
        .collect();
    writeln!(out, "| | {} |", header.join(" | ")).unwrap();
    writeln!(out, "|---|{}", "---:|".repeat(rows.len())).unwrap();

    let mut line = |name: &str, cell: &dyn Fn(&BenchRow) -> String| {
        let cells: Vec<String> = rows.iter().map(|r| cell(r)).collect();
        writeln!(out, "| {name} | {} |", cells.join(" | ")).unwrap();
    };
    line("Scenes", &|r| r.scenes.to_string());
    line("A*", &|r| r.baseline_iterations.to_string());
    line("Pruned+A*", &|r| r.pruned_iterations.to_string());
    line("Difference", &|r| r.difference().to_string());
    line("Difference(%)", &|r| format!("{:.2}%", r.remaining_pct()));
    line("Improvement", &|r| format!("{:.2}%", r.improvement_pct()));
    line("Fallbacks", &|r| r.fallback_count.to_string());
    line("Mean path ratio", &|r| fmt_ratio(r.mean_path_ratio()));
    out
}
