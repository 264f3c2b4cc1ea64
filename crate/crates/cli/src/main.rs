//! `maskplan`: generate datasets, plan single scenes, and benchmark mask
//! pruning against plain A*.
//!
//! Exit codes: 0 success, 1 runtime failure (IO, malformed files, checksum
//! mismatch), 2 bad command-line usage.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use maskplan::bench::{emit_report, parse_predictor, run_bench, ReportFormat, Split};
use maskplan::codec::load_scene;
use maskplan::dataset::{generate_dataset, Dataset, MANIFEST_FILE};
use maskplan::maskpipe::{dump_stages, process_stages, read_mask_file};
use maskplan::scenegen::{GenConfig, ScenarioId, DEFAULT_FRACTION, MAX_FRACTION};
use maskplan::{astar, masked_plan, space_from_scene, Execution, Predictor};

#[derive(Debug, Parser)]
#[command(name = "maskplan", version, about = "Mask-pruned A* benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy)]
enum ScenarioSel {
    One(ScenarioId),
    All,
}

fn parse_scenario(s: &str) -> Result<ScenarioSel, String> {
    if s == "all" {
        return Ok(ScenarioSel::All);
    }
    s.parse::<u8>()
        .ok()
        .and_then(ScenarioId::new)
        .map(ScenarioSel::One)
        .ok_or_else(|| format!("expected 1..5 or `all`, got `{s}`"))
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let f: f64 = s.parse().map_err(|_| format!("not a number: `{s}`"))?;
    if (0.0..=MAX_FRACTION).contains(&f) {
        Ok(f)
    } else {
        Err(format!("fraction must lie in [0, {MAX_FRACTION}]"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a scene/answer dataset.
    Gen {
        /// Scenario 1..5, or `all`.
        #[arg(long, value_parser = parse_scenario)]
        scenario: ScenarioSel,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of the 3600 cells covered by random obstacles.
        #[arg(long, default_value_t = DEFAULT_FRACTION, value_parser = parse_fraction)]
        fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan a single scene, optionally pruned by a MASKV1 mask.
    Plan {
        /// Scene as PNG or SCENE1 text.
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        mask: Option<PathBuf>,
        /// Write the gray/dilated/binary/overlap stage images here.
        #[arg(long, requires = "mask")]
        dump_stages: Option<PathBuf>,
    },
    /// Compare plain A* and pruned A* over a dataset.
    Bench {
        #[arg(long)]
        dataset: PathBuf,
        /// allpass | oracle[:r] | files:DIR
        #[arg(long, value_parser = parse_predictor)]
        predictor: Predictor,
        #[arg(long, default_value = "all")]
        split: Split,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
    },
}

fn cmd_gen(
    scenario: ScenarioSel,
    count: u32,
    seed: u64,
    fraction: f64,
    out: PathBuf,
) -> Result<()> {
    let scenarios: Vec<ScenarioId> = match scenario {
        ScenarioSel::One(k) => vec![k],
        ScenarioSel::All => ScenarioId::ALL.to_vec(),
    };
    let configs: Vec<GenConfig> = scenarios
        .into_iter()
        .map(|k| GenConfig::new(k, count, seed).with_fraction(fraction))
        .collect();
    generate_dataset(&configs, &out, Execution::from_env())
        .with_context(|| format!("generating dataset in {}", out.display()))?;
    println!("{}", out.join(MANIFEST_FILE).display());
    Ok(())
}

fn cmd_plan(scene: PathBuf, mask: Option<PathBuf>, dump: Option<PathBuf>) -> Result<()> {
    let scene = load_scene(&scene).with_context(|| format!("reading scene {}", scene.display()))?;
    let result = match mask {
        None => astar(&space_from_scene(&scene)),
        Some(path) => {
            let vector = read_mask_file(&path)?;
            let stages = process_stages(&vector);
            if let Some(dir) = dump {
                dump_stages(&stages, &scene, &dir)?;
            }
            masked_plan(&scene, &stages.mask)
        }
    };
    println!("found: {}", result.found);
    println!("path_length: {}", result.path.len());
    println!("iterations: {}", result.iterations);
    println!("fallback_used: {}", result.fallback_used);
    Ok(())
}

fn cmd_bench(
    dataset: PathBuf,
    predictor: Predictor,
    split: Split,
    report: PathBuf,
    format: ReportFormat,
) -> Result<()> {
    let ds = Dataset::open(&dataset)?;
    if ds.manifest().scenarios.is_empty() {
        bail!("dataset {} lists no scenarios", dataset.display());
    }
    let label = dataset.display().to_string();
    let rep = run_bench(&ds, &label, &predictor, split, Execution::from_env())?;
    std::fs::write(&report, emit_report(&rep, format))
        .with_context(|| format!("writing report {}", report.display()))?;
    let sum = &rep.sum;
    println!(
        "scenes {} baseline {} pruned {} improvement {:.2}% fallbacks {}",
        sum.scenes,
        sum.baseline_iterations,
        sum.pruned_iterations,
        sum.improvement_pct(),
        sum.fallback_count
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen {
            scenario,
            count,
            seed,
            fraction,
            out,
        } => cmd_gen(scenario, count, seed, fraction, out),
        Command::Plan {
            scene,
            mask,
            dump_stages,
        } => cmd_plan(scene, mask, dump_stages),
        Command::Bench {
            dataset,
            predictor,
            split,
            report,
            format,
        } => cmd_bench(dataset, predictor, split, report, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
