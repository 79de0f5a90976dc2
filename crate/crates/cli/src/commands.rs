//! The three subcommands: synthesize data, sweep, evaluate.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Args;
use fmsel_core::{
    append_bias, baseline_equal_cost_with, compare_report, downstream_eval, gen_synthetic_binary,
    rank_features, run_sweep, select_top_k, split, CostMatrix, Dataset, FVariant, FeatureGen,
    Method, SolverConfig, SynthConfig, TaskKind,
};

use crate::csvio::{load_csv, save_csv, CsvSchema, LabelColumns};
use crate::manifest::{read_manifest, write_manifest};
use crate::model_io::{read_model, write_model, ModelMeta};
use crate::report::{write_compare, write_curve, write_eval_reports, write_sweep_report};
use crate::{CliError, Result};

/// Environment variable bounding the sweep worker-thread count.
pub const WORKERS_ENV: &str = "FMSEL_WORKERS";

/// Deterministic per-subtask seed expansion from the top-level seed.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    /// Output directory for dataset.csv and splits.manifest
    #[arg(long)]
    pub out: PathBuf,
    /// Minority class sample count
    #[arg(long = "n-min")]
    pub n_min: usize,
    /// Majority-to-minority ratio (>= 1)
    #[arg(long, default_value_t = 3.0)]
    pub ratio: f64,
    /// Feature count
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// How many leading features separate the classes
    #[arg(long, default_value_t = 1)]
    pub informative: usize,
    /// Fraction of the minority box overlapping the majority box on
    /// informative features (0 = disjoint, 1 = identical)
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    /// Explicit per-feature boxes `minlo:minhi:majlo:majhi;...`
    /// (overrides --d/--informative/--overlap)
    #[arg(long)]
    pub boxes: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Validation fraction of the post-test pool
    #[arg(long = "val-frac", default_value_t = 1.0 / 3.0)]
    pub val_frac: f64,
    /// Test fraction of all samples
    #[arg(long = "test-frac", default_value_t = 0.25)]
    pub test_frac: f64,
    /// Disable stratified splitting
    #[arg(long = "no-stratify")]
    pub no_stratify: bool,
    /// Config file with `key = value` defaults for these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_boxes(spec: &str) -> Result<Vec<FeatureGen>> {
    spec.split(';')
        .map(|chunk| {
            let parts: Vec<&str> = chunk.split(':').collect();
            if parts.len() != 4 {
                return Err(CliError::Usage(format!(
                    "box {chunk:?} must be minlo:minhi:majlo:majhi"
                )));
            }
            let mut values = [0.0f64; 4];
            for (slot, token) in values.iter_mut().zip(&parts) {
                *slot = token
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad number {token:?} in --boxes")))?;
            }
            Ok(FeatureGen::informative(
                (values[0], values[1]),
                (values[2], values[3]),
            ))
        })
        .collect()
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let features = match &args.boxes {
        Some(spec) => parse_boxes(spec)?,
        None => {
            if args.informative > args.d {
                return Err(CliError::Usage(format!(
                    "--informative {} exceeds --d {}",
                    args.informative, args.d
                )));
            }
            SynthConfig::standard(args.n_min, args.ratio, args.d, args.informative, args.overlap, 0)
                .features
        }
    };
    let cfg = SynthConfig::new(args.n_min, args.ratio, features, args.seed);
    let ds = gen_synthetic_binary(&cfg)?;
    let splits = split(
        &ds,
        args.val_frac,
        args.test_frac,
        derive_seed(args.seed, 1),
        !args.no_stratify,
    )?;
    std::fs::create_dir_all(&args.out)?;
    save_csv(&args.out.join("dataset.csv"), &ds)?;
    write_manifest(&args.out.join("splits.manifest"), &splits)?;
    let positives = (0..ds.n_samples())
        .filter(|&s| ds.labels()[(s, 0)] == 1)
        .count();
    println!(
        "wrote {} samples ({} positive / {} negative), {} features to {}",
        ds.n_samples(),
        positives,
        ds.n_samples() - positives,
        ds.dim(),
        args.out.display()
    );
    println!(
        "splits: {} train / {} validation / {} test",
        splits.train().len(),
        splits.validation().len(),
        splits.test().len()
    );
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct CommonDataArgs {
    /// Dataset CSV path
    #[arg(long)]
    pub data: PathBuf,
    /// Split manifest path
    #[arg(long)]
    pub manifest: PathBuf,
    /// Label columns by name, comma separated
    #[arg(long = "label-cols")]
    pub label_cols: Option<String>,
    /// Number of trailing label columns (ignored with --label-cols)
    #[arg(long = "labels-last", default_value_t = 1)]
    pub labels_last: usize,
    /// Task kind override: binary | multi-class | multi-label
    #[arg(long)]
    pub task: Option<String>,
}

impl CommonDataArgs {
    fn schema(&self) -> Result<CsvSchema> {
        let labels = match &self.label_cols {
            Some(names) => LabelColumns::Names(
                names
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            ),
            None => LabelColumns::LastN(self.labels_last),
        };
        let task = match self.task.as_deref() {
            None => None,
            Some("binary") => Some(TaskKind::Binary),
            Some("multi-class") => Some(TaskKind::MultiClass),
            Some("multi-label") => Some(TaskKind::MultiLabel),
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "unknown task {other:?}; expected binary, multi-class or multi-label"
                )))
            }
        };
        Ok(CsvSchema { labels, task })
    }

    /// Load the dataset (bias absorbed) and its splits.
    fn load(&self) -> Result<(Dataset, fmsel_core::Splits)> {
        let ds = load_csv(&self.data, &self.schema()?)?;
        let splits = read_manifest(&self.manifest, ds.n_samples())?;
        let ds = append_bias(&ds)?;
        Ok((ds, splits))
    }
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: CommonDataArgs,
    /// Output directory for sweep.tsv and model.txt
    #[arg(long)]
    pub out: PathBuf,
    /// Number of discretized F-measure values
    #[arg(long, default_value_t = 20)]
    pub t: usize,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Comma-separated regularization grid
    #[arg(
        long = "lambda-grid",
        default_value = "1e-6,1e-5,1e-4,1e-3,1e-2,1e-1,1,1e1,1e2,1e3,1e4,1e5,1e6"
    )]
    pub lambda_grid: String,
    #[arg(long, default_value_t = 1e-8)]
    pub zeta: f64,
    #[arg(long = "max-iter", default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long = "rel-tol", default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Start each r from the previous solution instead of fresh
    #[arg(long = "warm-start")]
    pub warm_start: bool,
    /// Measure variant override: binary | multi-label | multi-class
    #[arg(long)]
    pub variant: Option<String>,
    /// Reference class of the multi-class measure (0-based)
    #[arg(long = "ref-class")]
    pub ref_class: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_lambda_grid(spec: &str) -> Result<Vec<f64>> {
    let grid: Vec<f64> = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad lambda {tok:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if grid.is_empty() || grid.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        return Err(CliError::Usage(
            "lambda grid must be non-empty and positive".into(),
        ));
    }
    Ok(grid)
}

fn parse_variant(spec: Option<&str>) -> Result<Option<FVariant>> {
    Ok(match spec {
        None => None,
        Some("binary") => Some(FVariant::Binary),
        Some("multi-label") => Some(FVariant::MultiLabelMicro),
        Some("multi-class") => Some(FVariant::MultiClassMicro),
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown variant {other:?}; expected binary, multi-label or multi-class"
            )))
        }
    })
}

fn worker_count(jobs: usize) -> usize {
    let available = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        });
    available.min(jobs).max(1)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let (ds, splits) = args.data.load()?;
    let grid = parse_lambda_grid(&args.lambda_grid)?;
    let options = fmsel_core::SweepOptions {
        variant: parse_variant(args.variant.as_deref())?,
        ref_class: args.ref_class,
        warm_start: args.warm_start,
    };

    // fan the lambda grid out across workers; merge in grid order
    let jobs = grid.len();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<fmsel_core::Result<fmsel_core::SweepResult>>>> =
        Mutex::new(vec![None; jobs]);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(jobs) {
            scope.spawn(|| loop {
                let job = next.fetch_add(1, Ordering::Relaxed);
                if job >= jobs {
                    break;
                }
                let config = SolverConfig {
                    lambda: grid[job],
                    zeta: args.zeta,
                    max_iter: args.max_iter,
                    rel_tol: args.rel_tol,
                    seed: args.seed,
                };
                let outcome = run_sweep(&ds, &splits, args.t, args.beta, &config, &options);
                results.lock().unwrap()[job] = Some(outcome);
            });
        }
    });
    let results = results.into_inner().unwrap();

    let mut best: Option<(usize, fmsel_core::SweepResult)> = None;
    let mut first_error = None;
    for (idx, outcome) in results.into_iter().enumerate() {
        match outcome.expect("every job ran") {
            Ok(sweep) => {
                println!(
                    "lambda {}\tbest_r {}\tvalidation_f {}",
                    grid[idx],
                    sweep.best_r(),
                    sweep.best_validation_f()
                );
                let better = match &best {
                    None => true,
                    Some((_, current)) => {
                        sweep.best_validation_f() > current.best_validation_f()
                    }
                };
                if better {
                    best = Some((idx, sweep));
                }
            }
            Err(err) => {
                eprintln!("lambda {}: {err}", grid[idx]);
                if first_error.is_none() {
                    first_error = Some(err);
                }
            }
        }
    }
    let (best_idx, sweep) = match best {
        Some(found) => found,
        None => {
            return Err(first_error
                .map(CliError::from)
                .unwrap_or_else(|| CliError::Numeric("every (lambda, r) pair failed".into())))
        }
    };
    let lambda = grid[best_idx];
    let best_record = &sweep.records[sweep.best_index];
    println!(
        "selected lambda {} r {} validation_f {}",
        lambda,
        sweep.best_r(),
        sweep.best_validation_f()
    );

    std::fs::create_dir_all(&args.out)?;
    let config = SolverConfig {
        lambda,
        zeta: args.zeta,
        max_iter: args.max_iter,
        rel_tol: args.rel_tol,
        seed: args.seed,
    };
    write_sweep_report(
        &args.out.join("sweep.tsv"),
        &sweep,
        ds.feature_names(),
        lambda,
        args.beta,
        args.t,
        &config,
    )?;
    write_model(
        &args.out.join("model.txt"),
        &best_record.fit.projection,
        &ModelMeta {
            lambda,
            r: sweep.best_r(),
            beta: args.beta,
            zeta: args.zeta,
            seed: args.seed,
            iterations: best_record.fit.iterations(),
            objective: best_record.fit.final_objective(),
        },
    )?;
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: CommonDataArgs,
    /// Model file written by `fmsel sweep`
    #[arg(long)]
    pub model: PathBuf,
    /// Output directory for eval.tsv, compare.tsv and curve.tsv
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated feature-subset sizes
    #[arg(long)]
    pub k: String,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Base seed of the evaluation re-splits
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-iter", default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long = "rel-tol", default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let (ds, splits) = args.data.load()?;
    let (projection, meta) = read_model(&args.model)?;
    if projection.nrows() != ds.dim() {
        return Err(CliError::Data(format!(
            "model has {} rows but the bias-augmented dataset has {} features",
            projection.nrows(),
            ds.dim()
        )));
    }
    let ks: Vec<usize> = args
        .k
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad k {tok:?}")))
        })
        .collect::<Result<Vec<usize>>>()?;
    if ks.is_empty() {
        return Err(CliError::Usage("need at least one k".into()));
    }

    let ranking = rank_features(&projection, ds.has_bias_row());
    let config = SolverConfig {
        lambda: meta.lambda,
        zeta: meta.zeta,
        max_iter: args.max_iter,
        rel_tol: args.rel_tol,
        seed: meta.seed,
    };
    let mut reports = Vec::new();
    let mut comparisons = Vec::new();
    for &k in &ks {
        let selected = select_top_k(&ranking, k)?;
        let csfs = downstream_eval(&ds, &splits, &selected, args.repeats, args.seed, Method::Csfs)?;
        let baseline =
            baseline_equal_cost_with(&ds, &splits, k, &config, args.repeats, args.seed)?;
        comparisons.push(compare_report(&csfs, &baseline)?);
        println!(
            "k {k}: CSFS test F {} vs EqualCost {} (gap {})",
            csfs.test.f_mean,
            baseline.test.f_mean,
            comparisons.last().unwrap().f_gap_mean
        );
        reports.push(csfs);
        reports.push(baseline);
    }
    std::fs::create_dir_all(&args.out)?;
    write_eval_reports(&args.out.join("eval.tsv"), &reports)?;
    write_curve(&args.out.join("curve.tsv"), &reports)?;
    write_compare(&args.out.join("compare.tsv"), &comparisons)?;
    Ok(())
}

/// Equal-cost fit on the training split, used by tests to cross-check the
/// sweep degeneracy through the CLI paths.
pub fn equal_cost_fit(
    ds: &Dataset,
    splits: &fmsel_core::Splits,
    config: &SolverConfig,
) -> Result<fmsel_core::FitResult> {
    let x = ds.features_at(splits.train());
    let y = ds.labels_at(splits.train()).map(|v| v as f64);
    let costs = CostMatrix::constant(splits.train().len(), ds.n_classes(), 1.0);
    Ok(fmsel_core::fit(&x, &y, &costs, config)?)
}
