//! End-to-end checks of the command surface: artifacts, determinism and
//! exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

use fmsel_cli::commands::{cmd_eval, cmd_gen, cmd_sweep, CommonDataArgs, EvalArgs, GenArgs, SweepArgs};
use fmsel_cli::csvio::{load_csv, CsvSchema};
use fmsel_cli::manifest::read_manifest;
use fmsel_cli::model_io::read_model;
use fmsel_cli::report::without_generated_line;

fn gen_args(out: &Path) -> GenArgs {
    GenArgs {
        out: out.to_path_buf(),
        n_min: 12,
        ratio: 3.0,
        d: 4,
        informative: 2,
        overlap: 0.5,
        boxes: None,
        seed: 5,
        val_frac: 1.0 / 3.0,
        test_frac: 0.25,
        no_stratify: false,
        config: None,
    }
}

fn data_args(dir: &Path) -> CommonDataArgs {
    CommonDataArgs {
        data: dir.join("dataset.csv"),
        manifest: dir.join("splits.manifest"),
        label_cols: None,
        labels_last: 1,
        task: None,
    }
}

fn sweep_args(dir: &Path, out: &Path) -> SweepArgs {
    SweepArgs {
        data: data_args(dir),
        out: out.to_path_buf(),
        t: 3,
        beta: 1.0,
        lambda_grid: "0.1,1".into(),
        zeta: 1e-8,
        max_iter: 50,
        rel_tol: 1e-6,
        seed: 3,
        warm_start: false,
        variant: None,
        ref_class: None,
        config: None,
    }
}

#[test]
fn gen_writes_expected_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = gen_args(dir.path());
    args.n_min = 50;
    args.d = 2;
    args.informative = 1;
    args.seed = 7;
    cmd_gen(&args).unwrap();

    let ds = load_csv(&dir.path().join("dataset.csv"), &CsvSchema::default()).unwrap();
    assert_eq!(ds.n_samples(), 200);
    assert_eq!(ds.dim(), 2);
    let positives = (0..200).filter(|&s| ds.labels()[(s, 0)] == 1).count();
    assert_eq!(positives, 150);

    let splits = read_manifest(&dir.path().join("splits.manifest"), 200).unwrap();
    assert_eq!(splits.test().len(), 50);
    assert_eq!(splits.validation().len(), 50);
    assert_eq!(splits.train().len(), 100);
}

#[test]
fn gen_supports_large_imbalance_scale() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = gen_args(dir.path());
    args.n_min = 150;
    args.ratio = 10.0;
    cmd_gen(&args).unwrap();
    let ds = load_csv(&dir.path().join("dataset.csv"), &CsvSchema::default()).unwrap();
    assert_eq!(ds.n_samples(), 1650);
}

#[test]
fn gen_accepts_explicit_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = gen_args(dir.path());
    args.boxes = Some("2.4:3.4:0:2.5;1.25:6.25:0:2.5".into());
    cmd_gen(&args).unwrap();
    let ds = load_csv(&dir.path().join("dataset.csv"), &CsvSchema::default()).unwrap();
    assert_eq!(ds.dim(), 2);
}

#[test]
fn pipeline_produces_all_artifacts() {
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();

    let sweep_dir = tempfile::tempdir().unwrap();
    cmd_sweep(&sweep_args(data_dir.path(), sweep_dir.path())).unwrap();

    let report = fs::read_to_string(sweep_dir.path().join("sweep.tsv")).unwrap();
    assert!(report.contains("r\titerations\tobjective\tvalidation_f"));
    assert!(report.contains("rank\tfeature_index\tfeature_name\tscore"));
    // T = 3 sweep points plus headers and ranking lines
    assert_eq!(
        report
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .count(),
        1 + 3 + 1 + 4 // r-header, 3 points, rank-header, 4 features
    );

    let (projection, meta) = read_model(&sweep_dir.path().join("model.txt")).unwrap();
    assert_eq!(projection.nrows(), 5); // 4 features + bias
    assert_eq!(projection.ncols(), 1);
    assert!(meta.lambda == 0.1 || meta.lambda == 1.0);
    assert!(meta.iterations > 0);

    let eval_dir = tempfile::tempdir().unwrap();
    let eval = EvalArgs {
        data: data_args(data_dir.path()),
        model: sweep_dir.path().join("model.txt"),
        out: eval_dir.path().to_path_buf(),
        k: "2,3".into(),
        repeats: 4,
        seed: 0,
        max_iter: 50,
        rel_tol: 1e-6,
        config: None,
    };
    cmd_eval(&eval).unwrap();

    let eval_tsv = fs::read_to_string(eval_dir.path().join("eval.tsv")).unwrap();
    // 2 methods x 2 k x 3 splits x 2 metrics data rows
    let data_rows = eval_tsv
        .lines()
        .filter(|l| l.starts_with("CSFS") || l.starts_with("EqualCost"))
        .count();
    assert_eq!(data_rows, 24);

    let compare = fs::read_to_string(eval_dir.path().join("compare.tsv")).unwrap();
    // per k: 4 seed rows + mean + two sign rows
    for k in ["2", "3"] {
        let rows = compare
            .lines()
            .filter(|l| l.starts_with(&format!("{k}\t")))
            .count();
        assert_eq!(rows, 7, "k={k} rows in {compare}");
    }

    let curve = fs::read_to_string(eval_dir.path().join("curve.tsv")).unwrap();
    assert!(curve.contains("method\tk\tf_mean\tf_std\taccuracy_mean\taccuracy_std"));
    assert_eq!(
        curve
            .lines()
            .filter(|l| l.starts_with("CSFS") || l.starts_with("EqualCost"))
            .count(),
        4
    );
}

#[test]
fn sweep_outputs_are_idempotent() {
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();

    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    cmd_sweep(&sweep_args(data_dir.path(), first.path())).unwrap();
    cmd_sweep(&sweep_args(data_dir.path(), second.path())).unwrap();

    for name in ["sweep.tsv", "model.txt"] {
        let a = fs::read_to_string(first.path().join(name)).unwrap();
        let b = fs::read_to_string(second.path().join(name)).unwrap();
        assert_eq!(
            without_generated_line(&a),
            without_generated_line(&b),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn single_point_sweep_matches_equal_cost_fit() {
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();

    let sweep_dir = tempfile::tempdir().unwrap();
    let mut args = sweep_args(data_dir.path(), sweep_dir.path());
    args.t = 1;
    args.lambda_grid = "0.5".into();
    cmd_sweep(&args).unwrap();
    let (projection, meta) = read_model(&sweep_dir.path().join("model.txt")).unwrap();
    assert_eq!(meta.r, 1.0);

    // the equal-cost fit through the library path gives the same matrix
    let ds = load_csv(&data_dir.path().join("dataset.csv"), &CsvSchema::default()).unwrap();
    let ds = fmsel_core::append_bias(&ds).unwrap();
    let splits = read_manifest(&data_dir.path().join("splits.manifest"), ds.n_samples()).unwrap();
    let config = fmsel_core::SolverConfig {
        lambda: 0.5,
        zeta: 1e-8,
        max_iter: 50,
        rel_tol: 1e-6,
        seed: 3,
    };
    let fitted = fmsel_cli::commands::equal_cost_fit(&ds, &splits, &config).unwrap();
    assert_eq!(projection, fitted.projection);
}

#[test]
fn workers_env_does_not_change_outputs() {
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();

    let serial = tempfile::tempdir().unwrap();
    let parallel = tempfile::tempdir().unwrap();
    let run = |out: &Path, workers: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_fmsel"))
            .env("FMSEL_WORKERS", workers)
            .args([
                "sweep",
                "--data",
                data_dir.path().join("dataset.csv").to_str().unwrap(),
                "--manifest",
                data_dir.path().join("splits.manifest").to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--t",
                "3",
                "--lambda-grid",
                "0.1,1,10",
                "--seed",
                "3",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    run(serial.path(), "1");
    run(parallel.path(), "3");
    for name in ["sweep.tsv", "model.txt"] {
        let a = fs::read_to_string(serial.path().join(name)).unwrap();
        let b = fs::read_to_string(parallel.path().join(name)).unwrap();
        assert_eq!(without_generated_line(&a), without_generated_line(&b));
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    // missing required flag: usage error, exit 1
    let out = Command::new(env!("CARGO_BIN_EXE_fmsel"))
        .args(["gen", "--ratio", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // malformed CSV: data error, exit 2, message names the line
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "a,b,label\n1,2,1\n3,4\n").unwrap();
    let manifest = dir.path().join("splits.manifest");
    fs::write(&manifest, "train: 0\nval: 1\ntest: 2\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fmsel"))
        .args([
            "sweep",
            "--data",
            csv.to_str().unwrap(),
            "--manifest",
            manifest.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");

    // k = 0: usage error, exit 1
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();
    let sweep_dir = tempfile::tempdir().unwrap();
    cmd_sweep(&sweep_args(data_dir.path(), sweep_dir.path())).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fmsel"))
        .args([
            "eval",
            "--data",
            data_dir.path().join("dataset.csv").to_str().unwrap(),
            "--manifest",
            data_dir.path().join("splits.manifest").to_str().unwrap(),
            "--model",
            sweep_dir.path().join("model.txt").to_str().unwrap(),
            "--out",
            data_dir.path().join("eval").to_str().unwrap(),
            "--k",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults() {
    let data_dir = tempfile::tempdir().unwrap();
    cmd_gen(&gen_args(data_dir.path())).unwrap();
    let conf = data_dir.path().join("run.conf");
    fs::write(&conf, "t = 2\nlambda-grid = 0.5\nseed = 3\n").unwrap();

    let out_dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_fmsel"))
        .args([
            "sweep",
            "--data",
            data_dir.path().join("dataset.csv").to_str().unwrap(),
            "--manifest",
            data_dir.path().join("splits.manifest").to_str().unwrap(),
            "--out",
            out_dir.path().to_str().unwrap(),
            "--config",
            conf.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let report = fs::read_to_string(out_dir.path().join("sweep.tsv")).unwrap();
    // T = 2 from config: exactly two r lines
    let r_lines = report
        .lines()
        .skip_while(|l| !l.starts_with("r\t"))
        .skip(1)
        .take_while(|l| !l.is_empty())
        .count();
    assert_eq!(r_lines, 2);
}

/// Large-instance runtime check (d=256, n~2000, T=20, one lambda); takes
/// a minute or two, run explicitly with `cargo test -- --ignored`.
#[test]
#[ignore]
fn sweep_large_instance_finishes_in_minutes() {
    let data_dir = tempfile::tempdir().unwrap();
    let mut gen = gen_args(data_dir.path());
    gen.n_min = 182;
    gen.ratio = 10.0;
    gen.d = 256;
    gen.informative = 20;
    cmd_gen(&gen).unwrap();

    let out = tempfile::tempdir().unwrap();
    let mut args = sweep_args(data_dir.path(), out.path());
    args.t = 20;
    args.lambda_grid = "1".into();
    args.max_iter = 100;
    let start = std::time::Instant::now();
    cmd_sweep(&args).unwrap();
    let elapsed = start.elapsed();
    println!("d=256 n=2002 T=20 sweep took {elapsed:?}");
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
}
