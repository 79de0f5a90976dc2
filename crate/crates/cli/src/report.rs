//! Tab-separated report files. Every writer emits a `# generated` header
//! line (the only non-deterministic byte in any artifact) followed by
//! fixed-order columns.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use fmsel_core::{CompareRecord, EvalReport, SolverConfig, SweepResult};

use crate::Result;

fn generated_line() -> String {
    let seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# generated\t{seconds}\n")
}

/// Sweep report: one line per r (r, iterations, final objective,
/// validation F), then the ranked-feature section (rank, feature index,
/// feature name, score).
pub fn write_sweep_report(
    path: &Path,
    sweep: &SweepResult,
    feature_names: &[String],
    lambda: f64,
    beta: f64,
    t: usize,
    config: &SolverConfig,
) -> Result<()> {
    let mut out = generated_line();
    out.push_str(&format!(
        "# lambda\t{lambda}\tbeta\t{beta}\tT\t{t}\tseed\t{}\tzeta\t{}\tmax_iter\t{}\trel_tol\t{}\tbest_r\t{}\n",
        config.seed,
        config.zeta,
        config.max_iter,
        config.rel_tol,
        sweep.best_r()
    ));
    out.push_str("r\titerations\tobjective\tvalidation_f\n");
    for record in &sweep.records {
        let f = record
            .validation_f
            .map(|f| f.to_string())
            .unwrap_or_else(|| "NA".to_string());
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            record.r,
            record.fit.iterations(),
            record.fit.final_objective(),
            f
        ));
    }
    out.push('\n');
    out.push_str("rank\tfeature_index\tfeature_name\tscore\n");
    for (rank, &(index, score)) in sweep.ranking.iter().enumerate() {
        let name = feature_names
            .get(index)
            .map(String::as_str)
            .unwrap_or("?");
        out.push_str(&format!("{}\t{index}\t{name}\t{score}\n", rank + 1));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Long-format evaluation table: method, k, split, metric, mean, std.
pub fn write_eval_reports(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut out = generated_line();
    if let Some(first) = reports.first() {
        out.push_str(&format!(
            "# ridge\t{}\trepeats\t{}\tbase_seed\t{}\n",
            first.ridge, first.repeats, first.base_seed
        ));
    }
    out.push_str("method\tk\tsplit\tmetric\tmean\tstd\n");
    for report in reports {
        for (split, summary) in [
            ("train", &report.train),
            ("validation", &report.validation),
            ("test", &report.test),
        ] {
            out.push_str(&format!(
                "{}\t{}\t{split}\taccuracy\t{}\t{}\n",
                report.method.as_str(),
                report.k,
                summary.accuracy_mean,
                summary.accuracy_std
            ));
            out.push_str(&format!(
                "{}\t{}\t{split}\tf_measure\t{}\t{}\n",
                report.method.as_str(),
                report.k,
                summary.f_mean,
                summary.f_std
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Paired comparison table: per-seed differences then summary lines.
pub fn write_compare(path: &Path, records: &[CompareRecord]) -> Result<()> {
    let mut out = generated_line();
    out.push_str("k\tseed\tf_diff\taccuracy_diff\n");
    for record in records {
        for diff in &record.per_seed {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                record.k, diff.seed, diff.f_diff, diff.accuracy_diff
            ));
        }
        out.push_str(&format!(
            "{}\tmean\t{}\t{}\n",
            record.k, record.f_gap_mean, record.accuracy_gap_mean
        ));
        let (fw, ft, fl) = record.f_signs;
        out.push_str(&format!("{}\tf_signs\t{fw}/{ft}/{fl}\t\n", record.k));
        let (aw, at, al) = record.accuracy_signs;
        out.push_str(&format!("{}\taccuracy_signs\t{aw}/{at}/{al}\t\n", record.k));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Plot-ready test-split curves: k vs F and k vs accuracy, per method.
pub fn write_curve(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut out = generated_line();
    out.push_str("method\tk\tf_mean\tf_std\taccuracy_mean\taccuracy_std\n");
    for report in reports {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            report.method.as_str(),
            report.k,
            report.test.f_mean,
            report.test.f_std,
            report.test.accuracy_mean,
            report.test.accuracy_std
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Strip the volatile `# generated` line, for byte-comparing artifacts.
pub fn without_generated_line(content: &str) -> String {
    content
        .lines()
        .filter(|line| !line.starts_with("# generated"))
        .collect::<Vec<_>>()
        .join("\n")
}
