use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{ExperimentReport, TrialRecord};

use super::RunConfig;

pub const CONFIG_FILE: &str = "config.json";
pub const REPORT_FILE: &str = "report.json";
pub const TRIALS_CSV: &str = "trials.csv";
pub const HISTOGRAM_CSV: &str = "centered_histogram.csv";
pub const HOM_MOMENTS_CSV: &str = "hom_moments.csv";
pub const L_MOMENTS_CSV: &str = "l_moments.csv";

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the config echo, the JSON report and the CSV tables into `dir`.
pub fn write_run(dir: &Path, config: &RunConfig, report: &ExperimentReport, records: &[TrialRecord]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };

    fs::write(put(CONFIG_FILE), config.to_json()? + "\n")?;
    fs::write(put(REPORT_FILE), serde_json::to_string_pretty(report)? + "\n")?;

    let mut w = csv_writer(&put(TRIALS_CSV))?;
    w.write_record(["trial", "partition", "free_rank", "saturated", "precision_used"])?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.partition.to_string(),
            r.free_rank.to_string(),
            r.saturated.to_string(),
            r.precision_used.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv_writer(&put(HISTOGRAM_CSV))?;
    let mut header: Vec<String> = (1..=report.d).map(|i| format!("c{i}")).collect();
    header.extend(["count".into(), "mass".into()]);
    w.write_record(&header)?;
    for bin in &report.centered_histogram {
        let mut row: Vec<String> = bin.vector.values().iter().map(i64::to_string).collect();
        row.extend([bin.count.to_string(), bin.mass.to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv_writer(&put(HOM_MOMENTS_CSV))?;
    w.write_record(["group", "ell", "trials_used", "mean", "rescaled", "ci_low", "ci_high", "target", "target_value"])?;
    for h in &report.hom_moments {
        w.write_record([
            h.group_name.clone(),
            h.ell.to_string(),
            h.trials_used.to_string(),
            h.mean.to_string(),
            h.rescaled.to_string(),
            opt(h.ci.map(|c| c.low)),
            opt(h.ci.map(|c| c.high)),
            h.target.to_string(),
            h.target_value.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv_writer(&put(L_MOMENTS_CSV))?;
    w.write_record(["lambda", "trials_used", "mean", "ci_low", "ci_high", "target_exact", "target_scale", "target_value"])?;
    for l in &report.l_moments {
        w.write_record([
            l.lambda.to_string(),
            l.trials_used.to_string(),
            l.mean.to_string(),
            opt(l.ci.map(|c| c.low)),
            opt(l.ci.map(|c| c.high)),
            l.target_exact.to_string(),
            l.target_scale.to_string(),
            l.target_value.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(written)
}

/// Reads a report from a `report.json` path or a run directory containing one.
pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let file = if path.is_dir() { path.join(REPORT_FILE) } else { path.to_path_buf() };
    let text = fs::read_to_string(&file)
        .map_err(|e| Error::Config(format!("cannot read report {}: {e}", file.display())))?;
    Ok(serde_json::from_str(&text)?)
}
