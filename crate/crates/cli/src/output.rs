//! CSV tables and JSON run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::experiment::ResultRow;
use crate::scenario::Scenario;

/// Formats with 10 significant digits in the style of C's `%.10g`.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.9e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const VALUE_COLUMNS: [&str; 5] = ["analytic_ub", "analytic_lb", "mc_value", "mc_stderr", "status"];

pub fn header(s: &Scenario) -> Vec<&'static str> {
    let mut h = vec![s.sweep.param.column()];
    h.extend(VALUE_COLUMNS);
    h
}

fn cell(v: Option<f64>) -> String {
    v.map(sig10).unwrap_or_default()
}

/// The CSV table; rows carry no timing so that reruns are byte-identical.
pub fn csv_table(s: &Scenario, rows: &[ResultRow]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header(s))?;
    for r in rows {
        let status = match &r.error {
            None => "ok".to_string(),
            Some(e) => format!("error: {e}"),
        };
        w.write_record([
            sig10(r.x),
            cell(r.analytic_ub),
            cell(r.analytic_lb),
            cell(r.mc_value),
            cell(r.mc_stderr),
            status,
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn config_hash(s: &Scenario) -> String {
    let digest = Sha256::digest(s.canonical().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub name: String,
    pub mode: &'static str,
    pub metric: &'static str,
    pub sweep_param: &'static str,
    pub seed: u64,
    pub mc_samples: usize,
    pub inner_samples: usize,
    pub config_sha256: String,
    pub csv: String,
    pub rows: usize,
    pub failed_rows: usize,
    pub row_wall_ms: Vec<f64>,
    pub total_runtime_ms: f64,
    pub workers: usize,
    pub config: String,
}

impl Manifest {
    pub fn new(s: &Scenario, rows: &[ResultRow], csv: &Path, total_ms: f64, workers: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            name: s.name.clone(),
            mode: s.mode.name(),
            metric: s.metric.name(),
            sweep_param: s.sweep.param.name(),
            seed: s.mc.seed,
            mc_samples: s.mc.samples,
            inner_samples: s.inner_samples,
            config_sha256: config_hash(s),
            csv: csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            rows: rows.len(),
            failed_rows: rows.iter().filter(|r| r.error.is_some()).count(),
            row_wall_ms: rows.iter().map(|r| r.wall_ms).collect(),
            total_runtime_ms: total_ms,
            workers,
            config: s.canonical(),
        }
    }
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("CSV encoding failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.manifest.json`.
pub fn write_outputs(
    dir: &Path,
    s: &Scenario,
    rows: &[ResultRow],
    total_ms: f64,
    workers: usize,
) -> Result<(PathBuf, PathBuf), OutputError> {
    fs::create_dir_all(dir).map_err(io_at(dir))?;
    let csv_path = dir.join(format!("{}.csv", s.name));
    let manifest_path = dir.join(format!("{}.manifest.json", s.name));
    fs::write(&csv_path, csv_table(s, rows)?).map_err(io_at(&csv_path))?;
    let m = Manifest::new(s, rows, &csv_path, total_ms, workers);
    let mut body = serde_json::to_vec_pretty(&m)?;
    body.push(b'\n');
    fs::File::create(&manifest_path)
        .and_then(|mut f| f.write_all(&body))
        .map_err(io_at(&manifest_path))?;
    Ok((csv_path, manifest_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(sig10(0.5), "0.5");
        assert_eq!(sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig10(-10.0), "-10");
        assert_eq!(sig10(2.5), "2.5");
        assert_eq!(sig10(123456.789012345), "123456.789");
        assert_eq!(sig10(1.234e-7), "1.234e-7");
        assert_eq!(sig10(6.02214076e23), "6.02214076e23");
        assert_eq!(sig10(0.00012345678912), "0.0001234567891");
        assert_eq!(sig10(0.0), "0");
    }

    #[test]
    fn round_trip_precision() {
        for &x in &[0.7205123456789, 1e-3 / 7.0, 14_999.0 / 7.0] {
            let y: f64 = sig10(x).parse().unwrap();
            assert!((y - x).abs() <= 5e-10 * x.abs());
        }
    }

    #[test]
    fn table_layout() {
        let s = Scenario::parse("mode = static-nearest\nsweep.param = theta\nsweep.values = 0, 1\n").unwrap();
        let rows = vec![
            ResultRow {
                x: 0.0,
                analytic_ub: Some(0.25),
                analytic_lb: None,
                mc_value: Some(0.2),
                mc_stderr: Some(0.01),
                wall_ms: 3.0,
                error: None,
            },
            ResultRow {
                x: 1.0,
                analytic_ub: None,
                analytic_lb: None,
                mc_value: None,
                mc_stderr: None,
                wall_ms: 1.0,
                error: Some("quadrature did not converge, twice".into()),
            },
        ];
        let t = String::from_utf8(csv_table(&s, &rows).unwrap()).unwrap();
        assert_eq!(
            t,
            "theta_db,analytic_ub,analytic_lb,mc_value,mc_stderr,status\n\
             0,0.25,,0.2,0.01,ok\n\
             1,,,,,\"error: quadrature did not converge, twice\"\n"
        );
    }

    #[test]
    fn hash_tracks_content() {
        let a = Scenario::parse("mode = gue\nsweep.param = theta\nsweep.values = 0\n").unwrap();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.mc.seed += 1;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}
