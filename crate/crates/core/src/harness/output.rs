use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::run::RunSummary;
use crate::error::{Error, Result};

/// One CSV line; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub decoder: String,
    pub noise: String,
    pub d: usize,
    pub eps: f64,
    pub chi: Option<usize>,
    pub trials: u64,
    pub failures: u64,
    pub p_logical: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub wall_s: f64,
}

impl From<&RunSummary> for CsvRow {
    fn from(s: &RunSummary) -> Self {
        Self {
            decoder: s.decoder.to_string(),
            noise: s.noise.clone(),
            d: s.d,
            eps: s.eps,
            chi: s.chi,
            trials: s.trials,
            failures: s.failures,
            p_logical: s.p_logical,
            ci_lo: s.ci_lo,
            ci_hi: s.ci_hi,
            seed: s.seed,
            wall_s: s.wall_s,
        }
    }
}

pub fn csv_header() -> &'static str {
    "decoder,noise,d,eps,chi,trials,failures,p_logical,ci_lo,ci_hi,seed,wall_s"
}

pub fn write_csv<W: Write>(out: W, rows: &[RunSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRow::from(r)).map_err(csv_error)?;
    }
    // An empty run still gets a header.
    if rows.is_empty() {
        w.write_record(csv_header().split(',')).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Run metadata stored next to the CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: ExperimentConfig,
    pub threads: Option<usize>,
    pub points: Vec<RunSummary>,
}

/// `results.csv` becomes `results.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(sidecar)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{DecoderKind, StopReason};

    #[test]
    fn csv_layout() {
        let mut a = RunSummary::new(DecoderKind::MldMps, "depolarizing".into(), 5, 0.1, Some(6), 100, 7, 3, 0.5, StopReason::TrialBudget);
        a.decoder_failures = 1;
        let b = RunSummary::new(DecoderKind::Mwm, "x".into(), 7, 0.05, None, 10, 0, 3, 0.25, StopReason::FailureTarget);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[a.clone(), b]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], csv_header());
        assert!(lines[1].starts_with("mld_mps,depolarizing,5,0.1,6,100,7,0.07,"));
        assert!(lines[2].starts_with("mwm,x,7,0.05,,10,0,0.0,"));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<CsvRow> = reader.deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(rows[0], CsvRow::from(&a));

        let mut empty = Vec::new();
        write_csv(&mut empty, &[]).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), csv_header());
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("out.csv");
        assert_eq!(sidecar_path(&csv), dir.path().join("out.json"));
        let config = ExperimentConfig::from_json(
            r#"{"decoder": "mwm", "noise": {"model": "x"}, "d": [3], "eps": [0.1], "trials": 10}"#,
        )
        .unwrap();
        let point = RunSummary::new(DecoderKind::Mwm, "x".into(), 3, 0.1, None, 10, 1, 0, 0.1, StopReason::TrialBudget);
        let side = Sidecar { config: config.clone(), threads: Some(2), points: vec![point] };
        write_sidecar(&sidecar_path(&csv), &side).unwrap();
        let back: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&csv)).unwrap()).unwrap();
        assert_eq!(back.config, config);
        assert_eq!(back.points[0].stop, StopReason::TrialBudget);
    }
}
