//! Experiment reports and their CSV / JSON forms.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use super::fit::{RateReport, Verdict};
use crate::error::Result;

/// Column names of the CSV form, in order.
pub const CSV_HEADER: [&str; 8] = ["experiment", "kind", "symbol", "h", "error", "slope", "gamma_predicted", "verdict"];

/// A named pass/fail check with the value it was decided on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(default)]
    pub h: Option<f64>,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: &str, h: Option<f64>, value: f64, threshold: f64) -> Check {
        Check { name: name.into(), h, value, threshold, verdict: Verdict::from_bool(value <= threshold) }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: &str, h: Option<f64>, value: f64, threshold: f64) -> Check {
        Check { name: name.into(), h, value, threshold, verdict: Verdict::from_bool(value >= threshold) }
    }

    pub fn flag(name: &str, h: Option<f64>, ok: bool) -> Check {
        let v = if ok { 1.0 } else { 0.0 };
        Check { name: name.into(), h, value: v, threshold: 1.0, verdict: Verdict::from_bool(ok) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub kind: ExperimentKind,
    pub symbol: String,
    /// `(h, error)` sorted by decreasing `h`.
    pub rows: Vec<(f64, f64)>,
    pub rate: Option<RateReport>,
    pub checks: Vec<Check>,
    /// Kind-specific data.
    #[serde(default)]
    pub details: serde_json::Value,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(experiment: &str, kind: ExperimentKind, symbol: &str) -> Report {
        Report {
            experiment: experiment.into(),
            kind,
            symbol: symbol.into(),
            rows: Vec::new(),
            rate: None,
            checks: Vec::new(),
            details: serde_json::Value::Null,
            verdict: Verdict::Pass,
        }
    }

    /// Recomputes the overall verdict: every check and the rate must pass.
    pub fn finish(mut self) -> Report {
        let ok = self.checks.iter().all(|c| c.verdict.passed()) && self.rate.as_ref().is_none_or(|r| r.verdict.passed());
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// One data row per `(h, error)`, one row per check, then a summary row
    /// when a rate was fitted. An empty report is just the header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        let kind = self.kind.name();
        for (h, e) in &self.rows {
            w.write_record([&self.experiment, kind, &self.symbol, &h.to_string(), &e.to_string(), "", "", ""])?;
        }
        for c in &self.checks {
            let h = c.h.map(|h| h.to_string()).unwrap_or_default();
            let name = format!("{}:{}", self.experiment, c.name);
            w.write_record([&name, kind, &self.symbol, &h, &c.value.to_string(), "", "", &c.verdict.to_string()])?;
        }
        if let Some(r) = &self.rate {
            w.write_record([
                &self.experiment,
                kind,
                &self.symbol,
                "",
                "",
                &r.slope.to_string(),
                &r.gamma.to_string(),
                &r.verdict.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes the report to `path`.
pub fn emit(report: &Report, format: Format, path: &Path) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => report.write_csv(&mut file)?,
        Format::Json => {
            file.write_all(report.to_json_string()?.as_bytes())?;
            file.write_all(b"\n")?;
        }
    }
    file.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rate_report() -> Report {
        let pts: Vec<(f64, f64)> = (2..=7).map(|k| 2f64.powi(-k)).map(|h| (h, 0.3 * h * h)).collect();
        let mut r = Report::new("free-laplacian", ExperimentKind::RateFree, "laplacian");
        r.rows = pts.clone();
        r.rate = Some(RateReport::new(&pts, 2.0, 0.15, 1).unwrap());
        r.finish()
    }

    #[test]
    fn empty_report_is_header_only() {
        let csv = Report::new("e", ExperimentKind::Gap, "laplacian").to_csv_string().unwrap();
        assert_eq!(csv, "experiment,kind,symbol,h,error,slope,gamma_predicted,verdict\n");
    }

    #[test]
    fn rate_report_rows() {
        let csv = rate_report().to_csv_string().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 6 + 1);
        assert!(lines[1].starts_with("free-laplacian,rate-free,laplacian,0.25,"));
        assert!(lines[7].ends_with(",2,pass"), "{}", lines[7]);
    }

    #[test]
    fn json_round_trip() {
        let r = rate_report();
        let back = Report::from_json(&r.to_json_string().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn emit_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let r = rate_report();
        let p = dir.path().join("out.csv");
        emit(&r, Format::Csv, &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), r.to_csv_string().unwrap());
        assert!(emit(&r, Format::Json, &dir.path().join("missing/out.json")).is_err());
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = rate_report();
        r.checks.push(Check::at_most("defect", None, 1.0, 1e-8));
        assert!(!r.finish().passed());
    }
}
