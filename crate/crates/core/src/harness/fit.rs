//! Log-log least squares for convergence rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(log h, log error)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Smallest coefficient of determination accepted by a verdict.
pub const MIN_R2: f64 = 0.98;

/// Fits `log error = intercept + slope·log h` after dropping the
/// `drop_largest` points with the largest `h`.
pub fn fit_rate(points: &[(f64, f64)], drop_largest: usize) -> Result<Fit> {
    if let Some(&(h, e)) = points.iter().find(|(h, e)| !(*h > 0.0) || !(*e > 0.0) || !h.is_finite() || !e.is_finite()) {
        return Err(Error::DegenerateData(format!("cannot take logarithms of h = {h}, error = {e}")));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let kept = &pts[drop_largest.min(pts.len())..];
    if kept.len() < 3 {
        return Err(Error::DegenerateData(format!("{} points left after dropping {drop_largest}, need 3", kept.len())));
    }
    let k = kept.len() as f64;
    let xs: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateData("all mesh sizes coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(Fit { slope, intercept, r2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// Fitted rate against its prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// `(h, error)` sorted by decreasing `h`.
    pub points: Vec<(f64, f64)>,
    pub drop_largest: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub gamma: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl RateReport {
    pub fn new(points: &[(f64, f64)], gamma: f64, tolerance: f64, drop_largest: usize) -> Result<RateReport> {
        let fit = fit_rate(points, drop_largest)?;
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let ok = (fit.slope - gamma).abs() <= tolerance && fit.r2 >= MIN_R2;
        Ok(RateReport {
            points: pts,
            drop_largest,
            slope: fit.slope,
            intercept: fit.intercept,
            r2: fit.r2,
            gamma,
            tolerance,
            verdict: Verdict::from_bool(ok),
        })
    }
}
