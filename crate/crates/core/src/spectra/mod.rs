//! Spectra of the truncated operators and distances between them.
//!
//! A spectrum is stored as a sorted finite set. A sampled range stands for the
//! whole closed interval between its first and last sample: distances *to* it
//! are taken to the interval, distances *from* it are taken over the samples.

pub mod analysis;
pub mod dense;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use analysis::{
    continuum_spectrum, discrete_spectrum, gap_check, resolvent_spectrum_distance, spectral_projection_distance,
    track_eigenvalues, union_with_zero_check, GapEntry, GapReport, ProjectionDistance, TrackEntry, TrackingReport,
    UnionZeroReport,
};
pub use dense::{dense_operator, DenseSpectrum, Reference, MAX_DENSE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    SampledRange,
    EigenvalueList,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSet {
    kind: SpectrumKind,
    values: Vec<f64>,
    note: String,
}

fn sorted_finite(mut values: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite spectral value {v}")));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

impl SpectrumSet {
    /// A finite set of points.
    pub fn points(values: Vec<f64>, note: &str) -> Result<SpectrumSet> {
        Ok(SpectrumSet { kind: SpectrumKind::EigenvalueList, values: sorted_finite(values)?, note: note.into() })
    }

    /// `[lo, hi]` sampled at `samples` equispaced points, both ends included.
    pub fn range(lo: f64, hi: f64, samples: usize, note: &str) -> Result<SpectrumSet> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("invalid range [{lo}, {hi}]")));
        }
        let n = samples.max(2);
        let values = if lo == hi {
            vec![lo]
        } else {
            (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
        };
        Ok(SpectrumSet { kind: SpectrumKind::SampledRange, values: sorted_finite(values)?, note: note.into() })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Union as a point set; a range loses its interval meaning.
    pub fn union(&self, other: &SpectrumSet) -> Result<SpectrumSet> {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        SpectrumSet::points(v, &self.note)
    }

    /// Distance from `x` to the set.
    pub fn distance_to(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return f64::INFINITY;
        }
        let v = &self.values;
        if self.kind == SpectrumKind::SampledRange {
            return (v[0] - x).max(x - v[v.len() - 1]).max(0.0);
        }
        let i = v.partition_point(|&p| p < x);
        let mut best = f64::INFINITY;
        if i < v.len() {
            best = v[i] - x;
        }
        if i > 0 {
            best = best.min(x - v[i - 1]);
        }
        best
    }

    /// Members in the closed interval `[a, b]`. For a range the clipped
    /// endpoints are included, so the sup over the intersection is attained.
    pub fn points_in(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self.values.iter().copied().filter(|&x| x >= a && x <= b).collect();
        if self.kind == SpectrumKind::SampledRange && !self.values.is_empty() {
            let (lo, hi) = (self.values[0], self.values[self.values.len() - 1]);
            let (l, r) = (lo.max(a), hi.min(b));
            if l <= r {
                out.push(l);
                out.push(r);
            }
        }
        out
    }

    /// `{1/(λ + μ)}`. A range maps to a range with the same sample count.
    pub fn reciprocal(&self, mu: f64) -> Result<SpectrumSet> {
        if let Some(lo) = self.min() {
            if !(lo + mu > 0.0) {
                return Err(Error::Parameter(format!("μ = {mu} does not exceed −min σ = {}", -lo)));
            }
        }
        let note = format!("1/(λ+{mu}) of {}", self.note);
        match self.kind {
            SpectrumKind::SampledRange if self.len() > 1 => {
                let hi = 1.0 / (self.values[0] + mu);
                let lo = 1.0 / (self.values[self.len() - 1] + mu);
                SpectrumSet::range(lo, hi, self.len(), &note)
            }
            _ => SpectrumSet::points(self.values.iter().map(|l| 1.0 / (l + mu)).collect(), &note),
        }
    }
}

/// Closed interval `[a, b]` with a shift `μ` placing `−μ` below it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    #[serde(default)]
    pub multiplicity: Option<usize>,
}

impl Window {
    pub fn new(a: f64, b: f64, mu: f64) -> Result<Window> {
        let w = Window { a, b, mu, multiplicity: None };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) {
            return Err(Error::Configuration(format!("window needs a < b, got [{}, {}]", self.a, self.b)));
        }
        if !(self.mu > 0.0) {
            return Err(Error::Configuration(format!("μ must be positive, got {}", self.mu)));
        }
        if !(-self.mu < self.a) {
            return Err(Error::Configuration(format!("window start {} must exceed −μ = {}", self.a, -self.mu)));
        }
        Ok(())
    }
}

fn one_sided(from: &[f64], to: &SpectrumSet) -> f64 {
    from.iter().map(|&x| to.distance_to(x)).fold(f64::NEG_INFINITY, f64::max)
}

/// Hausdorff distance `max{sup_X d(x, Y), sup_Y d(y, X)}`.
pub fn hausdorff(x: &SpectrumSet, y: &SpectrumSet) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    Ok(one_sided(x.values(), y).max(one_sided(y.values(), x)))
}

/// Hausdorff distance localized to `K = [a, b]`; an empty intersection
/// contributes `−∞` and the result is clamped at 0.
pub fn local_hausdorff(x: &SpectrumSet, y: &SpectrumSet, a: f64, b: f64) -> f64 {
    let from_x = one_sided(&x.points_in(a, b), y);
    let from_y = one_sided(&y.points_in(a, b), x);
    from_x.max(from_y).max(0.0)
}
