//! Experiment configuration, read from a single JSON document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::resolvent::{PotentialKind, ResolventProbe};
use crate::riesz::PairSpec;
use crate::spectra::Window;
use crate::symbols::SymbolSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RateFree,
    RatePotential,
    Commutator,
    SpectrumDistance,
    LocalSpectrum,
    Gap,
    Projection,
    EigenTrack,
    YBlowup,
    IdentitySuite,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RateFree => "rate-free",
            ExperimentKind::RatePotential => "rate-potential",
            ExperimentKind::Commutator => "commutator",
            ExperimentKind::SpectrumDistance => "spectrum-distance",
            ExperimentKind::LocalSpectrum => "local-spectrum",
            ExperimentKind::Gap => "gap",
            ExperimentKind::Projection => "projection",
            ExperimentKind::EigenTrack => "eigen-track",
            ExperimentKind::YBlowup => "y-blowup",
            ExperimentKind::IdentitySuite => "identity-suite",
        }
    }

    /// Whether the experiment ends in a rate fit.
    pub fn fits_rate(self) -> bool {
        matches!(
            self,
            ExperimentKind::RateFree
                | ExperimentKind::RatePotential
                | ExperimentKind::Commutator
                | ExperimentKind::SpectrumDistance
                | ExperimentKind::LocalSpectrum
                | ExperimentKind::Projection
                | ExperimentKind::EigenTrack
        )
    }

    /// Default slope tolerance.
    pub fn default_tolerance(self) -> f64 {
        match self {
            ExperimentKind::RateFree | ExperimentKind::Commutator => 0.15,
            ExperimentKind::RatePotential => 0.2,
            ExperimentKind::SpectrumDistance | ExperimentKind::LocalSpectrum | ExperimentKind::Projection => 0.3,
            ExperimentKind::EigenTrack => 0.4,
            _ => 0.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub experiment: String,
    pub kind: ExperimentKind,
    #[serde(default = "default_symbol")]
    pub symbol: SymbolSpec,
    #[serde(default)]
    pub pair: PairSpec,
    #[serde(default)]
    pub potential: Option<PotentialKind>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub probe: ResolventProbe,
    #[serde(default)]
    pub window: Option<Window>,
    /// Mesh sizes, strictly decreasing.
    #[serde(default = "default_h")]
    pub h: Vec<f64>,
    /// Overrides the predicted rate.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default = "default_drop")]
    pub drop_largest: usize,
    /// Imaginary parts scanned by `y-blowup`.
    #[serde(default = "default_y")]
    pub y: Vec<f64>,
    /// Real part of the `y-blowup` line.
    #[serde(default = "default_x")]
    pub blowup_x: f64,
    /// Mesh of the exact-symbol reference operator used by the eigen experiments.
    #[serde(default = "default_reference_mesh")]
    pub reference_mesh: f64,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub seed: u64,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_symbol() -> SymbolSpec {
    SymbolSpec::Laplacian
}

/// `2⁻², …, 2⁻⁷`.
pub fn default_h() -> Vec<f64> {
    (2..=7).map(|k| 2f64.powi(-k)).collect()
}

fn default_drop() -> usize {
    1
}

fn default_y() -> Vec<f64> {
    (0..5).map(|k| 2f64.powi(-k)).collect()
}

fn default_x() -> f64 {
    1.0
}

fn default_reference_mesh() -> f64 {
    1.0 / 32.0
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig {
            experiment: kind.name().into(),
            kind,
            symbol: default_symbol(),
            pair: PairSpec::default(),
            potential: None,
            grid: GridSpec::default(),
            probe: ResolventProbe::default(),
            window: None,
            h: default_h(),
            gamma: None,
            tolerance: None,
            drop_largest: default_drop(),
            y: default_y(),
            blowup_x: default_x(),
            reference_mesh: default_reference_mesh(),
            output: OutputPaths::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Configuration(format!("invalid configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(self.kind.default_tolerance())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Configuration(msg));
        if self.h.is_empty() {
            return bad("the h list is empty".into());
        }
        if self.h.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return bad(format!("every h must be positive, got {:?}", self.h));
        }
        if self.h.windows(2).any(|w| w[1] >= w[0]) {
            return bad(format!("the h list must be strictly decreasing, got {:?}", self.h));
        }
        if self.kind.fits_rate() && self.h.len() < 4 {
            return bad(format!("a rate fit needs at least 4 values of h, got {}", self.h.len()));
        }
        if self.grid.refine < 4 {
            return Err(Error::Aliasing(format!("refinement factor {} < 4", self.grid.refine)));
        }
        if let Some(w) = &self.window {
            w.validate()?;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return bad(format!("tolerance must be positive, got {t}"));
            }
        }
        if !(self.reference_mesh > 0.0) {
            return bad(format!("reference mesh must be positive, got {}", self.reference_mesh));
        }
        Ok(())
    }

    /// Replaces the h list by `count` geometric values from the current largest
    /// `h` down to `h_min`. With a fixed box each value is snapped to
    /// `box/N` with `N` even.
    pub fn override_h(&mut self, h_min: Option<f64>, count: Option<usize>) -> Result<()> {
        if h_min.is_none() && count.is_none() {
            return Ok(());
        }
        let h_max = self.h[0];
        let h_min = h_min.unwrap_or(self.h[self.h.len() - 1]);
        let count = count.unwrap_or(self.h.len());
        if !(h_min > 0.0 && h_min < h_max) || count < 2 {
            return Err(Error::Configuration(format!("cannot sweep from {h_max} to {h_min} in {count} steps")));
        }
        let q = (h_min / h_max).powf(1.0 / (count - 1) as f64);
        let box_length = match (self.grid.box_length, self.grid.n) {
            (Some(l), _) => Some(l),
            (None, Some(_)) => None,
            (None, None) => Some(32.0),
        };
        let mut hs: Vec<f64> = (0..count)
            .map(|i| {
                let h = h_max * q.powi(i as i32);
                match box_length {
                    Some(l) => {
                        let n = ((l / h / 2.0).round() as usize).max(4) * 2;
                        l / n as f64
                    }
                    None => h,
                }
            })
            .collect();
        hs.dedup();
        self.h = hs;
        self.validate()
    }
}
