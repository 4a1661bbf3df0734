//! Bounded Hölder potentials `V: R^d → R`.
//!
//! Builtin potentials are even in every coordinate, so sampling them on a
//! periodic box centred at the origin keeps the wrap continuous.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::theta_prime;

type PotentialFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A bounded potential with its sup-norm bound and Hölder exponent.
#[derive(Clone)]
pub struct PotentialSpec {
    label: String,
    eval: PotentialFn,
    sup: f64,
    /// Per-axis bound of potentials summed over coordinates.
    axis_sup: Option<f64>,
    theta: f64,
    zero: bool,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("label", &self.label)
            .field("sup", &self.sup)
            .field("theta", &self.theta)
            .finish()
    }
}

impl PotentialSpec {
    pub fn custom(
        label: &str,
        sup: f64,
        theta: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<PotentialSpec> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::Parameter(format!("Hölder exponent must lie in (0, 1], got {theta}")));
        }
        if !(sup >= 0.0) || !sup.is_finite() {
            return Err(Error::Parameter(format!("sup bound must be finite and non-negative, got {sup}")));
        }
        Ok(PotentialSpec { label: label.to_string(), eval: Arc::new(eval), sup, axis_sup: None, theta, zero: false })
    }

    pub fn zero() -> PotentialSpec {
        PotentialSpec { label: "zero".into(), eval: Arc::new(|_| 0.0), sup: 0.0, axis_sup: None, theta: 1.0, zero: true }
    }

    pub fn constant(value: f64) -> PotentialSpec {
        PotentialSpec {
            label: format!("constant({value})"),
            eval: Arc::new(move |_| value),
            sup: value.abs(),
            axis_sup: None,
            theta: 1.0,
            zero: value == 0.0,
        }
    }

    /// `amplitude · Σᵢ cos xᵢ`.
    pub fn cos(amplitude: f64) -> PotentialSpec {
        PotentialSpec {
            label: format!("cos(a={amplitude})"),
            eval: Arc::new(move |x| amplitude * x.iter().map(|v| v.cos()).sum::<f64>()),
            sup: amplitude.abs(),
            axis_sup: Some(amplitude.abs()),
            theta: 1.0,
            zero: amplitude == 0.0,
        }
    }

    /// `Σᵢ |sin xᵢ|^θ`.
    pub fn sin_abs(theta: f64) -> Result<PotentialSpec> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::Parameter(format!("Hölder exponent must lie in (0, 1], got {theta}")));
        }
        Ok(PotentialSpec {
            label: format!("sinabs(theta={theta})"),
            eval: Arc::new(move |x| x.iter().map(|v| v.sin().abs().powf(theta)).sum()),
            sup: 1.0,
            axis_sup: Some(1.0),
            theta,
            zero: false,
        })
    }

    /// `amplitude · Πᵢ sech² xᵢ`.
    pub fn sech2(amplitude: f64) -> PotentialSpec {
        PotentialSpec {
            label: format!("sech2(a={amplitude})"),
            eval: Arc::new(move |x| amplitude * x.iter().map(|v| 1.0 / v.cosh().powi(2)).product::<f64>()),
            sup: amplitude.abs(),
            axis_sup: None,
            theta: 1.0,
            zero: amplitude == 0.0,
        }
    }

    /// Fills in dimension-dependent sup bounds of the sum-type builtins.
    pub fn for_dim(mut self, dim: usize) -> PotentialSpec {
        if let Some(a) = self.axis_sup {
            self.sup = a * dim as f64;
        }
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    /// `‖V‖_∞`, for `d = 1` unless [`PotentialSpec::for_dim`] was applied.
    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `μ = ‖V‖_∞ + 1`, so `(−∞, −μ]` avoids both spectra.
    pub fn mu(&self) -> f64 {
        self.sup + 1.0
    }

    /// Effective exponent `θ′` for a pair with decay exponent `tau`.
    pub fn theta_prime(&self, tau: f64, dim: usize) -> Result<f64> {
        theta_prime(self.theta, tau, dim)
    }

    /// Largest `|V(x)|` and largest Hölder quotient `|V(x)−V(y)|/|x−y|^θ`
    /// over random pairs in `[−extent, extent]^d` with `|x−y| ≤ 1`.
    pub fn sampled_bounds(&self, dim: usize, extent: f64, samples: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_abs = 0.0f64;
        let mut max_quot = 0.0f64;
        let mut x = vec![0.0; dim];
        let mut y = vec![0.0; dim];
        for _ in 0..samples {
            for k in 0..dim {
                x[k] = rng.random_range(-extent..extent);
                y[k] = x[k] + 10f64.powf(rng.random_range(-8.0..0.0)) * rng.random_range(-1.0..1.0);
            }
            let (vx, vy) = (self.value(&x), self.value(&y));
            max_abs = max_abs.max(vx.abs());
            let dist = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if dist > 0.0 {
                max_quot = max_quot.max((vx - vy).abs() / dist.powf(self.theta));
            }
        }
        (max_abs, max_quot)
    }
}

/// Potential configuration as it appears in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "potential", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialKind {
    Zero,
    Constant { value: f64 },
    Cos {
        #[serde(default = "unit")]
        amplitude: f64,
    },
    Sinabs { theta: f64 },
    Sech2 { amplitude: f64 },
}

fn unit() -> f64 {
    1.0
}

impl PotentialKind {
    pub fn build(&self, dim: usize) -> Result<PotentialSpec> {
        let spec = match *self {
            PotentialKind::Zero => PotentialSpec::zero(),
            PotentialKind::Constant { value } => PotentialSpec::constant(value),
            PotentialKind::Cos { amplitude } => PotentialSpec::cos(amplitude),
            PotentialKind::Sinabs { theta } => PotentialSpec::sin_abs(theta)?,
            PotentialKind::Sech2 { amplitude } => PotentialSpec::sech2(amplitude),
        };
        Ok(spec.for_dim(dim))
    }
}
