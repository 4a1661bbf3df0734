//! Resolvents of the discrete and continuum operators and the norm of their
//! difference `D(z) = J_h(H_h − z)⁻¹K_h − (H − z)⁻¹`.

pub mod commutator;
pub mod fiber;
pub mod hamiltonian;
pub mod krylov;
pub mod potential;
pub mod power;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::linear::{LinearMap, Vector};
use crate::lattice::transfer::Transfer;
use crate::lattice::ContinuumProxy;
use crate::riesz::RieszPair;
use crate::symbols::Symbol;

pub use commutator::{potential_commutator_norm, Commutator};
pub use fiber::{error_norm_fiber, error_norm_fiber_on_grid, FiberEstimate, FiberSampling};
pub use hamiltonian::{apply_resolvent, FourierHamiltonian};
pub use krylov::GmresOptions;
pub use potential::{PotentialKind, PotentialSpec};
pub use power::{power_norm, PowerEstimate, PowerOptions};

/// How operator norms are estimated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    #[default]
    Fiber,
    Power,
}

/// Spectral parameter and solver settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventProbe {
    /// `[re, im]`.
    #[serde(default = "default_z")]
    pub z: [f64; 2],
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub method: NormMethod,
}

fn default_z() -> [f64; 2] {
    [-1.0, 0.0]
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    500
}

impl Default for ResolventProbe {
    fn default() -> Self {
        ResolventProbe { z: default_z(), tol: default_tol(), max_iter: default_max_iter(), method: NormMethod::Fiber }
    }
}

impl ResolventProbe {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }

    pub fn gmres(&self) -> GmresOptions {
        GmresOptions { tol: self.tol, restart: 50, max_iter: self.max_iter }
    }
}

/// Matrix-free `D(z)` on proxy frequency coefficients.
pub struct ErrorOperator {
    transfer: Transfer,
    discrete: FourierHamiltonian,
    continuum: FourierHamiltonian,
    z: Complex64,
    opts: GmresOptions,
    factor: Complex64,
}

impl ErrorOperator {
    pub fn new(
        symbol: &Symbol,
        pair: &RieszPair,
        potential: Option<&PotentialSpec>,
        proxy: &ContinuumProxy,
        z: Complex64,
        opts: GmresOptions,
    ) -> Result<ErrorOperator> {
        let discrete = FourierHamiltonian::discrete(symbol, proxy.coarse(), potential)?;
        let continuum = FourierHamiltonian::continuum(symbol, proxy.fine(), potential)?;
        discrete.check_z(z)?;
        continuum.check_z(z)?;
        Ok(ErrorOperator {
            transfer: Transfer::new(pair, proxy)?,
            discrete,
            continuum,
            z,
            opts,
            factor: Complex64::new(1.0, 0.0),
        })
    }

    /// Multiplies the operator by a constant; a hook for homogeneity checks.
    pub fn scaled(mut self, factor: Complex64) -> ErrorOperator {
        self.factor = factor;
        self
    }

    pub fn transfer(&self) -> &Transfer {
        &self.transfer
    }

    fn apply_at(&self, z: Complex64, f: &[Complex64], adjoint: bool) -> Result<Vector> {
        let j = self.transfer.embedding();
        let k = self.transfer.discretization();
        // D(z)* = K*(H_h − z̄)⁻¹J* − (H − z̄)⁻¹.
        let coarse_in = if adjoint { j.apply_adjoint(f)? } else { k.apply(f)? };
        let solved = self.discrete.resolvent(z, &coarse_in, &self.opts)?;
        let mut out = if adjoint { k.apply_adjoint(&solved)? } else { j.apply(&solved)? };
        let direct = self.continuum.resolvent(z, f, &self.opts)?;
        let c = if adjoint { self.factor.conj() } else { self.factor };
        out.iter_mut().zip(direct).for_each(|(o, d)| *o = c * (*o - d));
        Ok(out)
    }
}

impl LinearMap for ErrorOperator {
    fn input_len(&self) -> usize {
        self.transfer.fine_len()
    }
    fn output_len(&self) -> usize {
        self.transfer.fine_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        self.apply_at(self.z, x, false)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.apply_at(self.z.conj(), y, true)
    }
}

/// Power-iteration estimate of `‖D(z)‖`.
pub fn error_norm_power(op: &ErrorOperator, opts: &PowerOptions) -> Result<PowerEstimate> {
    power_norm(op, opts)
}

/// Norms `‖D(x + iy)‖` along a vertical line, with the per-halving growth.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlowupReport {
    pub x: f64,
    pub y: Vec<f64>,
    pub norms: Vec<f64>,
    /// `norm(y_{i+1}) / norm(y_i)` for consecutive entries.
    pub ratios: Vec<f64>,
    /// Least-squares exponent `p` in `norm ∝ y^{−p}`.
    pub exponent: f64,
}

/// Evaluates `norm_at(x + iy)` for every `y` and summarizes the growth.
pub fn y_blowup_scan(
    norm_at: impl Fn(Complex64) -> Result<f64>,
    x: f64,
    ys: &[f64],
) -> Result<BlowupReport> {
    if ys.iter().any(|&y| !(y > 0.0 && y <= 1.0)) {
        return Err(Error::Parameter("every y must lie in (0, 1]".into()));
    }
    if ys.len() < 2 {
        return Err(Error::Parameter("need at least two values of y".into()));
    }
    let norms: Vec<f64> = ys.iter().map(|&y| norm_at(Complex64::new(x, y))).collect::<Result<_>>()?;
    let ratios = norms.windows(2).map(|w| w[1] / w[0]).collect();
    let lx: Vec<f64> = ys.iter().map(|y| -y.ln()).collect();
    let ly: Vec<f64> = norms.iter().map(|n| n.max(f64::MIN_POSITIVE).ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let exponent = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / lx.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    Ok(BlowupReport { x, y: ys.to_vec(), norms, ratios, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeGrid;

    #[test]
    fn error_operator_is_linear() {
        let sym = Symbol::laplacian(1).unwrap();
        let pair = RieszPair::standard(1).unwrap();
        let v = PotentialSpec::cos(1.0);
        let proxy = ContinuumProxy::new(LatticeGrid::with_box(1, 0.25, 16.0).unwrap(), 4).unwrap();
        let op = ErrorOperator::new(&sym, &pair, Some(&v), &proxy, Complex64::new(-1.0, 1.0), GmresOptions::default()).unwrap();
        let n = op.input_len();
        let f: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let g: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 0.05).cos(), 0.2)).collect();
        let (a, b) = (Complex64::new(2.0, -1.0), Complex64::new(-0.5, 0.3));
        let comb: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let lhs = op.apply(&comb).unwrap();
        let df = op.apply(&f).unwrap();
        let dg = op.apply(&g).unwrap();
        let scale = lhs.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let err = lhs.iter().zip(df.iter().zip(&dg)).map(|(l, (p, q))| (l - a * p - b * q).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-9 * scale.max(1.0), "{err}");
    }

    #[test]
    fn power_matches_fiber_on_grid() {
        let sym = Symbol::frac_lap(1, 1.5).unwrap();
        let pair = RieszPair::standard(1).unwrap();
        let z = Complex64::new(-1.0, 0.0);
        let h = 0.125;
        let grid = LatticeGrid::new(1, h, 128).unwrap();
        let proxy = ContinuumProxy::new(grid, 4).unwrap();
        let op = ErrorOperator::new(&sym, &pair, None, &proxy, z, GmresOptions::default()).unwrap();
        let p = error_norm_power(&op, &PowerOptions::default()).unwrap().norm;
        let f = error_norm_fiber_on_grid(&sym, &pair, h, z, 128).unwrap();
        assert!((p - f).abs() < 1e-3 * f, "power {p} fiber {f}");

        let tripled = ErrorOperator::new(&sym, &pair, None, &proxy, z, GmresOptions::default()).unwrap().scaled(3.0.into());
        let p3 = error_norm_power(&tripled, &PowerOptions::default()).unwrap().norm;
        assert!((p3 - 3.0 * p).abs() < 1e-8 * p.max(1.0) + 1e-6 * p);
    }

    #[test]
    fn blowup_scan_shapes() {
        let rep = y_blowup_scan(|z| Ok(1.0 / z.im), 1.0, &[1.0, 0.5, 0.25]).unwrap();
        assert_eq!(rep.norms.len(), 3);
        assert!(rep.ratios.iter().all(|r| (r - 2.0).abs() < 1e-12));
        assert!((rep.exponent - 1.0).abs() < 1e-12);
        assert!(y_blowup_scan(|_| Ok(1.0), 1.0, &[0.0, 0.5]).is_err());
    }
}
