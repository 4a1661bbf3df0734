//! Largest singular value of a matrix-free map by power iteration on `A*A`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LinearMap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    pub max_iter: usize,
    /// Stop once successive Rayleigh quotients differ by less than this, relatively.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { max_iter: 500, tol: 1e-6, restarts: 5, seed: 0x9e37 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub norm: f64,
    /// False when some restart hit the iteration cap.
    pub converged: bool,
    /// Relative Rayleigh-quotient change at the last step of the worst restart.
    pub last_increment: f64,
    pub iterations: usize,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Max over seeded restarts of `√λ_max(A*A)`.
pub fn power_norm(map: &dyn LinearMap, opts: &PowerOptions) -> Result<PowerEstimate> {
    if opts.max_iter < 50 {
        return Err(Error::Parameter(format!("power iteration needs at least 50 iterations, got {}", opts.max_iter)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = PowerEstimate { norm: 0.0, converged: true, last_increment: 0.0, iterations: 0 };
    for _ in 0..opts.restarts.max(1) {
        let mut x: Vec<Complex64> = (0..map.input_len())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let n0 = norm(&x);
        x.iter_mut().for_each(|v| *v /= n0);
        let mut lambda = 0.0f64;
        let mut increment = f64::INFINITY;
        let mut converged = false;
        let mut iters = 0;
        while iters < opts.max_iter {
            iters += 1;
            let y = map.apply(&x)?;
            let next = norm(&y).powi(2);
            let w = map.apply_adjoint(&y)?;
            let wn = norm(&w);
            increment = if next > 0.0 { (next - lambda).abs() / next } else { 0.0 };
            lambda = next;
            if wn == 0.0 || next == 0.0 {
                converged = true;
                break;
            }
            x = w.into_iter().map(|v| v / wn).collect();
            if increment < opts.tol {
                converged = true;
                break;
            }
        }
        if !converged {
            log::warn!("power iteration stopped at the cap with increment {increment:e}");
        }
        best.iterations += iters;
        best.converged &= converged;
        best.last_increment = best.last_increment.max(if converged { 0.0 } else { increment });
        best.norm = best.norm.max(lambda.sqrt());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linear::{Diagonal, Difference, Scaled};

    fn diag(values: &[f64]) -> Diagonal {
        Diagonal { entries: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    #[test]
    fn diagonal_norm() {
        let d = diag(&[0.5, -3.0, 2.0, 1.0]);
        let est = power_norm(&d, &PowerOptions::default()).unwrap();
        assert!((est.norm - 3.0).abs() < 1e-6);
        assert!(est.converged);
    }

    #[test]
    fn identical_difference_is_zero() {
        let map = Difference { left: diag(&[1.0, 2.0, 3.0]), right: diag(&[1.0, 2.0, 3.0]) };
        let est = power_norm(&map, &PowerOptions::default()).unwrap();
        assert!(est.norm < 1e-8);
    }

    #[test]
    fn homogeneous_in_scaling() {
        let base = diag(&[0.2, 0.7, -0.4, 0.1, 0.65]);
        let a = power_norm(&base, &PowerOptions { tol: 1e-14, ..Default::default() }).unwrap();
        let scaled = Scaled { factor: Complex64::new(3.0, 0.0), inner: diag(&[0.2, 0.7, -0.4, 0.1, 0.65]) };
        let b = power_norm(&scaled, &PowerOptions { tol: 1e-14, ..Default::default() }).unwrap();
        assert!((b.norm - 3.0 * a.norm).abs() < 1e-8);
    }

    #[test]
    fn too_few_iterations_rejected() {
        let d = diag(&[1.0]);
        assert!(power_norm(&d, &PowerOptions { max_iter: 10, ..Default::default() }).is_err());
    }
}
