//! Restarted GMRES for complex linear systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresOptions {
    /// Relative residual target `‖b − Ax‖ ≤ tol·‖b‖`.
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-10, restart: 50, max_iter: 500 }
    }
}

#[derive(Clone, Debug)]
pub struct GmresSolution {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Solves `A x = b` from `x = 0`. The returned residual is recomputed from
/// scratch, not taken from the Arnoldi recurrence.
pub fn gmres(
    apply: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    b: &[Complex64],
    opts: &GmresOptions,
) -> Result<GmresSolution> {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    if bnorm == 0.0 {
        return Ok(GmresSolution { x, iterations: 0, residual: 0.0 });
    }
    let m = opts.restart.max(1);
    let mut iterations = 0;
    let mut r = b.to_vec();
    loop {
        let beta = norm(&r);
        if beta <= opts.tol * bnorm {
            return Ok(GmresSolution { x, iterations, residual: beta / bnorm });
        }
        if iterations >= opts.max_iter {
            return Err(Error::Solver { iterations, residual: beta / bnorm });
        }
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|v| v / beta).collect()];
        // Hessenberg columns after Givens rotation, stored as an upper triangle.
        let mut hess: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = vec![Complex64::new(beta, 0.0)];
        let mut k = 0;
        while k < m && iterations < opts.max_iter {
            let mut w = apply(&basis[k])?;
            let mut col = vec![Complex64::new(0.0, 0.0); k + 2];
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                col[i] = c;
                w.iter_mut().zip(q).for_each(|(wv, qv)| *wv -= c * qv);
            }
            let wn = norm(&w);
            col[k + 1] = Complex64::new(wn, 0.0);
            for (i, &(c, s)) in rot.iter().enumerate() {
                let a = col[i];
                let bb = col[i + 1];
                col[i] = c * a + s * bb;
                col[i + 1] = -s.conj() * a + c * bb;
            }
            let a = col[k];
            let bb = col[k + 1];
            let denom = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c, s) = if denom == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if a.norm() == 0.0 {
                (0.0, bb.conj() / bb.norm())
            } else {
                let c = a.norm() / denom;
                (c, (a / a.norm()) * bb.conj() / denom)
            };
            col[k] = c * a + s * bb;
            col[k + 1] = Complex64::new(0.0, 0.0);
            rot.push((c, s));
            let gk = g[k];
            g[k] = c * gk;
            g.push(-s.conj() * gk);
            col.truncate(k + 1);
            hess.push(col);
            iterations += 1;
            k += 1;
            if g[k].norm() <= 0.5 * opts.tol * bnorm || wn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        // Back substitution for the k coefficients.
        let mut y = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= hess[j][i] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            x.iter_mut().zip(&basis[j]).for_each(|(xv, q)| *xv += yj * q);
        }
        let ax = apply(&x)?;
        r = b.iter().zip(&ax).map(|(bv, av)| bv - av).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_dense_system() {
        let n = 30;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let base = if i == j { 4.0 } else { 0.0 };
                        Complex64::new(base + rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3))
                    })
                    .collect()
            })
            .collect();
        let apply = |x: &[Complex64]| -> Result<Vec<Complex64>> {
            Ok(a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect())
        };
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
        for restart in [5, 50] {
            let sol = gmres(apply, &b, &GmresOptions { tol: 1e-12, restart, max_iter: 1000 }).unwrap();
            let r: Vec<Complex64> = apply(&sol.x).unwrap().iter().zip(&b).map(|(p, q)| p - q).collect();
            assert!(norm(&r) <= 1e-12 * norm(&b) * 1.01);
            assert!(sol.residual <= 1e-12);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let apply = |x: &[Complex64]| -> Result<Vec<Complex64>> {
            // Cyclic shift: GMRES stagnates for small restart lengths.
            let n = x.len();
            Ok((0..n).map(|i| x[(i + 1) % n]).collect())
        };
        let mut b = vec![Complex64::new(0.0, 0.0); 40];
        b[0] = Complex64::new(1.0, 0.0);
        let err = gmres(apply, &b, &GmresOptions { tol: 1e-10, restart: 3, max_iter: 30 }).unwrap_err();
        assert!(matches!(err, Error::Solver { .. }));
    }
}
