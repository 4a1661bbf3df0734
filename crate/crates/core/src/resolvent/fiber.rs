//! Operator norm of the free error `J_h(H₀,h − z)⁻¹K_h − (H₀ − z)⁻¹` fiber by fiber.
//!
//! Both operators commute with the lattice translations, so the error splits
//! into blocks indexed by `ξ ∈ T_h^d`, coupling the frequencies `ξ + 2πj/h`.
//! Only `|jᵢ| ≤ 1` meet the profile supports; the rest of each block is the
//! diagonal `−(G₀(ξ + 2πj/h) − z)⁻¹`, whose largest entry sits in the ring
//! `max|jᵢ| = 2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riesz::RieszPair;
use crate::symbols::{DiscretizedSymbol, Symbol, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberSampling {
    pub per_axis: usize,
    pub random: usize,
    /// Number of best samples refined by a local search.
    pub refine: usize,
    pub seed: u64,
}

impl FiberSampling {
    /// 4096 per axis in `d = 1`; the tensor grid is thinned in higher dimension.
    pub fn for_dim(dim: usize) -> FiberSampling {
        let per_axis = match dim {
            1 => 4096,
            2 => 192,
            _ => 40,
        };
        FiberSampling { per_axis, random: 10_000, refine: 8, seed: 0xf1be }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberEstimate {
    pub norm: f64,
    /// Scaled fiber `hξ` where the largest block norm was found.
    pub argmax: Vec<f64>,
}

/// Block norms of the free error operator for a fixed configuration.
pub struct FiberProblem {
    symbol: Symbol,
    discrete: DiscretizedSymbol,
    pair: RieszPair,
    h: f64,
    z: Complex64,
    shifts: Vec<[f64; MAX_DIM]>,
    ring: Vec<[f64; MAX_DIM]>,
}

impl FiberProblem {
    pub fn new(symbol: &Symbol, pair: &RieszPair, h: f64, z: Complex64) -> Result<FiberProblem> {
        if symbol.dim() != pair.dim() {
            return Err(Error::Shape("symbol and pair dimensions differ".into()));
        }
        if z.im == 0.0 && z.re >= 0.0 {
            return Err(Error::SpectralParameter(format!("z = {z} lies in [0, ∞)")));
        }
        let d = symbol.dim();
        let discrete = DiscretizedSymbol::new(symbol.clone(), h)?;
        let mut shifts = Vec::new();
        let mut ring = Vec::new();
        for code in 0..5usize.pow(d as u32) {
            let mut c = code;
            let mut j = [0.0; MAX_DIM];
            for slot in j.iter_mut().take(d) {
                *slot = (c % 5) as f64 - 2.0;
                c /= 5;
            }
            if j[..d].iter().all(|v| v.abs() <= 1.0) {
                shifts.push(j);
            } else {
                ring.push(j);
            }
        }
        Ok(FiberProblem { symbol: symbol.clone(), discrete, pair: pair.clone(), h, z, shifts, ring })
    }

    /// The `3^d × 3^d` block coupling the supported shifts at `t = hξ`.
    pub fn block(&self, t: &[f64]) -> DMatrix<Complex64> {
        let d = self.symbol.dim();
        let h = self.h;
        let z = self.z;
        let mut xi = [0.0; MAX_DIM];
        for k in 0..d {
            xi[k] = t[k] / h;
        }
        let rh = (Complex64::new(self.discrete.value(&xi[..d]), 0.0) - z).inv();
        let scale = (2.0 * PI).powi(d as i32);
        let m = self.shifts.len();
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut r = Vec::with_capacity(m);
        let mut zeta = [0.0; MAX_DIM];
        for j in &self.shifts {
            for k in 0..d {
                zeta[k] = t[k] + 2.0 * PI * j[k];
                xi[k] = zeta[k] / h;
            }
            a.push(self.pair.phi().value(&zeta[..d]));
            b.push(self.pair.psi().value(&zeta[..d]));
            r.push((Complex64::new(self.symbol.value(&xi[..d]), 0.0) - z).inv());
        }
        DMatrix::from_fn(m, m, |p, q| {
            let mut e = scale * rh * a[p] * b[q].conj();
            if p == q {
                e -= r[p];
            }
            e
        })
    }

    /// Spectral norm of the full fiber at scaled fiber `t = hξ`.
    pub fn block_norm(&self, t: &[f64]) -> f64 {
        let d = self.symbol.dim();
        let inner = self.block(t).singular_values().max();
        let mut xi = [0.0; MAX_DIM];
        let mut outer = 0.0f64;
        for j in &self.ring {
            for k in 0..d {
                xi[k] = (t[k] + 2.0 * PI * j[k]) / self.h;
            }
            outer = outer.max((Complex64::new(self.symbol.value(&xi[..d]), 0.0) - self.z).inv().norm());
        }
        inner.max(outer)
    }
}

/// Golden-section refinement of one coordinate, others fixed.
fn refine_axis(problem: &FiberProblem, t: &mut [f64], axis: usize, radius: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let centre = t[axis];
    let mut lo = (centre - radius).max(-PI);
    let mut hi = (centre + radius).min(PI);
    let eval = |t: &mut [f64], v: f64| {
        t[axis] = v;
        problem.block_norm(t)
    };
    let mut best_v = centre;
    let mut best = eval(t, centre);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = eval(t, x1);
    let mut f2 = eval(t, x2);
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = eval(t, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = eval(t, x2);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    for (v, f) in [(x1, f1), (x2, f2)] {
        if f > best {
            best = f;
            best_v = v;
        }
    }
    t[axis] = best_v;
    best
}

/// Sup of the fiber block norms over sampled `hξ ∈ [−π, π)^d`.
pub fn error_norm_fiber(
    symbol: &Symbol,
    pair: &RieszPair,
    h: f64,
    z: Complex64,
    sampling: &FiberSampling,
) -> Result<FiberEstimate> {
    let problem = FiberProblem::new(symbol, pair, h, z)?;
    let d = symbol.dim();
    let n = sampling.per_axis.max(2);
    let step = 2.0 * PI / n as f64;
    let mut points: Vec<Vec<f64>> = (0..n.pow(d as u32))
        .map(|code| {
            let mut c = code;
            (0..d)
                .map(|_| {
                    let i = c % n;
                    c /= n;
                    -PI + step * i as f64
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    for _ in 0..sampling.random {
        points.push((0..d).map(|_| rng.random_range(-PI..PI)).collect());
    }
    let mut scored: Vec<(f64, Vec<f64>)> = points.into_par_iter().map(|t| (problem.block_norm(&t), t)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal)));
    let top: Vec<(f64, Vec<f64>)> = scored.into_iter().take(sampling.refine.max(1)).collect();
    let refined: Vec<(f64, Vec<f64>)> = top
        .into_par_iter()
        .map(|(mut best, mut t)| {
            for _ in 0..2 {
                for axis in 0..d {
                    let mut cand = t.clone();
                    let v = refine_axis(&problem, &mut cand, axis, step);
                    if v > best {
                        best = v;
                        t = cand;
                    }
                }
            }
            (best, t)
        })
        .collect();
    let (norm, argmax) = refined
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::Numeric("no fiber samples".into()))?;
    Ok(FiberEstimate { norm, argmax })
}

/// Sup of the block norms over the fibers a periodic grid of `n` points
/// resolves, `hξ = 2πm/n`. This is the exact norm of the error operator
/// restricted to that box.
pub fn error_norm_fiber_on_grid(symbol: &Symbol, pair: &RieszPair, h: f64, z: Complex64, n: usize) -> Result<f64> {
    let problem = FiberProblem::new(symbol, pair, h, z)?;
    let d = symbol.dim();
    let best = (0..n.pow(d as u32))
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let t: Vec<f64> = (0..d)
                .map(|_| {
                    let i = (c % n) as f64 - (n / 2) as f64;
                    c /= n;
                    2.0 * PI * i / n as f64
                })
                .collect();
            problem.block_norm(&t)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{GrowthConstants, SymbolClass};
    use std::sync::Arc;

    fn zero_symbol() -> Symbol {
        Symbol::custom(
            1,
            "zero",
            SymbolClass::ClassIII { alpha: 1.0 },
            GrowthConstants { c: 1.0, c0: 1.0, c_grad: 1.0 },
            Arc::new(|_| 0.0),
        )
        .unwrap()
    }

    #[test]
    fn flat_region_leaves_only_projection_defect() {
        // G ≡ 0 on both sides. Where only the j = 0 shift is supported the j = 0
        // entry cancels and the block is diagonal with −1 elsewhere: the defect
        // of J_hK_h.
        let pair = RieszPair::standard(1).unwrap();
        let p = FiberProblem::new(&zero_symbol(), &pair, 0.5, Complex64::new(-1.0, 0.0)).unwrap();
        let center = p.shifts.iter().position(|j| j[0] == 0.0).unwrap();
        for t in [-PI / 2.0, -0.3, 0.0, 1.1, PI / 2.0] {
            let m = p.block(&[t]);
            for q in 0..3 {
                assert!(m[(center, q)].norm() < 1e-14, "t = {t}");
                assert!(m[(q, center)].norm() < 1e-14, "t = {t}");
                if q != center {
                    assert!((m[(q, q)] + 1.0).norm() < 1e-14);
                }
            }
            assert!((p.block_norm(&[t]) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn laplacian_rate_near_two() {
        let lap = Symbol::laplacian(1).unwrap();
        let pair = RieszPair::standard(1).unwrap();
        let sampling = FiberSampling { per_axis: 1024, random: 1000, refine: 4, seed: 1 };
        let hs: Vec<f64> = (2..=7).map(|k| 2f64.powi(-k)).collect();
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| error_norm_fiber(&lap, &pair, h, Complex64::new(-1.0, 0.0), &sampling).unwrap().norm)
            .collect();
        let xs: Vec<f64> = hs[1..].iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = errs[1..].iter().map(|e| e.ln()).collect();
        let k = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((1.85..=2.15).contains(&slope), "slope {slope}, errors {errs:?}");
    }

    #[test]
    fn grid_sup_below_continuous_sup() {
        let s = Symbol::frac_lap(1, 1.5).unwrap();
        let pair = RieszPair::standard(1).unwrap();
        let z = Complex64::new(-1.0, 0.0);
        let cont = error_norm_fiber(&s, &pair, 0.125, z, &FiberSampling::for_dim(1)).unwrap().norm;
        let grid = error_norm_fiber_on_grid(&s, &pair, 0.125, z, 256).unwrap();
        assert!(grid <= cont * (1.0 + 1e-12));
        assert!(grid > 0.9 * cont);
    }

    #[test]
    fn rejects_spectrum() {
        let lap = Symbol::laplacian(1).unwrap();
        let pair = RieszPair::standard(1).unwrap();
        let r = error_norm_fiber(&lap, &pair, 0.1, Complex64::new(2.0, 0.0), &FiberSampling::for_dim(1));
        assert!(matches!(r, Err(Error::SpectralParameter(_))));
    }
}
