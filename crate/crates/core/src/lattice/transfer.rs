//! The embedding `J_h` and discretization `K_h` between a lattice and its proxy.
//!
//! In frequency form, with `ζ = hη` the scaled proxy frequency and `m_c` the
//! coarse frequency it folds onto:
//!
//! * `(J_h u)^(η) = (2π)^{d/2} φ̂₀(ζ) û(m_c)`
//! * `(K_h f)^(m_c) = (2π)^{d/2} Σ conj(ψ̂₀(ζ)) f̂(η)`, summed over all `η` folding onto `m_c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::linear::{check_len, LinearMap, Vector};
use super::{to_domain, ContinuumProxy, Domain, LatticeField};
use crate::error::{Error, Result};
use crate::riesz::RieszPair;
use crate::symbols::MAX_DIM;

/// Profile tables of a pair on one proxy.
#[derive(Clone, Debug)]
pub struct Transfer {
    proxy: ContinuumProxy,
    phi: Vector,
    psi: Vector,
    coarse_of: Vec<u32>,
}

impl Transfer {
    pub fn new(pair: &RieszPair, proxy: &ContinuumProxy) -> Result<Transfer> {
        let fine = proxy.fine();
        let d = fine.dim();
        if pair.dim() != d {
            return Err(Error::Shape("pair and grid dimensions differ".into()));
        }
        let scale = (2.0 * PI).powf(0.5 * d as f64);
        let coarse = proxy.coarse();
        let mut phi = Vec::with_capacity(fine.len());
        let mut psi = Vec::with_capacity(fine.len());
        let mut coarse_of = Vec::with_capacity(fine.len());
        let mut zeta = [0.0; MAX_DIM];
        let mut slots = [0usize; MAX_DIM];
        for flat in 0..fine.len() {
            let idx = fine.multi_index(flat);
            for k in 0..d {
                zeta[k] = proxy.scaled_frequency(idx[k]);
                slots[k] = proxy.coarse_slot(idx[k]);
            }
            phi.push(scale * pair.phi().value(&zeta[..d]));
            psi.push(scale * pair.psi().value(&zeta[..d]));
            coarse_of.push(coarse.flat_index(&slots[..d]) as u32);
        }
        Ok(Transfer { proxy: proxy.clone(), phi, psi, coarse_of })
    }

    pub fn proxy(&self) -> &ContinuumProxy {
        &self.proxy
    }

    pub fn coarse_len(&self) -> usize {
        self.proxy.coarse().len()
    }

    pub fn fine_len(&self) -> usize {
        self.phi.len()
    }

    /// Coarse flat index each proxy frequency folds onto.
    pub fn coarse_of(&self) -> &[u32] {
        &self.coarse_of
    }

    fn synthesize(&self, table: &[Complex64], u: &[Complex64]) -> Result<Vector> {
        check_len(u.len(), self.coarse_len())?;
        Ok(table.iter().zip(&self.coarse_of).map(|(p, &c)| p * u[c as usize]).collect())
    }

    fn fold(&self, table: &[Complex64], f: &[Complex64]) -> Result<Vector> {
        check_len(f.len(), self.fine_len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.coarse_len()];
        for ((p, &c), v) in table.iter().zip(&self.coarse_of).zip(f) {
            out[c as usize] += p.conj() * v;
        }
        Ok(out)
    }

    /// `J_h` acting on frequency coefficients.
    pub fn embedding(&self) -> Embedding<'_> {
        Embedding(self)
    }

    /// `K_h` acting on frequency coefficients.
    pub fn discretization(&self) -> Discretization<'_> {
        Discretization(self)
    }
}

pub struct Embedding<'a>(&'a Transfer);

impl LinearMap for Embedding<'_> {
    fn input_len(&self) -> usize {
        self.0.coarse_len()
    }
    fn output_len(&self) -> usize {
        self.0.fine_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        self.0.synthesize(&self.0.phi, x)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.0.fold(&self.0.phi, y)
    }
}

pub struct Discretization<'a>(&'a Transfer);

impl LinearMap for Discretization<'_> {
    fn input_len(&self) -> usize {
        self.0.fine_len()
    }
    fn output_len(&self) -> usize {
        self.0.coarse_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        self.0.fold(&self.0.psi, x)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.0.synthesize(&self.0.psi, y)
    }
}

/// `J_h u` on the proxy, returned in the domain of `u`.
pub fn embed(u: &LatticeField, pair: &RieszPair, proxy: &ContinuumProxy) -> Result<LatticeField> {
    if u.grid() != proxy.coarse() {
        return Err(Error::Shape("field does not live on the proxy's coarse grid".into()));
    }
    let t = Transfer::new(pair, proxy)?;
    let coeffs = to_domain(u, Domain::Frequency)?;
    let out = t.embedding().apply(coeffs.values())?;
    let f = LatticeField::from_values(proxy.fine().clone(), Domain::Frequency, out)?;
    to_domain(&f, u.domain())
}

/// `K_h f` on the coarse grid, returned in the domain of `f`.
pub fn discretize(f: &LatticeField, pair: &RieszPair, proxy: &ContinuumProxy) -> Result<LatticeField> {
    if f.grid() != proxy.fine() {
        return Err(Error::Shape("field does not live on the proxy grid".into()));
    }
    let t = Transfer::new(pair, proxy)?;
    let coeffs = to_domain(f, Domain::Frequency)?;
    let out = t.discretization().apply(coeffs.values())?;
    let u = LatticeField::from_values(proxy.coarse().clone(), Domain::Frequency, out)?;
    to_domain(&u, f.domain())
}

/// Outcome of [`projection_check`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub trials: usize,
    /// Largest `‖P²f − Pf‖/‖f‖` with `P = J_hK_h`.
    pub idempotency_residual: f64,
    /// Largest `‖Pf − f‖/‖f‖`; positive values witness `J_hK_h ≠ I`.
    pub max_defect: f64,
}

fn rel_dist(a: &[Complex64], b: &[Complex64], scale: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = scale.iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Idempotency of `J_hK_h` on random proxy fields.
pub fn projection_check(pair: &RieszPair, proxy: &ContinuumProxy, trials: usize, seed: u64) -> Result<ProjectionReport> {
    if trials < 10 {
        return Err(Error::Parameter(format!("need at least 10 trials, got {trials}")));
    }
    let t = Transfer::new(pair, proxy)?;
    let j = t.embedding();
    let k = t.discretization();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProjectionReport { trials, idempotency_residual: 0.0, max_defect: 0.0 };
    for _ in 0..trials {
        let f: Vector = (0..t.fine_len())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let pf = j.apply(&k.apply(&f)?)?;
        let ppf = j.apply(&k.apply(&pf)?)?;
        report.idempotency_residual = report.idempotency_residual.max(rel_dist(&ppf, &pf, &f));
        report.max_defect = report.max_defect.max(rel_dist(&pf, &f, &f));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeGrid;
    use crate::riesz::{kernel_witness, riesz_bounds, cell_samples};

    fn setup(h: f64, n: usize, r: usize) -> (RieszPair, ContinuumProxy) {
        let pair = RieszPair::standard(1).unwrap();
        let proxy = ContinuumProxy::new(LatticeGrid::new(1, h, n).unwrap(), r).unwrap();
        (pair, proxy)
    }

    #[test]
    fn zero_maps_to_zero() {
        let (pair, proxy) = setup(0.5, 32, 4);
        let u = LatticeField::zeros(proxy.coarse().clone(), Domain::Space);
        assert_eq!(embed(&u, &pair, &proxy).unwrap().norm(), 0.0);
        let f = LatticeField::zeros(proxy.fine().clone(), Domain::Space);
        assert_eq!(discretize(&f, &pair, &proxy).unwrap().norm(), 0.0);
    }

    #[test]
    fn discretize_inverts_embed() {
        for (h, n, r) in [(1.0, 64, 4), (0.125, 128, 8)] {
            let (pair, proxy) = setup(h, n, r);
            for seed in 0..20 {
                let u = LatticeField::random(proxy.coarse().clone(), Domain::Space, seed);
                let back = discretize(&embed(&u, &pair, &proxy).unwrap(), &pair, &proxy).unwrap();
                assert!(back.sub(&u).unwrap().norm() < 1e-10 * u.norm());
            }
        }
    }

    #[test]
    fn embedded_delta_is_scaled_generator() {
        // J_h δ₀ = φ₀(x/h) up to box periodization (negligible at L = 128);
        // the oracle is a midpoint rule
        // for (2π)^{-1/2} ∫ φ̂₀(ζ) e^{iζx/h} dζ.
        let (pair, proxy) = setup(0.5, 256, 8);
        let f = embed(&LatticeField::delta(proxy.coarse().clone()), &pair, &proxy).unwrap();
        let h = proxy.coarse().h();
        let quad = |x: f64| {
            let m = 20_000;
            let lo = -1.5 * PI;
            let dz = 3.0 * PI / m as f64;
            let s: f64 = (0..m)
                .map(|i| {
                    let z = lo + (i as f64 + 0.5) * dz;
                    pair.phi().value(&[z]).re * (z * x / h).cos()
                })
                .sum();
            s * dz / (2.0 * PI).sqrt()
        };
        for i in [0usize, 3, 17, 40] {
            let x = proxy.fine().position(i);
            let expect = quad(x);
            assert!((f.values()[i].re - expect).abs() < 1e-8, "x={x} got {} want {expect}", f.values()[i]);
        }
    }

    #[test]
    fn embedding_respects_riesz_bounds() {
        let (pair, proxy) = setup(0.25, 64, 4);
        let b = riesz_bounds(pair.phi(), &cell_samples(1, 4001)).unwrap();
        for seed in 0..10 {
            let u = LatticeField::random(proxy.coarse().clone(), Domain::Space, 100 + seed);
            let ratio = embed(&u, &pair, &proxy).unwrap().norm() / u.norm();
            assert!(ratio >= b.lower.sqrt() - 1e-6 && ratio <= b.upper.sqrt() + 1e-6);
        }
    }

    #[test]
    fn projection_properties() {
        let (pair, proxy) = setup(1.0, 64, 8);
        let rep = projection_check(&pair, &proxy, 20, 3).unwrap();
        assert!(rep.idempotency_residual < 1e-8);
        assert!(rep.max_defect > 0.1);
        assert!(projection_check(&pair, &proxy, 5, 3).is_err());

        let t = Transfer::new(&pair, &proxy).unwrap();
        let u = LatticeField::random(proxy.coarse().clone(), Domain::Frequency, 4);
        let f = t.embedding().apply(u.values()).unwrap();
        let pf = t.embedding().apply(&t.discretization().apply(&f).unwrap()).unwrap();
        assert!(rel_dist(&pf, &f, &f) < 1e-10);
    }

    #[test]
    fn witness_is_annihilated() {
        let (pair, proxy) = setup(1.0, 64, 8);
        let w = kernel_witness(&pair, &proxy).unwrap();
        assert!(w.norm() > 0.0);
        let t = Transfer::new(&pair, &proxy).unwrap();
        let kw = t.discretization().apply(w.values()).unwrap();
        let ratio = (kw.iter().map(|v| v.norm_sqr()).sum::<f64>() / w.values().iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        assert!(ratio < 1e-12);
        let scaled: Vector = w.values().iter().map(|v| v * 7.0).collect();
        let kw7 = t.discretization().apply(&scaled).unwrap();
        assert!(kw7.iter().all(|v| v.norm() < 1e-12));
        let jk = t.embedding().apply(&kw).unwrap();
        assert!(jk.iter().all(|v| v.norm() < 1e-12));

        let f = LatticeField::random(proxy.fine().clone(), Domain::Frequency, 11);
        let kf = t.discretization().apply(f.values()).unwrap();
        let ratio = (kf.iter().map(|v| v.norm_sqr()).sum::<f64>() / f.values().iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        assert!(ratio > 0.1);
    }

    #[test]
    fn witness_in_two_dimensions() {
        let pair = RieszPair::standard(2).unwrap();
        let proxy = ContinuumProxy::new(LatticeGrid::new(2, 0.5, 8).unwrap(), 4).unwrap();
        let w = kernel_witness(&pair, &proxy).unwrap();
        let t = Transfer::new(&pair, &proxy).unwrap();
        let kw = t.discretization().apply(w.values()).unwrap();
        assert!(w.norm() > 0.0);
        assert!(kw.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn adjoints_are_consistent() {
        let (pair, proxy) = setup(0.5, 16, 4);
        let t = Transfer::new(&pair, &proxy).unwrap();
        let u = LatticeField::random(proxy.coarse().clone(), Domain::Frequency, 1);
        let f = LatticeField::random(proxy.fine().clone(), Domain::Frequency, 2);
        for (fwd, adj) in [
            (t.embedding().apply(u.values()).unwrap(), t.embedding().apply_adjoint(f.values()).unwrap()),
            (t.discretization().apply_adjoint(u.values()).unwrap(), t.discretization().apply(f.values()).unwrap()),
        ] {
            let lhs: Complex64 = f.values().iter().zip(&fwd).map(|(a, b)| a.conj() * b).sum();
            let rhs: Complex64 = adj.iter().zip(u.values()).map(|(a, b)| a.conj() * b).sum();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
