//! Spectral comparisons between the lattice operator and its continuum stand-ins.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dense::{DenseSpectrum, Reference};
use super::{hausdorff, SpectrumSet};
use crate::error::{Error, Result};
use crate::lattice::linear::{LinearMap, Vector};
use crate::lattice::{fft, ContinuumProxy, LatticeGrid, Transfer};
use crate::resolvent::{power_norm, FourierHamiltonian, PotentialSpec, PowerOptions};
use crate::riesz::RieszPair;
use crate::symbols::{DiscretizedSymbol, Symbol, MAX_DIM};

/// Samples used to represent a sampled range.
const RANGE_SAMPLES: usize = 4097;

fn active(potential: Option<&PotentialSpec>) -> Option<&PotentialSpec> {
    potential.filter(|v| !v.is_zero())
}

/// Min and max of `g` over `[−c, c]^d` on a tensor grid that contains the
/// corners and the origin.
fn box_range(dim: usize, cutoff: f64, g: impl Fn(&[f64]) -> f64 + Sync) -> (f64, f64) {
    let m: usize = match dim {
        1 => 4097,
        2 => 257,
        _ => 65,
    };
    (0..m.pow(dim as u32))
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let mut xi = [0.0; MAX_DIM];
            for v in xi.iter_mut().take(dim) {
                *v = cutoff * (-1.0 + 2.0 * (c % m) as f64 / (m - 1) as f64);
                c /= m;
            }
            let v = g(&xi[..dim]);
            (v, v)
        })
        .reduce(|| (f64::INFINITY, f64::NEG_INFINITY), |a, b| (a.0.min(b.0), a.1.max(b.1)))
}

/// `σ(H₀,h + V_h)` on a grid: the range of the discretized symbol over the
/// Brillouin zone when `V ≡ 0`, the dense eigenvalues otherwise.
pub fn discrete_spectrum(symbol: &Symbol, potential: Option<&PotentialSpec>, grid: &LatticeGrid) -> Result<SpectrumSet> {
    match active(potential) {
        None => {
            let ds = DiscretizedSymbol::new(symbol.clone(), grid.h())?;
            let (lo, hi) = box_range(symbol.dim(), PI / grid.h(), |xi| ds.value(xi));
            SpectrumSet::range(lo, hi, RANGE_SAMPLES, &format!("range of {} at h = {}", symbol.tag(), grid.h()))
        }
        Some(v) => {
            let ham = FourierHamiltonian::discrete(symbol, grid, Some(v))?;
            let spec = DenseSpectrum::new(&ham)?;
            SpectrumSet::points(spec.eigenvalues().to_vec(), &format!("eigenvalues at h = {}", grid.h()))
        }
    }
}

/// `σ(H₀ + V)` on a proxy grid: the range of the exact symbol up to the grid
/// cutoff when `V ≡ 0`, the dense eigenvalues of the collocation otherwise.
pub fn continuum_spectrum(symbol: &Symbol, potential: Option<&PotentialSpec>, grid: &LatticeGrid) -> Result<SpectrumSet> {
    match active(potential) {
        None => {
            let (lo, hi) = box_range(symbol.dim(), PI / grid.h(), |xi| symbol.value(xi));
            SpectrumSet::range(lo, hi, RANGE_SAMPLES, &format!("range of {} below the proxy cutoff", symbol.tag()))
        }
        Some(v) => {
            let ham = FourierHamiltonian::continuum(symbol, grid, Some(v))?;
            let spec = DenseSpectrum::new(&ham)?;
            SpectrumSet::points(spec.eigenvalues().to_vec(), "proxy eigenvalues")
        }
    }
}

/// Hausdorff distance between `σ((H_h + μ)⁻¹)` and `σ((H + μ)⁻¹)`.
///
/// With `V ≡ 0` the continuum side is exact: `[0, 1/(inf G₀ + μ)]`. With a
/// potential it is the dense proxy spectrum together with `0`, the image of
/// the unbounded top of the spectrum.
pub fn resolvent_spectrum_distance(
    symbol: &Symbol,
    potential: Option<&PotentialSpec>,
    proxy: &ContinuumProxy,
    mu: f64,
) -> Result<f64> {
    let discrete = discrete_spectrum(symbol, potential, proxy.coarse())?.reciprocal(mu)?;
    let continuum = match active(potential) {
        None => {
            let floor = continuum_spectrum(symbol, None, proxy.fine())?.min().unwrap_or(0.0);
            if !(floor + mu > 0.0) {
                return Err(Error::Parameter(format!("μ = {mu} does not exceed −inf G₀")));
            }
            SpectrumSet::range(0.0, 1.0 / (floor + mu), RANGE_SAMPLES, "exact free resolvent spectrum")?
        }
        Some(_) => continuum_spectrum(symbol, potential, proxy.fine())?
            .reciprocal(mu)?
            .union(&SpectrumSet::points(vec![0.0], "")?)?,
    };
    hausdorff(&discrete, &continuum)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnionZeroReport {
    /// Hausdorff distance between the computed eigenvalues and `σ(F) ∪ {0}`.
    pub distance: f64,
    /// Largest imaginary part among the computed eigenvalues.
    pub max_imag: f64,
    pub size: usize,
}

/// Eigenvalues of `J_h F K_h` for a random real multiplication operator `F`
/// on the lattice, compared with `σ(F) ∪ {0}`.
pub fn union_with_zero_check(pair: &RieszPair, proxy: &ContinuumProxy, seed: u64) -> Result<UnionZeroReport> {
    let transfer = Transfer::new(pair, proxy)?;
    let fine = transfer.fine_len();
    if fine > MAX_DENSE_UNION {
        return Err(Error::Configuration(format!("proxy of {fine} points is too large for a dense check")));
    }
    let coarse = proxy.coarse();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag: Vec<f64> = (0..coarse.len())
        .map(|_| {
            let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            s * rng.random_range(0.5..2.0)
        })
        .collect();
    let (n, d) = (coarse.n(), coarse.dim());
    let apply_f = |u: &[Complex64]| -> Vector {
        let mut buf = u.to_vec();
        fft::transform_nd(&mut buf, n, d, true);
        let s = 1.0 / buf.len() as f64;
        buf.iter_mut().zip(&diag).for_each(|(b, &v)| *b *= v * s);
        fft::transform_nd(&mut buf, n, d, false);
        buf
    };
    let j = transfer.embedding();
    let k = transfer.discretization();
    // Columns in the lattice basis of the proxy, where the matrix is real:
    // both profiles are real and even. The real Schur iteration also copes
    // with the large zero eigenvalue cluster, which the complex one does not.
    let (nf, df) = (proxy.fine().n(), proxy.fine().dim());
    let mut m = DMatrix::<f64>::zeros(fine, fine);
    let mut col = vec![Complex64::new(0.0, 0.0); fine];
    for c in 0..fine {
        col.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        col[c] = Complex64::new(1.0, 0.0);
        fft::transform_nd(&mut col, nf, df, false);
        let mut out = j.apply(&apply_f(&k.apply(&col)?))?;
        fft::transform_nd(&mut out, nf, df, true);
        for (r, v) in out.iter().enumerate() {
            m[(r, c)] = v.re / fine as f64;
        }
    }
    let eig = nalgebra::Schur::try_new(m, f64::EPSILON, 100_000)
        .map(|s| s.complex_eigenvalues())
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    let max_imag = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let computed = SpectrumSet::points(eig.iter().map(|z| z.re).collect(), "eig(JFK)")?;
    let mut expected = diag.clone();
    expected.push(0.0);
    let expected = SpectrumSet::points(expected, "σ(F) ∪ {0}")?;
    Ok(UnionZeroReport { distance: hausdorff(&computed, &expected)?, max_imag, size: fine })
}

const MAX_DENSE_UNION: usize = 512;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapEntry {
    pub h: f64,
    /// No discrete spectrum in `[a, b]`.
    pub empty: bool,
    /// Distance from `[a, b]` to the nearest discrete spectral point.
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapReport {
    pub a: f64,
    pub b: f64,
    /// Sorted by decreasing `h`.
    pub entries: Vec<GapEntry>,
    /// Largest tested `h` below which every tested mesh has an empty window.
    pub onset: Option<f64>,
}

fn continuum_floor(symbol: &Symbol, grid: &LatticeGrid) -> Result<f64> {
    Ok(continuum_spectrum(symbol, None, grid)?.min().unwrap_or(0.0))
}

/// Checks that `[a, b]` stays free of discrete spectrum along a sweep.
///
/// The window must first avoid the continuum spectrum: `[inf G₀, ∞)` when
/// `V ≡ 0`, the reference eigenvalues otherwise.
pub fn gap_check(
    symbol: &Symbol,
    potential: Option<&PotentialSpec>,
    a: f64,
    b: f64,
    grids: &[LatticeGrid],
    reference: Option<&Reference>,
) -> Result<GapReport> {
    if !(a <= b) || grids.is_empty() {
        return Err(Error::Configuration("gap check needs a ≤ b and at least one grid".into()));
    }
    match active(potential) {
        None => {
            let floor = continuum_floor(symbol, &grids[0])?;
            if b >= floor {
                return Err(Error::Configuration(format!("[{a}, {b}] meets the continuum spectrum [{floor}, ∞)")));
            }
        }
        Some(_) => {
            let r = reference.ok_or_else(|| Error::Configuration("a potential needs a reference spectrum".into()))?;
            if let Some(l) = r.eigenvalues().iter().find(|&&l| l >= a && l <= b) {
                return Err(Error::Configuration(format!("[{a}, {b}] contains the reference eigenvalue {l}")));
            }
        }
    }
    let mut entries: Vec<GapEntry> = grids
        .par_iter()
        .map(|g| {
            let s = discrete_spectrum(symbol, potential, g).map_err(|e| e.at_stage(g.h(), "gap"))?;
            let empty = s.points_in(a, b).is_empty();
            let distance = if empty { s.distance_to(a).min(s.distance_to(b)) } else { 0.0 };
            Ok(GapEntry { h: g.h(), empty, distance })
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|x, y| y.h.total_cmp(&x.h));
    let onset = entries
        .iter()
        .enumerate()
        .find(|(i, _)| entries[*i..].iter().all(|e| e.empty))
        .map(|(_, e)| e.h);
    Ok(GapReport { a, b, entries, onset })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrackEntry {
    pub h: f64,
    /// Discrete eigenvalues in the window.
    pub eigenvalues: Vec<f64>,
    /// Exactly the expected number of eigenvalues was found.
    pub count_ok: bool,
    /// `|λ_{i,h} − λ_i|`, pairing sorted lists.
    pub errors: Vec<f64>,
    /// `‖(I − P_h)K_hψ_j‖ / ‖K_hψ_j‖` per continuum eigenvector.
    pub residuals: Vec<f64>,
    /// `‖K_hψ_j‖` for unit `ψ_j`.
    pub k_norms: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrackingReport {
    pub a: f64,
    pub b: f64,
    pub multiplicity: usize,
    pub continuum: Vec<f64>,
    /// Sorted by decreasing `h`.
    pub entries: Vec<TrackEntry>,
}

fn euclid(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(basis: &[Vector], v: &[Complex64]) -> Vector {
    let mut out = v.to_vec();
    for u in basis {
        let c: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        out.iter_mut().zip(u).for_each(|(o, a)| *o -= c * a);
    }
    out
}

/// Follows the eigenvalues of `H` in `(a, b)` along a sweep of lattices.
#[allow(clippy::too_many_arguments)]
pub fn track_eigenvalues(
    symbol: &Symbol,
    potential: Option<&PotentialSpec>,
    pair: &RieszPair,
    grids: &[LatticeGrid],
    refine: usize,
    a: f64,
    b: f64,
    multiplicity: usize,
    reference: &Reference,
) -> Result<TrackingReport> {
    let cont_idx = reference.spectrum().in_window(a, b);
    if cont_idx.len() != multiplicity {
        return Err(Error::Configuration(format!(
            "reference has {} eigenvalues in ({a}, {b}), expected {multiplicity}",
            cont_idx.len()
        )));
    }
    let continuum: Vec<f64> = cont_idx.iter().map(|&i| reference.eigenvalues()[i]).collect();
    let mut entries: Vec<TrackEntry> = grids
        .par_iter()
        .map(|g| -> Result<TrackEntry> {
            let h = g.h();
            let ham = FourierHamiltonian::discrete(symbol, g, potential)?;
            let spec = DenseSpectrum::new(&ham).map_err(|e| e.at_stage(h, "eigensolve"))?;
            let idx = spec.in_window(a, b);
            let eigenvalues: Vec<f64> = idx.iter().map(|&i| spec.eigenvalues()[i]).collect();
            let errors = eigenvalues.iter().zip(&continuum).map(|(x, y)| (x - y).abs()).collect();
            let basis: Vec<Vector> = idx.iter().map(|&i| spec.coefficients_on(i, g)).collect::<Result<_>>()?;
            let proxy = ContinuumProxy::new(g.clone(), refine)?;
            let transfer = Transfer::new(pair, &proxy)?;
            let k = transfer.discretization();
            let mut residuals = Vec::new();
            let mut k_norms = Vec::new();
            for &j in &cont_idx {
                let psi = reference.spectrum().coefficients_on(j, proxy.fine())?;
                let kpsi = k.apply(&psi)?;
                let kn = euclid(&kpsi);
                residuals.push(euclid(&project_out(&basis, &kpsi)) / kn);
                k_norms.push(kn / euclid(&psi));
            }
            Ok(TrackEntry { h, count_ok: eigenvalues.len() == multiplicity, eigenvalues, errors, residuals, k_norms })
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|x, y| y.h.total_cmp(&x.h));
    Ok(TrackingReport { a, b, multiplicity, continuum, entries })
}

/// `f ↦ J_h E_h K_h f − E f` with both projections of finite rank.
struct ProjectionDifference<'a> {
    transfer: &'a Transfer,
    discrete: Vec<Vector>,
    continuum: Vec<Vector>,
}

fn apply_projection(basis: &[Vector], v: &[Complex64]) -> Vector {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for u in basis {
        let c: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        out.iter_mut().zip(u).for_each(|(o, a)| *o += c * a);
    }
    out
}

impl LinearMap for ProjectionDifference<'_> {
    fn input_len(&self) -> usize {
        self.transfer.fine_len()
    }
    fn output_len(&self) -> usize {
        self.transfer.fine_len()
    }
    fn apply(&self, f: &[Complex64]) -> Result<Vector> {
        let p = apply_projection(&self.discrete, &self.transfer.discretization().apply(f)?);
        let mut out = self.transfer.embedding().apply(&p)?;
        out.iter_mut().zip(apply_projection(&self.continuum, f)).for_each(|(o, e)| *o -= e);
        Ok(out)
    }
    fn apply_adjoint(&self, g: &[Complex64]) -> Result<Vector> {
        let p = apply_projection(&self.discrete, &self.transfer.embedding().apply_adjoint(g)?);
        let mut out = self.transfer.discretization().apply_adjoint(&p)?;
        out.iter_mut().zip(apply_projection(&self.continuum, g)).for_each(|(o, e)| *o -= e);
        Ok(out)
    }
}

/// Largest deviation of the Gram matrix from the identity; bounds the
/// idempotency and self-adjointness defects of `Σ u u*`.
fn gram_defect(basis: &[Vector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let g: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - want).norm());
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectionDistance {
    pub norm: f64,
    pub discrete_rank: usize,
    pub continuum_rank: usize,
    /// Worst Gram defect over both projections.
    pub projection_defect: f64,
}

/// `‖J_h E_{H_h}((a,b)) K_h − E_H((a,b))‖` by power iteration. The continuum
/// projection is built from the reference eigenvectors in the window.
#[allow(clippy::too_many_arguments)]
pub fn spectral_projection_distance(
    symbol: &Symbol,
    potential: Option<&PotentialSpec>,
    pair: &RieszPair,
    proxy: &ContinuumProxy,
    a: f64,
    b: f64,
    reference: &Reference,
    margin: f64,
    opts: &PowerOptions,
) -> Result<ProjectionDistance> {
    if !(a < b) {
        return Err(Error::Configuration(format!("empty window ({a}, {b})")));
    }
    if let Some(l) = reference.eigenvalues().iter().find(|&&l| (l - a).abs() < margin || (l - b).abs() < margin) {
        return Err(Error::Configuration(format!(
            "ill-conditioned window: eigenvalue {l} within {margin} of an endpoint of ({a}, {b})"
        )));
    }
    let coarse = proxy.coarse();
    let ham = FourierHamiltonian::discrete(symbol, coarse, potential)?;
    let spec = DenseSpectrum::new(&ham)?;
    let discrete: Vec<Vector> =
        spec.in_window(a, b).into_iter().map(|i| spec.coefficients_on(i, coarse)).collect::<Result<_>>()?;
    let continuum: Vec<Vector> = reference
        .spectrum()
        .in_window(a, b)
        .into_iter()
        .map(|i| reference.spectrum().coefficients_on(i, proxy.fine()))
        .collect::<Result<_>>()?;
    let projection_defect = gram_defect(&discrete).max(gram_defect(&continuum));
    if projection_defect > 1e-9 {
        return Err(Error::Numeric(format!("spectral projection defect {projection_defect:e} exceeds 1e-9")));
    }
    let transfer = Transfer::new(pair, proxy)?;
    let (discrete_rank, continuum_rank) = (discrete.len(), continuum.len());
    let map = ProjectionDifference { transfer: &transfer, discrete, continuum };
    let norm = power_norm(&map, opts)?.norm;
    Ok(ProjectionDistance { norm, discrete_rank, continuum_rank, projection_defect })
}
