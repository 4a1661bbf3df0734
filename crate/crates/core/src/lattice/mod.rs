//! Truncated periodic lattices, weighted fields and their Fourier transforms.
//!
//! A grid with mesh `h` and `N` points per axis covers the box
//! `[−Nh/2, Nh/2)^d` with periodic wrap. Indices along each axis are stored in
//! FFT order: storage slot `i` holds the signed index `n = i` for `i < N/2`
//! and `n = i − N` otherwise, so the point sits at `x = nh` and the matching
//! frequency is `ξ = 2πn/(Nh)`.

pub mod fft;
pub mod linear;
pub mod transfer;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resolvent::potential::PotentialSpec;
use crate::symbols::MAX_DIM;

pub use linear::LinearMap;
pub use transfer::{discretize, embed, projection_check, ProjectionReport, Transfer};

/// Periodic lattice `hZ^d` truncated to `N` points per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGrid {
    dim: usize,
    h: f64,
    n: usize,
}

impl LatticeGrid {
    pub fn new(dim: usize, h: f64, n: usize) -> Result<LatticeGrid> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Parameter(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Parameter(format!("mesh size must be positive, got {h}")));
        }
        if n < 8 || n % 2 != 0 {
            return Err(Error::Parameter(format!("points per axis must be even and at least 8, got {n}")));
        }
        Ok(LatticeGrid { dim, h, n })
    }

    /// Grid with mesh `h` covering a box of total side length `box_length`.
    pub fn with_box(dim: usize, h: f64, box_length: f64) -> Result<LatticeGrid> {
        let n = (box_length / h).round();
        if !(n >= 1.0) || ((n * h) - box_length).abs() > 1e-9 * box_length {
            return Err(Error::Parameter(format!("box length {box_length} is not a multiple of h = {h}")));
        }
        LatticeGrid::new(dim, h, n as usize)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Side length `Nh` of the periodic box.
    pub fn box_length(&self) -> f64 {
        self.n as f64 * self.h
    }

    /// Frequency spacing `2π/(Nh)`.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.box_length()
    }

    /// Weight `h^d` of the spatial ℓ² norm.
    pub fn space_weight(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Weight `(2π/(Nh))^d` of the frequency-side norm.
    pub fn frequency_weight(&self) -> f64 {
        self.frequency_step().powi(self.dim as i32)
    }

    /// Signed index of storage slot `i` along one axis.
    #[inline]
    pub fn signed(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage slot of a signed index, wrapped periodically.
    #[inline]
    pub fn slot(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    pub fn position(&self, i: usize) -> f64 {
        self.signed(i) as f64 * self.h
    }

    pub fn frequency(&self, i: usize) -> f64 {
        self.signed(i) as f64 * self.frequency_step()
    }

    pub fn multi_index(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0; MAX_DIM];
        for k in (0..self.dim).rev() {
            idx[k] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.dim).fold(0, |acc, &i| acc * self.n + i)
    }

    /// Position of a flat index.
    pub fn point(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.multi_index(flat);
        let mut x = [0.0; MAX_DIM];
        for k in 0..self.dim {
            x[k] = self.position(idx[k]);
        }
        x
    }

    /// Frequency of a flat index.
    pub fn wavevector(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.multi_index(flat);
        let mut xi = [0.0; MAX_DIM];
        for k in 0..self.dim {
            xi[k] = self.frequency(idx[k]);
        }
        xi
    }
}

/// Grid keys as they appear in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "one")]
    pub d: usize,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(rename = "N", default)]
    pub n: Option<usize>,
    #[serde(default = "default_refine")]
    pub refine: usize,
    /// Side length of the periodic box; overrides `N` in sweeps.
    #[serde(rename = "box", default)]
    pub box_length: Option<f64>,
}

fn one() -> usize {
    1
}

fn default_refine() -> usize {
    8
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { d: 1, h: None, n: None, refine: 8, box_length: None }
    }
}

impl GridSpec {
    /// Grid at mesh `h`: fixed box if given, else fixed `N`, else a box of side 32.
    pub fn grid_at(&self, h: f64) -> Result<LatticeGrid> {
        match (self.box_length, self.n) {
            (Some(l), _) => LatticeGrid::with_box(self.d, h, l),
            (None, Some(n)) => LatticeGrid::new(self.d, h, n),
            (None, None) => LatticeGrid::with_box(self.d, h, 32.0),
        }
    }
}

/// Whether field values are lattice samples or transform samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Space,
    Frequency,
}

/// Complex field on a grid, in space or frequency representation.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField {
    grid: LatticeGrid,
    domain: Domain,
    values: Vec<Complex64>,
}

impl LatticeField {
    pub fn zeros(grid: LatticeGrid, domain: Domain) -> LatticeField {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        LatticeField { grid, domain, values }
    }

    pub fn from_values(grid: LatticeGrid, domain: Domain, values: Vec<Complex64>) -> Result<LatticeField> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        Ok(LatticeField { grid, domain, values })
    }

    /// Spatial field `x ↦ f(x)` sampled at the grid points.
    pub fn from_fn(grid: LatticeGrid, f: impl Fn(&[f64]) -> Complex64) -> LatticeField {
        let d = grid.dim;
        let values = (0..grid.len()).map(|i| f(&grid.point(i)[..d])).collect();
        LatticeField { grid, domain: Domain::Space, values }
    }

    /// Kronecker delta at lattice site `n = 0`.
    pub fn delta(grid: LatticeGrid) -> LatticeField {
        let mut f = LatticeField::zeros(grid, Domain::Space);
        f.values[0] = Complex64::new(1.0, 0.0);
        f
    }

    /// Complex Gaussian noise.
    pub fn random(grid: LatticeGrid, domain: Domain, seed: u64) -> LatticeField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        LatticeField { grid, domain, values }
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn weight(&self) -> f64 {
        match self.domain {
            Domain::Space => self.grid.space_weight(),
            Domain::Frequency => self.grid.frequency_weight(),
        }
    }

    /// Weighted ℓ² norm; `h^d Σ|u(n)|²` in space.
    pub fn norm(&self) -> f64 {
        (self.weight() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Weighted inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &LatticeField) -> Result<Complex64> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.weight())
    }

    pub fn scale(&mut self, c: Complex64) {
        self.values.iter_mut().for_each(|v| *v *= c);
    }

    /// `self − other`.
    pub fn sub(&self, other: &LatticeField) -> Result<LatticeField> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(LatticeField { grid: self.grid.clone(), domain: self.domain, values })
    }
}

/// Transform direction of [`dft`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Unitary lattice Fourier transform.
///
/// Forward: `û(ξ) = h^d (2π)^{−d/2} Σ_n u(n) e^{−ihn·ξ}` at the grid
/// frequencies. Inverse: `u(n) = (2π)^{−d/2} Δξ^d Σ_m û(ξ_m) e^{ihn·ξ_m}`.
pub fn dft(field: &LatticeField, direction: Direction) -> Result<LatticeField> {
    let grid = &field.grid;
    if field.values.len() != grid.len() {
        return Err(Error::Shape("field size does not match its grid".into()));
    }
    let expected = match direction {
        Direction::Forward => Domain::Space,
        Direction::Inverse => Domain::Frequency,
    };
    if field.domain != expected {
        return Err(Error::Shape(format!("{direction:?} transform applied to a {:?} field", field.domain)));
    }
    let mut values = field.values.clone();
    let d = grid.dim as i32;
    let root = (2.0 * PI).powf(-0.5 * d as f64);
    let (inverse, scale, domain) = match direction {
        Direction::Forward => (false, grid.h.powi(d) * root, Domain::Frequency),
        Direction::Inverse => (true, grid.frequency_step().powi(d) * root, Domain::Space),
    };
    fft::transform_nd(&mut values, grid.n, grid.dim, inverse);
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(LatticeField { grid: grid.clone(), domain, values })
}

/// Transform to the requested domain, a no-op when already there.
pub fn to_domain(field: &LatticeField, domain: Domain) -> Result<LatticeField> {
    match (field.domain, domain) {
        (a, b) if a == b => Ok(field.clone()),
        (Domain::Space, Domain::Frequency) => dft(field, Direction::Forward),
        _ => dft(field, Direction::Inverse),
    }
}

/// Finite stand-in for the continuum: the same box at mesh `h/r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumProxy {
    coarse: LatticeGrid,
    fine: LatticeGrid,
    refine: usize,
}

impl ContinuumProxy {
    /// Requires `r ≥ 4`, so every shift `hξ + 2πj` with `|jᵢ| ≤ 1` and
    /// `hξ ∈ [−3π/2, 3π/2]^d` stays below the proxy cutoff.
    pub fn new(coarse: LatticeGrid, refine: usize) -> Result<ContinuumProxy> {
        if refine < 4 {
            return Err(Error::Aliasing(format!("refinement factor {refine} < 4 aliases shifted frequencies")));
        }
        let fine = LatticeGrid::new(coarse.dim, coarse.h / refine as f64, coarse.n * refine)?;
        Ok(ContinuumProxy { coarse, fine, refine })
    }

    pub fn coarse(&self) -> &LatticeGrid {
        &self.coarse
    }

    pub fn fine(&self) -> &LatticeGrid {
        &self.fine
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    /// Coarse slot of a fine slot along one axis (frequency folding).
    #[inline]
    pub fn coarse_slot(&self, fine_slot: usize) -> usize {
        self.coarse.slot(self.fine.signed(fine_slot))
    }

    /// Scaled frequency `hη = 2πm/N` of a fine slot along one axis.
    #[inline]
    pub fn scaled_frequency(&self, fine_slot: usize) -> f64 {
        2.0 * PI * self.fine.signed(fine_slot) as f64 / self.coarse.n as f64
    }
}

/// `V_h(k) = V(hk)` at every grid point.
pub fn sample_potential(potential: &PotentialSpec, grid: &LatticeGrid) -> LatticeField {
    LatticeField::from_fn(grid.clone(), |x| Complex64::new(potential.value(x), 0.0))
}
