//! Dense symmetric eigendecompositions of truncated Hamiltonians.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{dft, fft, Direction, Domain, LatticeField, LatticeGrid};
use crate::resolvent::{FourierHamiltonian, PotentialSpec};
use crate::symbols::{Symbol, MAX_DIM};

/// Largest grid handed to the dense eigensolver.
pub const MAX_DENSE: usize = 4096;

/// Real symmetric matrix of `H` in the lattice basis.
///
/// The multiplier part is the circulant whose first column is the inverse
/// transform of the multiplier table; it is real when the symbol is even.
pub fn dense_operator(ham: &FourierHamiltonian) -> Result<DMatrix<f64>> {
    let grid = ham.grid();
    let len = grid.len();
    if len > MAX_DENSE {
        return Err(Error::Configuration(format!("{len} points exceed the dense limit {MAX_DENSE}")));
    }
    let (n, d) = (grid.n(), grid.dim());
    let mut col: Vec<Complex64> = ham.multiplier().iter().map(|&g| Complex64::new(g, 0.0)).collect();
    fft::transform_nd(&mut col, n, d, true);
    let scale = 1.0 / len as f64;
    let peak = col.iter().map(|c| c.norm()).fold(0.0, f64::max) * scale;
    if col.iter().any(|c| c.im.abs() * scale > 1e-10 * peak.max(1.0)) {
        return Err(Error::Numeric("symbol is not even; the truncated operator is not real".into()));
    }
    let idx: Vec<[usize; MAX_DIM]> = (0..len).map(|i| grid.multi_index(i)).collect();
    let mut a = DMatrix::from_fn(len, len, |k, l| {
        let mut diff = [0usize; MAX_DIM];
        for ax in 0..d {
            diff[ax] = (idx[k][ax] + n - idx[l][ax]) % n;
        }
        col[grid.flat_index(&diff[..d])].re * scale
    });
    if let Some(v) = ham.potential() {
        for (k, &vk) in v.iter().enumerate() {
            a[(k, k)] += vk;
        }
    }
    Ok(a)
}

/// Sorted eigenvalues with orthonormal eigenvectors in the lattice basis.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    grid: LatticeGrid,
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl DenseSpectrum {
    pub fn new(ham: &FourierHamiltonian) -> Result<DenseSpectrum> {
        let a = dense_operator(ham)?;
        let eig = a.symmetric_eigen();
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("eigensolver returned non-finite values".into()));
        }
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(DenseSpectrum { grid: ham.grid().clone(), values, vectors })
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Indices of eigenvalues in the open interval `(a, b)`.
    pub fn in_window(&self, a: f64, b: f64) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] > a && self.values[i] < b).collect()
    }

    /// Eigenvector `i` as a frequency field of unit norm.
    pub fn frequency_vector(&self, i: usize) -> Result<LatticeField> {
        let w = self.grid.space_weight().sqrt();
        let values = self.vectors.column(i).iter().map(|&v| Complex64::new(v / w, 0.0)).collect();
        dft(&LatticeField::from_values(self.grid.clone(), Domain::Space, values)?, Direction::Forward)
    }

    /// Eigenvector `i` as frequency coefficients of unit Euclidean norm,
    /// placed on `target`, which must share the box. Frequencies beyond
    /// either cutoff are dropped.
    pub fn coefficients_on(&self, i: usize, target: &LatticeGrid) -> Result<Vec<Complex64>> {
        let src = &self.grid;
        if src.dim() != target.dim() || (src.box_length() - target.box_length()).abs() > 1e-9 * src.box_length() {
            return Err(Error::Shape("grids do not share a box".into()));
        }
        let f = self.frequency_vector(i)?;
        let scale = src.frequency_weight().sqrt();
        let d = src.dim();
        let half = (src.n() / 2) as i64;
        let mut out = vec![Complex64::new(0.0, 0.0); target.len()];
        let mut slots = [0usize; MAX_DIM];
        'outer: for (flat, o) in out.iter_mut().enumerate() {
            let idx = target.multi_index(flat);
            for k in 0..d {
                let m = target.signed(idx[k]);
                if m < -half || m >= half {
                    continue 'outer;
                }
                slots[k] = src.slot(m);
            }
            *o = f.values()[src.flat_index(&slots[..d])] * scale;
        }
        Ok(out)
    }
}

/// Exact-symbol collocation on a fixed fine mesh, standing in for the
/// continuum operator's discrete spectrum and eigenvectors.
#[derive(Clone, Debug)]
pub struct Reference {
    spectrum: DenseSpectrum,
}

impl Reference {
    pub fn new(symbol: &Symbol, potential: Option<&PotentialSpec>, box_length: f64, mesh: f64) -> Result<Reference> {
        let grid = LatticeGrid::with_box(symbol.dim(), mesh, box_length)?;
        let ham = FourierHamiltonian::continuum(symbol, &grid, potential)?;
        Ok(Reference { spectrum: DenseSpectrum::new(&ham)? })
    }

    pub fn spectrum(&self) -> &DenseSpectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }
}
