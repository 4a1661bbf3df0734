//! Fourier-multiplier Hamiltonians `H = G(D) + V` on a periodic grid.
//!
//! Vectors are frequency coefficients. The multiplier acts diagonally; the
//! potential acts in space through a pair of FFTs.

use num_complex::Complex64;

use super::krylov::{gmres, GmresOptions};
use super::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::lattice::linear::{check_len, LinearMap, Vector};
use crate::lattice::{fft, to_domain, Domain, LatticeField, LatticeGrid};
use crate::symbols::{DiscretizedSymbol, Symbol, MAX_DIM};

#[derive(Clone, Debug)]
pub struct FourierHamiltonian {
    grid: LatticeGrid,
    multiplier: Vec<f64>,
    potential: Option<Vec<f64>>,
    potential_sup: f64,
}

impl FourierHamiltonian {
    fn build(grid: &LatticeGrid, potential: Option<&PotentialSpec>, g: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let d = grid.dim();
        let multiplier: Vec<f64> = (0..grid.len()).map(|i| g(&grid.wavevector(i)[..d])).collect();
        let (potential, potential_sup) = match potential {
            Some(v) if !v.is_zero() => {
                let samples: Vec<f64> = (0..grid.len()).map(|i| v.value(&grid.point(i)[..d])).collect();
                (Some(samples), v.sup())
            }
            _ => (None, 0.0),
        };
        Ok(FourierHamiltonian { grid: grid.clone(), multiplier, potential, potential_sup })
    }

    /// `H₀,h + V_h` on a lattice: the discretized symbol and `V_h(k) = V(hk)`.
    pub fn discrete(symbol: &Symbol, grid: &LatticeGrid, potential: Option<&PotentialSpec>) -> Result<Self> {
        check_dim(symbol, grid)?;
        let ds = DiscretizedSymbol::new(symbol.clone(), grid.h())?;
        Self::build(grid, potential, |xi| ds.value(xi))
    }

    /// `H₀ + V` on a proxy grid: the exact symbol at every proxy frequency.
    pub fn continuum(symbol: &Symbol, grid: &LatticeGrid, potential: Option<&PotentialSpec>) -> Result<Self> {
        check_dim(symbol, grid)?;
        Self::build(grid, potential, |xi| symbol.value(xi))
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn multiplier(&self) -> &[f64] {
        &self.multiplier
    }

    /// Potential samples in storage order, if any.
    pub fn potential(&self) -> Option<&[f64]> {
        self.potential.as_deref()
    }

    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    /// Rejects `z` in (or too close to the real part of) the spectrum.
    pub fn check_z(&self, z: Complex64) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::SpectralParameter(format!("non-finite z = {z}")));
        }
        if z.im != 0.0 {
            return Ok(());
        }
        if self.potential.is_none() {
            if z.re < 0.0 {
                return Ok(());
            }
            return Err(Error::SpectralParameter(format!("z = {z} lies in [0, ∞)")));
        }
        let mu = self.potential_sup + 1.0;
        if z.re <= -mu {
            Ok(())
        } else {
            Err(Error::SpectralParameter(format!("real z = {z} must satisfy z ≤ −μ = {}", -mu)))
        }
    }

    /// Multiplication by `V` of frequency coefficients.
    pub fn apply_potential(&self, x: &[Complex64]) -> Vector {
        let Some(v) = &self.potential else {
            return vec![Complex64::new(0.0, 0.0); x.len()];
        };
        let n = self.grid.n();
        let d = self.grid.dim();
        let mut buf = x.to_vec();
        fft::transform_nd(&mut buf, n, d, true);
        let norm = 1.0 / self.grid.len() as f64;
        buf.iter_mut().zip(v).for_each(|(b, &vv)| *b *= vv * norm);
        fft::transform_nd(&mut buf, n, d, false);
        buf
    }

    /// `(H − z)x`.
    pub fn apply_shifted(&self, z: Complex64, x: &[Complex64]) -> Result<Vector> {
        check_len(x.len(), self.grid.len())?;
        let mut out: Vector = x.iter().zip(&self.multiplier).map(|(v, &g)| v * (g - z)).collect();
        if self.potential.is_some() {
            out.iter_mut().zip(self.apply_potential(x)).for_each(|(o, p)| *o += p);
        }
        Ok(out)
    }

    /// `(H₀ − z)⁻¹x`, exact.
    pub fn free_resolvent(&self, z: Complex64, x: &[Complex64]) -> Vector {
        x.iter().zip(&self.multiplier).map(|(v, &g)| v / (g - z)).collect()
    }

    /// `(H − z)⁻¹x` with `‖(H − z)w − x‖ ≤ tol·‖x‖`.
    ///
    /// With a potential this solves `(I + V(H₀ − z)⁻¹)y = x` by GMRES and
    /// returns `w = (H₀ − z)⁻¹y`.
    pub fn resolvent(&self, z: Complex64, x: &[Complex64], opts: &GmresOptions) -> Result<Vector> {
        check_len(x.len(), self.grid.len())?;
        self.check_z(z)?;
        if self.potential.is_none() {
            return Ok(self.free_resolvent(z, x));
        }
        let op = |y: &[Complex64]| -> Result<Vector> {
            let r0 = self.free_resolvent(z, y);
            let vr = self.apply_potential(&r0);
            Ok(y.iter().zip(vr).map(|(a, b)| a + b).collect())
        };
        let sol = gmres(op, x, opts)?;
        let w = self.free_resolvent(z, &sol.x);
        let res = self.apply_shifted(z, &w)?;
        let xn = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let rn = res.iter().zip(x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        // Round-off in the recomputed residual scales with ‖(H−z)w‖.
        if rn > opts.tol * xn * 1.5 + 1e-13 * xn {
            return Err(Error::Solver { iterations: sol.iterations, residual: rn / xn });
        }
        Ok(w)
    }

    /// Resolvent as a [`LinearMap`]; the adjoint uses `z̄`.
    pub fn resolvent_map(&self, z: Complex64, opts: GmresOptions) -> ResolventMap<'_> {
        ResolventMap { ham: self, z, opts }
    }
}

fn check_dim(symbol: &Symbol, grid: &LatticeGrid) -> Result<()> {
    if symbol.dim() != grid.dim() {
        return Err(Error::Shape(format!("symbol in d = {} on a grid in d = {}", symbol.dim(), grid.dim())));
    }
    debug_assert!(grid.dim() <= MAX_DIM);
    Ok(())
}

pub struct ResolventMap<'a> {
    ham: &'a FourierHamiltonian,
    z: Complex64,
    opts: GmresOptions,
}

impl LinearMap for ResolventMap<'_> {
    fn input_len(&self) -> usize {
        self.ham.grid.len()
    }
    fn output_len(&self) -> usize {
        self.ham.grid.len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        self.ham.resolvent(self.z, x, &self.opts)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.ham.resolvent(self.z.conj(), y, &self.opts)
    }
}

/// `(H − z)⁻¹u` for a field in either domain; the result is in the same domain.
pub fn apply_resolvent(ham: &FourierHamiltonian, z: Complex64, u: &LatticeField, tol: f64) -> Result<LatticeField> {
    if u.grid() != ham.grid() {
        return Err(Error::Shape("field and operator live on different grids".into()));
    }
    let coeffs = to_domain(u, Domain::Frequency)?;
    let opts = GmresOptions { tol, ..GmresOptions::default() };
    let w = ham.resolvent(z, coeffs.values(), &opts)?;
    let out = LatticeField::from_values(u.grid().clone(), Domain::Frequency, w)?;
    to_domain(&out, u.domain())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel_residual(ham: &FourierHamiltonian, z: Complex64, w: &[Complex64], u: &[Complex64]) -> f64 {
        let r = ham.apply_shifted(z, w).unwrap();
        let num: f64 = r.iter().zip(u).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = u.iter().map(|a| a.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn free_resolvent_divides_by_symbol() {
        let grid = LatticeGrid::new(1, 0.1, 64).unwrap();
        let lap = Symbol::laplacian(1).unwrap();
        let ham = FourierHamiltonian::continuum(&lap, &grid, None).unwrap();
        let u = LatticeField::random(grid.clone(), Domain::Frequency, 3);
        let z = Complex64::new(-1.0, 0.0);
        let w = apply_resolvent(&ham, z, &u, 1e-10).unwrap();
        for (i, (a, b)) in w.values().iter().zip(u.values()).enumerate() {
            let xi = grid.frequency(i);
            assert!((a - b / (xi * xi + 1.0)).norm() < 1e-15 * b.norm().max(1.0));
        }
        assert!(rel_residual(&ham, z, w.values(), u.values()) < 1e-15);
    }

    #[test]
    fn plane_wave_is_eigenmode() {
        let grid = LatticeGrid::new(1, 0.25, 64).unwrap();
        let lap = Symbol::laplacian(1).unwrap();
        let ham = FourierHamiltonian::continuum(&lap, &grid, None).unwrap();
        let xi0 = grid.frequency(5);
        let u = LatticeField::from_fn(grid.clone(), |x| Complex64::from_polar(1.0, xi0 * x[0]));
        let z = Complex64::new(-1.0, 0.0);
        let w = apply_resolvent(&ham, z, &u, 1e-12).unwrap();
        let expect = 1.0 / (xi0 * xi0 + 1.0);
        for (a, b) in w.values().iter().zip(u.values()) {
            assert!((a - b * expect).norm() < 1e-12);
        }
    }

    #[test]
    fn potential_solve_meets_residual() {
        let grid = LatticeGrid::new(1, 32.0 / 1024.0, 1024).unwrap();
        let lap = Symbol::laplacian(1).unwrap();
        let v = PotentialSpec::sech2(-2.0);
        let ham = FourierHamiltonian::discrete(&lap, &grid, Some(&v)).unwrap();
        let u = LatticeField::random(grid.clone(), Domain::Frequency, 8);
        let z = Complex64::new(-1.0, 1.0);
        let opts = GmresOptions { tol: 1e-10, restart: 50, max_iter: 200 };
        let w = ham.resolvent(z, u.values(), &opts).unwrap();
        assert!(rel_residual(&ham, z, &w, u.values()) < 1e-10);
    }

    #[test]
    fn spectral_parameter_rules() {
        let grid = LatticeGrid::new(1, 0.5, 16).unwrap();
        let lap = Symbol::laplacian(1).unwrap();
        let free = FourierHamiltonian::discrete(&lap, &grid, None).unwrap();
        assert!(free.check_z(Complex64::new(-0.5, 0.0)).is_ok());
        assert!(matches!(free.check_z(Complex64::new(0.0, 0.0)), Err(Error::SpectralParameter(_))));
        let v = PotentialSpec::sech2(-2.0);
        let ham = FourierHamiltonian::discrete(&lap, &grid, Some(&v)).unwrap();
        assert!(ham.check_z(Complex64::new(-2.0, 0.0)).is_err());
        assert!(ham.check_z(Complex64::new(-3.0, 0.0)).is_ok());
        assert!(ham.check_z(Complex64::new(5.0, 0.1)).is_ok());
    }

    #[test]
    fn discrete_resolvent_is_hermitian_at_minus_one() {
        let grid = LatticeGrid::new(1, 2.0 * PI / 64.0, 64).unwrap();
        let lap = Symbol::frac_lap(1, 1.5).unwrap();
        let v = PotentialSpec::cos(1.0);
        let ham = FourierHamiltonian::discrete(&lap, &grid, Some(&v)).unwrap();
        let z = Complex64::new(-3.0, 0.0);
        let opts = GmresOptions { tol: 1e-13, ..GmresOptions::default() };
        for seed in 0..5 {
            let a = LatticeField::random(grid.clone(), Domain::Frequency, seed);
            let b = LatticeField::random(grid.clone(), Domain::Frequency, seed + 50);
            let ra = ham.resolvent(z, a.values(), &opts).unwrap();
            let rb = ham.resolvent(z, b.values(), &opts).unwrap();
            let lhs: Complex64 = a.values().iter().zip(&rb).map(|(p, q)| p.conj() * q).sum();
            let rhs: Complex64 = ra.iter().zip(b.values()).map(|(p, q)| p.conj() * q).sum();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
