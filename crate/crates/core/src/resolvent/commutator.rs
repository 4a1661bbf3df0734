//! The commutator `V_hK_h − K_hV` from the proxy to the lattice.

use num_complex::Complex64;

use super::hamiltonian::FourierHamiltonian;
use super::potential::PotentialSpec;
use super::power::{power_norm, PowerEstimate, PowerOptions};
use crate::error::{Error, Result};
use crate::lattice::linear::{LinearMap, Vector};
use crate::lattice::transfer::Transfer;
use crate::lattice::ContinuumProxy;
use crate::riesz::RieszPair;
use crate::symbols::Symbol;

/// `f ↦ V_h K_h f − K_h V f` on frequency coefficients.
pub struct Commutator {
    transfer: Transfer,
    coarse: FourierHamiltonian,
    fine: FourierHamiltonian,
}

impl Commutator {
    pub fn new(potential: &PotentialSpec, pair: &RieszPair, proxy: &ContinuumProxy) -> Result<Commutator> {
        // The multiplier plays no role; any symbol of the right dimension will do.
        let sym = Symbol::laplacian(proxy.coarse().dim())?;
        Ok(Commutator {
            transfer: Transfer::new(pair, proxy)?,
            coarse: FourierHamiltonian::discrete(&sym, proxy.coarse(), Some(potential))?,
            fine: FourierHamiltonian::continuum(&sym, proxy.fine(), Some(potential))?,
        })
    }
}

impl LinearMap for Commutator {
    fn input_len(&self) -> usize {
        self.transfer.fine_len()
    }
    fn output_len(&self) -> usize {
        self.transfer.coarse_len()
    }
    fn apply(&self, f: &[Complex64]) -> Result<Vector> {
        let k = self.transfer.discretization();
        let left = self.coarse.apply_potential(&k.apply(f)?);
        let right = k.apply(&self.fine.apply_potential(f))?;
        Ok(left.iter().zip(right).map(|(a, b)| a - b).collect())
    }
    fn apply_adjoint(&self, g: &[Complex64]) -> Result<Vector> {
        let k = self.transfer.discretization();
        let left = k.apply_adjoint(&self.coarse.apply_potential(g))?;
        let right = self.fine.apply_potential(&k.apply_adjoint(g)?);
        Ok(left.iter().zip(right).map(|(a, b)| a - b).collect())
    }
}

/// Power-iteration estimate of `‖V_hK_h − K_hV‖`.
pub fn potential_commutator_norm(
    potential: &PotentialSpec,
    pair: &RieszPair,
    proxy: &ContinuumProxy,
    opts: &PowerOptions,
) -> Result<PowerEstimate> {
    if !potential.sup().is_finite() {
        return Err(Error::Parameter("potential must be bounded".into()));
    }
    if potential.is_zero() {
        return Ok(PowerEstimate { norm: 0.0, converged: true, last_increment: 0.0, iterations: 0 });
    }
    let map = Commutator::new(potential, pair, proxy)?;
    power_norm(&map, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeGrid;

    #[test]
    fn constant_commutes() {
        let pair = RieszPair::standard(1).unwrap();
        let proxy = ContinuumProxy::new(LatticeGrid::new(1, 0.25, 64).unwrap(), 4).unwrap();
        let est = potential_commutator_norm(&PotentialSpec::constant(2.5), &pair, &proxy, &PowerOptions::default()).unwrap();
        assert!(est.norm < 1e-8, "{}", est.norm);
    }

    #[test]
    fn holder_potential_commutator_shrinks() {
        let pair = RieszPair::standard(1).unwrap();
        let v = PotentialSpec::sin_abs(0.5).unwrap();
        let norm_at = |h: f64| {
            let grid = LatticeGrid::with_box(1, h, 16.0).unwrap();
            let proxy = ContinuumProxy::new(grid, 4).unwrap();
            potential_commutator_norm(&v, &pair, &proxy, &PowerOptions::default()).unwrap().norm
        };
        let a = norm_at(0.25);
        let b = norm_at(0.0625);
        assert!(b < a, "{a} {b}");
    }
}
