//! Matrix-free linear maps between coefficient vectors.
//!
//! Every map in this crate acts on frequency-side coefficients. Coarse and
//! proxy grids share the same box, hence the same frequency weight `Δξ^d`,
//! so the weighted adjoint coincides with the plain conjugate transpose.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vector = Vec<Complex64>;

pub trait LinearMap: Send + Sync {
    fn input_len(&self) -> usize;
    fn output_len(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Result<Vector>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector>;
}

pub(crate) fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Shape(format!("vector of length {got}, expected {want}")));
    }
    Ok(())
}

impl<T: LinearMap + ?Sized> LinearMap for Box<T> {
    fn input_len(&self) -> usize {
        (**self).input_len()
    }
    fn output_len(&self) -> usize {
        (**self).output_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        (**self).apply_adjoint(y)
    }
}

impl<T: LinearMap + ?Sized> LinearMap for &T {
    fn input_len(&self) -> usize {
        (**self).input_len()
    }
    fn output_len(&self) -> usize {
        (**self).output_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        (**self).apply_adjoint(y)
    }
}

/// `outer ∘ inner`.
pub struct Compose<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<A: LinearMap, B: LinearMap> LinearMap for Compose<A, B> {
    fn input_len(&self) -> usize {
        self.inner.input_len()
    }
    fn output_len(&self) -> usize {
        self.outer.output_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        self.outer.apply(&self.inner.apply(x)?)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.inner.apply_adjoint(&self.outer.apply_adjoint(y)?)
    }
}

/// `left − right`.
pub struct Difference<A, B> {
    pub left: A,
    pub right: B,
}

fn subtract(mut a: Vector, b: &[Complex64]) -> Vector {
    a.iter_mut().zip(b).for_each(|(x, y)| *x -= y);
    a
}

impl<A: LinearMap, B: LinearMap> LinearMap for Difference<A, B> {
    fn input_len(&self) -> usize {
        self.left.input_len()
    }
    fn output_len(&self) -> usize {
        self.left.output_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        Ok(subtract(self.left.apply(x)?, &self.right.apply(x)?))
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        Ok(subtract(self.left.apply_adjoint(y)?, &self.right.apply_adjoint(y)?))
    }
}

/// `factor · inner`.
pub struct Scaled<A> {
    pub factor: Complex64,
    pub inner: A,
}

impl<A: LinearMap> LinearMap for Scaled<A> {
    fn input_len(&self) -> usize {
        self.inner.input_len()
    }
    fn output_len(&self) -> usize {
        self.inner.output_len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        let mut y = self.inner.apply(x)?;
        y.iter_mut().for_each(|v| *v *= self.factor);
        Ok(y)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        let mut x = self.inner.apply_adjoint(y)?;
        let c = self.factor.conj();
        x.iter_mut().for_each(|v| *v *= c);
        Ok(x)
    }
}

/// Multiplication by a fixed table.
pub struct Diagonal {
    pub entries: Vector,
}

impl LinearMap for Diagonal {
    fn input_len(&self) -> usize {
        self.entries.len()
    }
    fn output_len(&self) -> usize {
        self.entries.len()
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        check_len(x.len(), self.entries.len())?;
        Ok(x.iter().zip(&self.entries).map(|(a, d)| a * d).collect())
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        check_len(y.len(), self.entries.len())?;
        Ok(y.iter().zip(&self.entries).map(|(a, d)| a * d.conj()).collect())
    }
}

/// The identity on vectors of a given length.
pub struct Identity(pub usize);

impl LinearMap for Identity {
    fn input_len(&self) -> usize {
        self.0
    }
    fn output_len(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[Complex64]) -> Result<Vector> {
        check_len(x.len(), self.0)?;
        Ok(x.to_vec())
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Result<Vector> {
        self.apply(y)
    }
}
