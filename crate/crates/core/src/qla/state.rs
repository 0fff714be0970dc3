use num_complex::Complex;

use super::{eigh, CMatrix, Eigh};
use crate::{Error, Real, Result};

/// Tolerance on trace, norm and negativity checks for states.
pub(crate) fn state_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e4))
}

/// Normalised pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Accepts amplitudes whose squared norm is 1 within tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let s = Self { amplitudes };
        let drift = (s.norm_sqr() - T::one()).abs();
        if !(drift <= state_tolerance()) {
            return Err(Error::Validation(format!("state vector squared norm off by {drift:e}")));
        }
        Ok(s)
    }

    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let mut s = Self { amplitudes };
        let n = s.norm_sqr().sqrt();
        if !(n > T::zero()) {
            return Err(Error::Validation("cannot normalise a zero vector".into()));
        }
        s.amplitudes.iter_mut().for_each(|a| *a = *a / n);
        Ok(s)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `U |ψ⟩` without renormalising.
    pub fn evolve(&self, u: &CMatrix<T>) -> Self {
        Self {
            amplitudes: u.matvec(&self.amplitudes),
        }
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn to_density(&self) -> Density<T> {
        let n = self.dim();
        let m = CMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        Density { matrix: m }
    }
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> Density<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        Self::check(&matrix)?;
        let mut matrix = matrix;
        matrix.hermitize();
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller has produced by trace-preserving operations.
    pub(crate) fn new_unchecked(matrix: CMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn from_diagonal(populations: &[T]) -> Result<Self> {
        let tol = state_tolerance::<T>();
        if let Some(p) = populations.iter().find(|&&p| !(p >= -tol)) {
            return Err(Error::Validation(format!("negative population {p}")));
        }
        let total: T = populations.iter().copied().sum();
        if !((total - T::one()).abs() <= tol) {
            return Err(Error::Validation(format!("populations sum to {total}")));
        }
        Ok(Self {
            matrix: CMatrix::from_real_diagonal(populations),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_usize_lossy(dim);
        Self {
            matrix: CMatrix::from_real_diagonal(&vec![w; dim]),
        }
    }

    fn check(m: &CMatrix<T>) -> Result<()> {
        if !m.is_square() {
            return Err(Error::Validation("density matrix must be square".into()));
        }
        let tol = state_tolerance::<T>();
        let defect = m.hermiticity_defect();
        if !(defect <= tol) {
            return Err(Error::Validation(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let tr = m.trace().re;
        if !((tr - T::one()).abs() <= tol) {
            return Err(Error::Validation(format!("density matrix trace {tr}")));
        }
        let e = eigh(m)?;
        let min = e.values[e.values.len() - 1];
        if !(min >= -tol) {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn populations(&self) -> Vec<T> {
        self.matrix.diagonal_real()
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product_re(&self.matrix)
    }

    /// `Re Tr(ρ A)`.
    pub fn expectation(&self, op: &CMatrix<T>) -> T {
        self.matrix.trace_product_re(op)
    }

    pub fn eigen(&self) -> Result<Eigh<T>> {
        eigh(&self.matrix)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Self {
        let mut m = &(u * &self.matrix) * &u.adjoint();
        m.hermitize();
        Self { matrix: m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn rejects_bad_trace_and_negative_spectrum() {
        assert!(Density::<f64>::from_diagonal(&[0.5, 0.6]).is_err());
        let m = CMatrix::from_rows(
            2,
            2,
            vec![C::new(0.5, 0.0), C::new(0.9, 0.0), C::new(0.9, 0.0), C::new(0.5, 0.0)],
        );
        assert!(Density::new(m).is_err());
    }

    #[test]
    fn pure_state_has_unit_purity() {
        let s = 0.5f64.sqrt();
        let psi = StateVector::new(vec![C::new(s, 0.0), C::new(0.0, s)]).unwrap();
        let rho = psi.to_density();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!(Density::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn state_vector_norm_is_checked() {
        assert!(StateVector::new(vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]).is_err());
        let v = StateVector::normalized(vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
