use num_complex::Complex;

use super::CMatrix;
use crate::{Error, Real, Result};

/// Largest matrix `eigh` accepts.
pub const MAX_EIGH_DIM: usize = 4096;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition of a Hermitian matrix.
///
/// `values` are sorted in descending order and column `i` of `vectors` is the
/// normalised eigenvector for `values[i]`.
#[derive(Debug, Clone)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> Eigh<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V†` for a complex-valued spectral function.
    pub fn apply_fn(&self, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
        let n = self.dim();
        let fv: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (k, &fk) in fv.iter().enumerate() {
                    acc = acc + v[(i, k)] * fk * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        self.apply_fn(|l| Complex::new(l, T::zero()))
    }

    /// `exp(-i H t)` for the decomposed `H`.
    pub fn propagator(&self, t: T) -> CMatrix<T> {
        self.apply_fn(|l| Complex::from_polar(T::one(), -l * t))
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex<T>> {
        self.vectors.column(i)
    }
}

/// Tolerance on `|m_ij - conj(m_ji)|` used to accept a matrix as Hermitian.
pub(crate) fn hermitian_tolerance<T: Real>(scale: T) -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0)) * scale.max(T::one())
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh<T: Real>(m: &CMatrix<T>) -> Result<Eigh<T>> {
    if !m.is_square() {
        return Err(Error::Validation(format!(
            "eigh needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > MAX_EIGH_DIM {
        return Err(Error::Capacity {
            what: "eigh dimension",
            requested: n,
            limit: MAX_EIGH_DIM,
        });
    }
    let defect = m.hermiticity_defect();
    if !(defect <= hermitian_tolerance(m.max_abs())) {
        return Err(Error::Validation(format!(
            "eigh needs a Hermitian matrix (defect {defect:e})"
        )));
    }

    let mut a = m.clone();
    a.hermitize();
    let mut v = CMatrix::identity(n);
    let norm = a.frobenius_norm();
    let target = T::epsilon() * norm;

    let mut converged = norm == T::zero();
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= target {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) <= target {
        converged = true;
    }
    if !converged {
        return Err(Error::Numerical {
            message: "Jacobi eigensolver did not converge".into(),
            iterations: sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.diagonal_real();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p,q]` with the unitary `G = diag(1, e^{-iφ}) R(θ)`.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let b = a[(p, q)];
    let babs = b.norm();
    if babs == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if babs <= T::epsilon() * T::epsilon() * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex::new(T::zero(), T::zero());
        a[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    let phase_conj = (b / babs).conj();
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * babs);
    let t = if tau == T::zero() {
        T::one()
    } else {
        tau.signum() / (tau.abs() + T::one().hypot(tau))
    };
    let c = T::one() / T::one().hypot(t);
    let s = t * c;

    let zero = T::zero();
    let g_pp = Complex::new(c, zero);
    let g_pq = Complex::new(s, zero);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(zero, zero);
    a[(q, p)] = Complex::new(zero, zero);
    a[(p, p)] = Complex::new(app - t * babs, zero);
    a[(q, q)] = Complex::new(aqq + t * babs, zero);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix<f64> {
        let mut m = CMatrix::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        m.hermitize();
        m
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eigh(&CMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted_descending_with_permuted_basis() {
        let e = eigh(&CMatrix::<f64>::from_real_diagonal(&[0.2, 0.8])).unwrap();
        assert_eq!(e.values, vec![0.8, 0.2]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(8, &mut rng);
        let e = eigh(&h).unwrap();
        let err = (&e.reconstruct() - &h).max_abs();
        assert!(err < 1e-9, "reconstruction error {err}");
        for w in e.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!((&gram - &CMatrix::identity(8)).max_abs() < 1e-9);
        for i in 0..8 {
            let hv = h.matvec(&e.eigenvector(i));
            for (k, x) in hv.iter().enumerate() {
                assert!((x - e.vectors[(k, i)] * e.values[i]).norm() < 1e-9 * h.frobenius_norm());
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let h = CMatrix::<f32>::from_rows(
            2,
            2,
            vec![
                Complex::new(1.0, 0.0),
                Complex::new(0.0, 1.0),
                Complex::new(0.0, -1.0),
                Complex::new(1.0, 0.0),
            ],
        );
        let e = eigh(&h).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-5);
        assert!(e.values[1].abs() < 1e-5);
    }

    #[test]
    fn tiny_scale_matrices_keep_relative_accuracy() {
        // Entries of order 1e-10 as in the effective Hamiltonian.
        let s = 1e-10;
        let h = CMatrix::from_rows(
            2,
            2,
            vec![
                C::new(-s / 30.0, 0.0),
                C::new(s, 0.0),
                C::new(s, 0.0),
                C::new(-s / 30.0, 0.0),
            ],
        );
        let e = eigh(&h).unwrap();
        assert!(((e.values[0] - e.values[1]) / (2.0 * s) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = CMatrix::from_rows(
            2,
            2,
            vec![C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        );
        assert!(matches!(eigh(&m), Err(Error::Validation(_))));
        assert!(matches!(eigh(&CMatrix::<f64>::zeros(2, 3)), Err(Error::Validation(_))));
    }

    #[test]
    fn propagator_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(6, &mut rng);
        let u = eigh(&h).unwrap().propagator(0.7);
        let uu = &u * &u.adjoint();
        assert!((&uu - &CMatrix::identity(6)).max_abs() < 1e-12);
    }
}
