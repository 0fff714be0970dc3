use num_complex::Complex;

use super::{CMatrix, Density, StateVector};
use crate::{Error, Real, Result};

/// Default cap on the number of entries a Kronecker product may produce.
pub const DEFAULT_TENSOR_CAP: usize = 1 << 20;

/// Eigenvalues below this are treated as exact zeros inside logarithms.
pub const EIGEN_FLOOR: f64 = 1e-14;

pub fn tensor<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    tensor_with_cap(a, b, DEFAULT_TENSOR_CAP)
}

/// Kronecker product `a ⊗ b`; `a` carries the slow index.
pub fn tensor_with_cap<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, cap: usize) -> Result<CMatrix<T>> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let entries = rows.saturating_mul(cols);
    if entries > cap {
        return Err(Error::Capacity {
            what: "tensor product entries",
            requested: entries,
            limit: cap,
        });
    }
    let (rb, cb) = (b.rows(), b.cols());
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    }))
}

/// Splits full indices into (kept, traced) composite indices.
struct Split {
    kept_dim: usize,
    rest_dim: usize,
    /// `full[a * rest_dim + r]` is the full index of kept `a`, traced `r`.
    full: Vec<usize>,
}

fn split(dims: &[usize], keep: &[usize]) -> Result<Split> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Validation("subsystem dimensions must be positive".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Validation(format!(
            "kept subsystems {keep:?} out of range for {} subsystems",
            dims.len()
        )));
    }
    let total: usize = dims.iter().product();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let rest_dim = total / kept_dim;
    let mut full = vec![0; total];
    let mut digits = vec![0usize; dims.len()];
    for idx in 0..total {
        let mut rem = idx;
        for s in (0..dims.len()).rev() {
            digits[s] = rem % dims[s];
            rem /= dims[s];
        }
        let (mut a, mut r) = (0, 0);
        for (s, &d) in dims.iter().enumerate() {
            if keep.binary_search(&s).is_ok() {
                a = a * d + digits[s];
            } else {
                r = r * d + digits[s];
            }
        }
        full[a * rest_dim + r] = idx;
    }
    Ok(Split {
        kept_dim,
        rest_dim,
        full,
    })
}

/// Reduced state of subsystem `keep` of a multipartite density matrix.
pub fn partial_trace<T: Real>(rho: &Density<T>, dims: &[usize], keep: usize) -> Result<Density<T>> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Validation(format!(
            "subsystem dims {dims:?} multiply to {total}, state has dimension {}",
            rho.dim()
        )));
    }
    let sp = split(dims, &[keep])?;
    let m = rho.matrix();
    let mut out = CMatrix::zeros(sp.kept_dim, sp.kept_dim);
    for a in 0..sp.kept_dim {
        for b in 0..sp.kept_dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for r in 0..sp.rest_dim {
                acc = acc + m[(sp.full[a * sp.rest_dim + r], sp.full[b * sp.rest_dim + r])];
            }
            out[(a, b)] = acc;
        }
    }
    out.hermitize();
    Ok(Density::new_unchecked(out))
}

/// Reduced density matrix on the subsystems `keep` (in ascending order) of a
/// pure state, computed without forming `|ψ⟩⟨ψ|`.
pub fn reduce_pure<T: Real>(psi: &StateVector<T>, dims: &[usize], keep: &[usize]) -> Result<CMatrix<T>> {
    let total: usize = dims.iter().product();
    if total != psi.dim() {
        return Err(Error::Validation(format!(
            "subsystem dims {dims:?} multiply to {total}, state has dimension {}",
            psi.dim()
        )));
    }
    let sp = split(dims, keep)?;
    let amp = psi.amplitudes();
    let mut out = CMatrix::zeros(sp.kept_dim, sp.kept_dim);
    let mut col = vec![Complex::new(T::zero(), T::zero()); sp.kept_dim];
    for r in 0..sp.rest_dim {
        for (a, c) in col.iter_mut().enumerate() {
            *c = amp[sp.full[a * sp.rest_dim + r]];
        }
        for a in 0..sp.kept_dim {
            if col[a].norm_sqr() == T::zero() {
                continue;
            }
            for b in 0..sp.kept_dim {
                out[(a, b)] = out[(a, b)] + col[a] * col[b].conj();
            }
        }
    }
    Ok(out)
}

fn xlogx<T: Real>(x: T) -> T {
    if x < T::lit(EIGEN_FLOOR) {
        T::zero()
    } else {
        x * x.ln()
    }
}

/// `-Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &Density<T>) -> Result<T> {
    let e = rho.eigen()?;
    let s = -e.values.iter().map(|&l| xlogx(l)).sum::<T>();
    Ok(s.max(T::zero()))
}

/// `Tr ρ (ln ρ - ln σ)` in nats.
///
/// Fails with [`Error::Domain`] when `ρ` has weight outside the support of `σ`.
pub fn relative_entropy_quantum<T: Real>(rho: &Density<T>, sigma: &Density<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Validation(format!(
            "relative entropy of states with dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let floor = T::lit(EIGEN_FLOOR);
    let er = rho.eigen()?;
    let es = sigma.eigen()?;
    let neg_entropy: T = er.values.iter().map(|&l| xlogx(l)).sum();
    let mut cross = T::zero();
    for (j, &mu) in es.values.iter().enumerate() {
        let w = es.eigenvector(j);
        let weight = rho.matrix().sandwich(&w, &w).re;
        if mu < floor {
            if weight > floor {
                return Err(Error::Domain(format!(
                    "state has weight {weight:e} outside the support of the reference (eigenvalue {mu:e}); relative entropy is infinite"
                )));
            }
            continue;
        }
        cross = cross + weight * mu.ln();
    }
    Ok(neg_entropy - cross)
}
