//! Ergotropy, entropy costs, closed-form predictions and photon statistics.

use std::cmp::Ordering;

use crate::field::{mean_occupation, FieldState};
use crate::model::{thermal_atom, ModelParams};
use crate::qla::{eigh, relative_entropy_quantum, CMatrix, Density, EIGEN_FLOOR};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErgotropyMethod {
    /// Energy above the passive rearrangement of the spectrum.
    Passive,
    /// Difference of quantum and classical relative entropies to the Gibbs state.
    Entropic,
    /// Fock-space form `ω_q Σ p_i (⟨p_i|N|p_i⟩ − i)`.
    FieldFormula,
}

/// Energies in the units of the Hamiltonian supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgotropyReport<T> {
    pub ergotropy: T,
    pub passive_energy: T,
    pub total_energy: T,
    pub method: ErgotropyMethod,
}

fn descending<T: Real>(a: &T, b: &T) -> Ordering {
    b.partial_cmp(a).unwrap_or(Ordering::Equal)
}

/// `(p_i descending, E_i ascending)` for `rho` and `h`.
fn passive_pairing<T: Real>(rho: &Density<T>, h: &CMatrix<T>) -> Result<(Vec<T>, Vec<T>)> {
    if rho.dim() != h.rows() || !h.is_square() {
        return Err(Error::Validation(format!(
            "state dimension {} does not match Hamiltonian {}x{}",
            rho.dim(),
            h.rows(),
            h.cols()
        )));
    }
    let p = rho.eigen()?.values;
    let mut e = eigh(h)?.values;
    e.reverse();
    Ok((p, e))
}

/// `Tr(ρH) − Σ p_i E_i` with populations descending against energies ascending.
pub fn ergotropy_passive<T: Real>(rho: &Density<T>, h: &CMatrix<T>) -> Result<ErgotropyReport<T>> {
    let (p, e) = passive_pairing(rho, h)?;
    let total = rho.expectation(h);
    let passive = p.iter().zip(&e).map(|(&pi, &ei)| pi * ei).sum();
    Ok(ErgotropyReport {
        ergotropy: total - passive,
        passive_energy: passive,
        total_energy: total,
        method: ErgotropyMethod::Passive,
    })
}

/// Gibbs state `exp(−βH)/Z`.
pub fn gibbs_state<T: Real>(h: &CMatrix<T>, beta: T) -> Result<Density<T>> {
    if !(beta > T::zero()) {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    let e = eigh(h)?;
    let e_min = e.values[e.dim() - 1];
    let z: T = e.values.iter().map(|&l| (-beta * (l - e_min)).exp()).sum();
    let m = e.apply_fn(|l| num_complex::Complex::new((-beta * (l - e_min)).exp() / z, T::zero()));
    let mut m = m;
    m.hermitize();
    Ok(Density::new_unchecked(m))
}

/// `β E = S(ρ‖ρ_β) − D(ρ‖ρ_β)` with the classical term pairing descending
/// populations against descending Gibbs weights.
///
/// Fails with [`Error::Domain`] when the Gibbs state is numerically rank
/// deficient (some weight below the eigenvalue floor).
pub fn ergotropy_entropic<T: Real>(rho: &Density<T>, beta: T, h: &CMatrix<T>) -> Result<ErgotropyReport<T>> {
    let (p, e) = passive_pairing(rho, h)?;
    let gibbs = gibbs_state(h, beta)?;
    let mut q = gibbs.eigen()?.values;
    q.sort_by(descending);
    let floor = T::lit(EIGEN_FLOOR);
    if q[q.len() - 1] < floor {
        return Err(Error::Domain(format!(
            "Gibbs state at beta = {beta} lacks full support (smallest weight {:e})",
            q[q.len() - 1]
        )));
    }
    let quantum = relative_entropy_quantum(rho, &gibbs)?;
    let classical: T = p
        .iter()
        .zip(&q)
        .map(|(&pi, &qi)| if pi < floor { T::zero() } else { pi * (pi / qi).ln() })
        .sum();
    let total = rho.expectation(h);
    let passive = p.iter().zip(&e).map(|(&pi, &ei)| pi * ei).sum();
    Ok(ErgotropyReport {
        ergotropy: (quantum - classical) / beta,
        passive_energy: passive,
        total_energy: total,
        method: ErgotropyMethod::Entropic,
    })
}

/// Field ergotropy for `H = ω_q b†b`: `ω_q Σ_i p_i (⟨p_i|N|p_i⟩ − i)`.
pub fn ergotropy_field_formula(field: &FieldState, omega_q: f64) -> Result<ErgotropyReport<f64>> {
    let (pairs, total) = match field {
        FieldState::Diagonal(pops) => {
            let mut pairs: Vec<(f64, f64)> = pops.iter().enumerate().map(|(n, &p)| (p, n as f64)).collect();
            pairs.sort_by(|a, b| descending(&a.0, &b.0));
            (pairs, mean_occupation(pops))
        }
        FieldState::Density(rho) => {
            let e = rho.eigen()?;
            let pairs = (0..e.dim())
                .map(|i| {
                    let n_mean: f64 = (0..e.dim()).map(|n| n as f64 * e.vectors[(n, i)].norm_sqr()).sum();
                    (e.values[i], n_mean)
                })
                .collect();
            (pairs, mean_occupation(&rho.populations()))
        }
    };
    let ergotropy = omega_q
        * pairs
            .iter()
            .enumerate()
            .map(|(i, &(p, n))| p * (n - i as f64))
            .sum::<f64>();
    let passive = omega_q * pairs.iter().enumerate().map(|(i, &(p, _))| p * i as f64).sum::<f64>();
    Ok(ErgotropyReport {
        ergotropy,
        passive_energy: passive,
        total_energy: omega_q * total,
        method: ErgotropyMethod::FieldFormula,
    })
}

/// Low-temperature closed forms for a K-atom chain starting from the vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormErgotropies {
    pub entangled: f64,
    pub classically_correlated: f64,
    /// `entangled / classically_correlated = K / (K − p_e/p_g)`.
    pub ratio: f64,
}

/// Closed forms from explicit populations (renormalised to `p_g + p_e = 1`).
pub fn closed_form_ergotropies_from(k: usize, p_g: f64, p_e: f64, omega_q: f64) -> ClosedFormErgotropies {
    let z = p_g + p_e;
    let (p_g, p_e) = (p_g / z, p_e / z);
    let kf = k as f64;
    ClosedFormErgotropies {
        entangled: kf * omega_q / (1.0 + p_e / p_g),
        classically_correlated: omega_q * (kf * p_g - p_e),
        ratio: kf / (kf - p_e / p_g),
    }
}

/// Closed forms at the thermal populations of `p`; `p_e/p_g = e^{−χ/T̄}`.
pub fn closed_form_ergotropies(k: usize, p: &ModelParams) -> Result<ClosedFormErgotropies> {
    let atom = thermal_atom(p)?;
    Ok(closed_form_ergotropies_from(k, atom.p_g, atom.p_e, p.omega_q()))
}

/// Von Neumann entropy of the classically correlated chain state,
/// `x e^{−x}/Z + ln Z` with `x = χ/T̄`, `Z = 1 + e^{−x}`. Independent of the
/// chain length.
pub fn cc_chain_entropy(p: &ModelParams) -> f64 {
    let x = p.chi() / p.t_bar();
    let w = (-x).exp();
    let z = 1.0 + w;
    x * w / z + z.ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonFit<T> {
    /// Total variation distance to the Poisson law with the same mean.
    pub tv_distance: T,
    pub mean: T,
}

/// Distance of Fock populations from the Poisson distribution of equal mean.
/// Poisson mass beyond the cutoff counts fully towards the distance.
pub fn poisson_tv<T: Real>(pops: &[T]) -> PoissonFit<T> {
    let mean: T = pops.iter().enumerate().map(|(n, &p)| T::from_usize_lossy(n) * p).sum();
    let mut covered = T::zero();
    let mut l1 = T::zero();
    let ln_mu = mean.ln();
    let mut ln_pmf = -mean;
    for (n, &p) in pops.iter().enumerate() {
        if n > 0 {
            ln_pmf = ln_pmf + ln_mu - T::from_usize_lossy(n).ln();
        }
        let q = if mean > T::zero() {
            ln_pmf.exp()
        } else if n == 0 {
            T::one()
        } else {
            T::zero()
        };
        covered = covered + q;
        l1 = l1 + (p - q).abs();
    }
    let tail = (T::one() - covered).max(T::zero());
    PoissonFit {
        tv_distance: (l1 + tail) / T::lit(2.0),
        mean,
    }
}

pub fn poisson_distance(field: &FieldState) -> Result<PoissonFit<f64>> {
    Ok(poisson_tv(field.as_diagonal()?))
}
