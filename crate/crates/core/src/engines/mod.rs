//! Charging protocols.
//!
//! Every collision couples one atom of the stream to the field under the
//! effective Hamiltonian for a time chosen by
//! [`CollisionTimeOptimizer`](crate::optimize::CollisionTimeOptimizer) to
//! maximise the field's energy gain. Three stream preparations are covered:
//! uncorrelated thermal atoms, the classically correlated mixture of "all g"
//! and "all e", and the GHZ-like superposition of the two.

mod correlated;
mod diagonal;
mod entangled;
mod oracle;
mod uncorrelated;

pub use correlated::run_classical_corr;
pub use diagonal::{collide_diagonal, s_function, GainProfile};
pub use entangled::{run_entangled, JointState, SpectralGain, MAX_EN_ATOMS, MAX_EN_DIM};
pub use oracle::{collide_unitary_oracle, product_state};
pub use uncorrelated::run_uncorrelated;

use std::f64::consts::TAU;
use std::fmt;

use crate::field::{AtomPopulations, FieldState};
use crate::model::{rabi_frequency, ModelParams};
use crate::{Error, Result};

/// A doublet takes part in the time window if either member holds this much.
pub const OCCUPIED_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Product of thermal atoms.
    Uncorrelated,
    /// `p_g |g…g⟩⟨g…g| + p_e |e…e⟩⟨e…e|`.
    ClassicallyCorrelated,
    /// `√p_g |g…g⟩ + √p_e |e…e⟩`.
    Entangled,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Self::Uncorrelated, Self::ClassicallyCorrelated, Self::Entangled];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Uncorrelated => "NC",
            Self::ClassicallyCorrelated => "CC",
            Self::Entangled => "EN",
        }
    }

    pub fn run(self, k: usize, p: &ModelParams) -> Result<Trajectory> {
        match self {
            Self::Uncorrelated => run_uncorrelated(k, p),
            Self::ClassicallyCorrelated => run_classical_corr(k, p),
            Self::Entangled => run_entangled(k, p),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Ledger entry for one collision. Energies in units of ħω_m, times in 1/ω_m.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionRecord {
    /// 1-based collision index.
    pub k: usize,
    pub dtau: f64,
    pub du_atom: f64,
    pub du_field: f64,
    /// Change of `⟨b†b⟩`.
    pub delta_n: f64,
    /// Change of the colliding atom's excited population.
    pub delta_sigma_ee: f64,
    /// Field state after the collision.
    pub field: FieldState,
    /// Colliding atom after the collision.
    pub atom_final: AtomPopulations,
    pub ergotropy_field: f64,
    pub stagnated: bool,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub scenario: Scenario,
    pub params: ModelParams,
    pub initial_field: FieldState,
    pub records: Vec<CollisionRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_field(&self) -> &FieldState {
        self.records.last().map(|r| &r.field).unwrap_or(&self.initial_field)
    }

    /// Running sum of the field energy gains.
    pub fn cumulative_field_energy(&self) -> Vec<f64> {
        self.records
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r.du_field;
                Some(*acc)
            })
            .collect()
    }

    /// Checks `ΔU_atom/ω_eg = ΔU_field/ω_q` and `Δ⟨n⟩ = Δ⟨σ_ee⟩` per collision.
    pub fn check_ledger(&self, tol: f64) -> Result<()> {
        let (w_eg, w_q) = (self.params.omega_eg(), self.params.omega_q());
        for r in &self.records {
            let split = (r.du_atom / w_eg - r.du_field / w_q).abs();
            let exchange = (r.delta_n - r.delta_sigma_ee).abs();
            if split > tol || exchange > tol {
                return Err(Error::Numerical {
                    message: format!(
                        "{} collision {}: energy split defect {split:e}, excitation defect {exchange:e}",
                        self.scenario, r.k
                    ),
                    iterations: r.k,
                });
            }
        }
        Ok(())
    }
}

/// `2π / Ω_min` over doublets `{|g,n⟩, |e,n+1⟩}` in which either Fock level
/// holds at least [`OCCUPIED_THRESHOLD`].
pub fn collision_window(pops: &[f64], p: &ModelParams) -> f64 {
    let n_max = pops.len() - 1;
    let slowest = (0..n_max)
        .filter(|&n| pops[n] >= OCCUPIED_THRESHOLD || pops[n + 1] >= OCCUPIED_THRESHOLD)
        .map(|n| rabi_frequency(n, p))
        .fold(f64::INFINITY, f64::min);
    let slowest = if slowest.is_finite() {
        slowest
    } else {
        rabi_frequency(0, p)
    };
    TAU / slowest
}

pub(crate) fn check_chain_length(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Validation("a charging run needs at least one collision".into()));
    }
    Ok(())
}
