//! Atom and field state containers shared by the model, engines and
//! observables.

use crate::qla::Density;
use crate::{DensityMatrix, Error, Result};

/// Population allowed in the top Fock bin after a collision.
pub const CUTOFF_GUARD: f64 = 1e-9;

/// Occupations of the three atomic levels g, e, m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPopulations {
    pub p_g: f64,
    pub p_e: f64,
    pub p_m: f64,
}

impl AtomPopulations {
    pub const GROUND: Self = Self {
        p_g: 1.0,
        p_e: 0.0,
        p_m: 0.0,
    };
    pub const EXCITED: Self = Self {
        p_g: 0.0,
        p_e: 1.0,
        p_m: 0.0,
    };

    pub fn new(p_g: f64, p_e: f64, p_m: f64) -> Result<Self> {
        let s = Self { p_g, p_e, p_m };
        if [p_g, p_e, p_m].iter().any(|p| !(*p >= -1e-12 && *p <= 1.0 + 1e-12)) {
            return Err(Error::Validation(format!("atom populations out of range: {s:?}")));
        }
        if (s.total() - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("atom populations sum to {}", s.total())));
        }
        Ok(s)
    }

    pub fn total(&self) -> f64 {
        self.p_g + self.p_e + self.p_m
    }

    /// `(p_g, p_e)` renormalised to the g–e subspace.
    pub fn two_level(&self) -> (f64, f64) {
        let z = self.p_g + self.p_e;
        (self.p_g / z, self.p_e / z)
    }
}

/// State of the bosonic mode on the truncated Fock space `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldState {
    /// Fock populations; coherences are zero.
    Diagonal(Vec<f64>),
    Density(DensityMatrix),
}

impl FieldState {
    pub fn diagonal(populations: Vec<f64>) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::Validation("field needs at least one Fock level".into()));
        }
        if let Some(p) = populations.iter().find(|p| !(**p >= -1e-12 && **p <= 1.0 + 1e-12)) {
            return Err(Error::Validation(format!("Fock population {p} out of range")));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("Fock populations sum to {total}")));
        }
        Ok(Self::Diagonal(populations))
    }

    pub fn fock(n: usize, n_max: usize) -> Self {
        assert!(n <= n_max, "Fock state beyond cutoff");
        let mut p = vec![0.0; n_max + 1];
        p[n] = 1.0;
        Self::Diagonal(p)
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max)
    }

    pub fn n_max(&self) -> usize {
        match self {
            Self::Diagonal(p) => p.len() - 1,
            Self::Density(rho) => rho.dim() - 1,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Self::Diagonal(_))
    }

    pub fn as_diagonal(&self) -> Result<&[f64]> {
        match self {
            Self::Diagonal(p) => Ok(p),
            Self::Density(_) => Err(Error::Representation(
                "operation needs Fock populations, got a full density matrix",
            )),
        }
    }

    pub fn populations(&self) -> Vec<f64> {
        match self {
            Self::Diagonal(p) => p.clone(),
            Self::Density(rho) => rho.populations(),
        }
    }

    /// `⟨b†b⟩`.
    pub fn mean_occupation(&self) -> f64 {
        mean_occupation(&self.populations())
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Diagonal(p) => Density::new_unchecked(crate::ComplexMatrix::from_real_diagonal(p)),
            Self::Density(rho) => rho.clone(),
        }
    }

    pub fn top_bin(&self) -> f64 {
        *self.populations().last().expect("non-empty field")
    }

    /// Fails if the top Fock level holds [`CUTOFF_GUARD`] or more.
    pub fn check_cutoff(&self, context: &'static str) -> Result<()> {
        let top = self.top_bin();
        if top >= CUTOFF_GUARD {
            return Err(Error::Cutoff {
                n_max: self.n_max(),
                mass: top,
                context,
            });
        }
        Ok(())
    }
}

pub(crate) fn mean_occupation(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(n, &x)| n as f64 * x).sum()
}
