use num_complex::Complex;

use super::{check_chain_length, collision_window, CollisionRecord, Scenario, Trajectory};
use crate::field::{mean_occupation, AtomPopulations, FieldState};
use crate::model::{build_h_eff, number_operator, thermal_atom, thermal_field, ModelParams};
use crate::observables::ergotropy_field_formula;
use crate::optimize::CollisionTimeOptimizer;
use crate::qla::{eigh, reduce_pure, tensor, Density, Eigh};
use crate::{ComplexMatrix, Error, Result, StateVector, C64};

/// Largest chain the entangled engine will hold.
pub const MAX_EN_ATOMS: usize = 7;
/// Largest joint dimension `2^K (n_max + 1)`.
pub const MAX_EN_DIM: usize = 8192;
/// Thermal Fock levels below this weight are not given a branch.
pub const BRANCH_FLOOR: f64 = 1e-12;
/// Allowed drift of any branch norm.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-8;

/// Chain of `K` two-level atoms and the field as an ensemble of pure
/// states, one per initial Fock level.
///
/// Amplitudes are ordered atom 0 slowest, Fock index fastest.
#[derive(Debug, Clone)]
pub struct JointState {
    atoms: usize,
    fock_dim: usize,
    branches: Vec<(f64, StateVector)>,
}

impl JointState {
    /// `(√p_g |g…g⟩ + √p_e |e…e⟩) ⊗ |n⟩` with weight `field[n]`.
    pub fn ghz(atoms: usize, p_g: f64, p_e: f64, field: &[f64]) -> Result<Self> {
        check_capacity(atoms, field.len())?;
        let d = field.len();
        let dim = (1usize << atoms) * d;
        let top = (1usize << atoms) - 1;
        let weight_total: f64 = field.iter().filter(|&&w| w >= BRANCH_FLOOR).sum();
        let branches = field
            .iter()
            .enumerate()
            .filter(|(_, &w)| w >= BRANCH_FLOOR)
            .map(|(n, &w)| {
                let mut amps = vec![C64::new(0.0, 0.0); dim];
                amps[n] = C64::new(p_g.sqrt(), 0.0);
                amps[top * d + n] += C64::new(p_e.sqrt(), 0.0);
                StateVector::normalized(amps).map(|s| (w / weight_total, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            atoms,
            fock_dim: d,
            branches,
        })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn dim(&self) -> usize {
        (1 << self.atoms) * self.fock_dim
    }

    pub fn branches(&self) -> &[(f64, StateVector)] {
        &self.branches
    }

    fn dims(&self) -> Vec<usize> {
        let mut dims = vec![2; self.atoms];
        dims.push(self.fock_dim);
        dims
    }

    /// Reduced state of the listed subsystems (atoms `0..K`, field `K`).
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        let dims = self.dims();
        let mut acc: Option<ComplexMatrix> = None;
        for (w, psi) in &self.branches {
            let r = reduce_pure(psi, &dims, keep)?.scale_real(*w);
            acc = Some(match acc {
                Some(a) => &a + &r,
                None => r,
            });
        }
        acc.ok_or(Error::Validation("joint state has no branches".into()))
    }

    pub fn reduced_field(&self) -> Result<ComplexMatrix> {
        self.reduced(&[self.atoms])
    }

    /// Applies `u` to atom `k` and the field.
    pub fn apply_collision(&mut self, k: usize, u: &ComplexMatrix) {
        let d = self.fock_dim;
        let stride = (1usize << (self.atoms - 1 - k)) * d;
        let (outer, inner) = (1usize << k, 1usize << (self.atoms - 1 - k));
        let mut local = vec![C64::new(0.0, 0.0); 2 * d];
        for (_, psi) in self.branches.iter_mut() {
            let amps = psi.amplitudes_mut();
            for hi in 0..outer {
                for lo in 0..inner {
                    let base = (hi * 2 * inner + lo) * d;
                    for a in 0..2 {
                        local[a * d..(a + 1) * d].copy_from_slice(&amps[base + a * stride..base + a * stride + d]);
                    }
                    let out = u.matvec(&local);
                    for a in 0..2 {
                        amps[base + a * stride..base + a * stride + d].copy_from_slice(&out[a * d..(a + 1) * d]);
                    }
                }
            }
        }
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.branches
            .iter()
            .map(|(_, psi)| (psi.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_capacity(atoms: usize, fock_dim: usize) -> Result<()> {
    if atoms > MAX_EN_ATOMS {
        return Err(Error::Capacity {
            what: "entangled chain length",
            requested: atoms,
            limit: MAX_EN_ATOMS,
        });
    }
    let dim = (1usize << atoms) * fock_dim;
    if dim > MAX_EN_DIM {
        return Err(Error::Capacity {
            what: "entangled joint dimension",
            requested: dim,
            limit: MAX_EN_DIM,
        });
    }
    Ok(())
}

/// `t ↦ Tr[U(t) ρ U(t)† O]` for `U(t) = e^{−iHt}`, expanded in the
/// eigenbasis of `H` as `Σ_ij ρ'_ij O'_ji e^{−i(λ_i − λ_j)t}`.
#[derive(Debug, Clone)]
pub struct SpectralGain {
    constant: f64,
    terms: Vec<(C64, f64)>,
}

impl SpectralGain {
    pub fn new(h: &Eigh<f64>, rho: &ComplexMatrix, obs: &ComplexMatrix) -> Self {
        let v = &h.vectors;
        let vd = v.adjoint();
        let rho_p = vd.matmul(rho).matmul(v);
        let obs_p = vd.matmul(obs).matmul(v);
        let dim = h.dim();
        let mut constant = 0.0;
        let mut terms = Vec::new();
        for i in 0..dim {
            constant += (rho_p[(i, i)] * obs_p[(i, i)]).re;
            for j in i + 1..dim {
                let m = rho_p[(i, j)] * obs_p[(j, i)];
                if m.norm() > 1e-18 {
                    terms.push((m, h.values[i] - h.values[j]));
                }
            }
        }
        Self { constant, terms }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.constant
            + 2.0
                * self
                    .terms
                    .iter()
                    .map(|&(m, w)| (m * Complex::from_polar(1.0, -w * t)).re)
                    .sum::<f64>()
    }
}

/// Charges the field with the chain `√p_g |g…g⟩ + √p_e |e…e⟩`; the thermal
/// weight of `m` forms an idle branch that leaves the field thermal.
///
/// Collision `k` acts on atom `k−1` and the field; its time maximises the
/// exact mean-photon gain of the joint state.
pub fn run_entangled(k: usize, p: &ModelParams) -> Result<Trajectory> {
    check_chain_length(k)?;
    check_capacity(k, p.fock_dim())?;
    let atom = thermal_atom(p)?;
    let (p_g, p_e) = atom.two_level();
    let coherent = atom.p_g + atom.p_e;
    let initial_field = thermal_field(p)?;
    let thermal = initial_field.as_diagonal()?.to_vec();
    let thermal_matrix = ComplexMatrix::from_real_diagonal(&thermal).scale_real(atom.p_m);

    let mut joint = JointState::ghz(k, p_g, p_e, &thermal)?;
    let h = eigh(&build_h_eff(p))?;
    let photons = tensor(&ComplexMatrix::identity(2), &number_operator(p.n_max()))?;
    let optimizer = CollisionTimeOptimizer::default();
    let field_of =
        |j: &JointState| -> Result<ComplexMatrix> { Ok(&j.reduced_field()?.scale_real(coherent) + &thermal_matrix) };

    let mut current = field_of(&joint)?;
    let mut records = Vec::with_capacity(k);
    for step in 1..=k {
        let target = step - 1;
        let local = joint.reduced(&[target, k])?;
        let gain = SpectralGain::new(&h, &local, &photons);
        let baseline = gain.eval(0.0);
        let best = optimizer.maximize(
            |t| coherent * (gain.eval(t) - baseline),
            collision_window(&current.diagonal_real(), p),
        );
        let excited_before = excited_population(&local, p.fock_dim());

        joint.apply_collision(target, &h.propagator(best.dtau));
        let drift = joint.max_norm_drift();
        if drift > NORM_DRIFT_TOLERANCE {
            return Err(Error::Numerical {
                message: format!("branch norm drifted by {drift:e}"),
                iterations: step,
            });
        }

        let mut next = field_of(&joint)?;
        next.hermitize();
        let field = FieldState::Density(Density::new(next.clone())?);
        field.check_cutoff("entangled collision")?;
        let excited_after = excited_population(&joint.reduced(&[target])?, 1);
        let delta_n = mean_occupation(&next.diagonal_real()) - mean_occupation(&current.diagonal_real());
        let delta_sigma_ee = coherent * (excited_after - excited_before);

        records.push(CollisionRecord {
            k: step,
            dtau: best.dtau,
            du_atom: p.omega_eg() * delta_sigma_ee,
            du_field: p.omega_q() * delta_n,
            delta_n,
            delta_sigma_ee,
            ergotropy_field: ergotropy_field_formula(&field, p.omega_q())?.ergotropy,
            atom_final: AtomPopulations {
                p_g: coherent * (1.0 - excited_after),
                p_e: coherent * excited_after,
                p_m: atom.p_m,
            },
            stagnated: best.stagnated,
            field,
        });
        current = next;
    }

    Ok(Trajectory {
        scenario: Scenario::Entangled,
        params: *p,
        initial_field,
        records,
    })
}

/// Excited-state weight of an (atom ⊗ block) matrix with atom slowest.
fn excited_population(rho: &ComplexMatrix, block: usize) -> f64 {
    (block..2 * block).map(|i| rho[(i, i)].re).sum()
}
