use crate::field::AtomPopulations;
use crate::model::{build_h_eff, ModelParams};
use crate::qla::{eigh, tensor, Density};
use crate::{ComplexMatrix, DensityMatrix, Error, Result};

/// `diag(p_g, p_e) ⊗ diag(field)` renormalised to the g–e subspace.
pub fn product_state(atom: &AtomPopulations, field: &[f64]) -> Result<DensityMatrix> {
    let (p_g, p_e) = atom.two_level();
    let rho = tensor(
        &ComplexMatrix::from_real_diagonal(&[p_g, p_e]),
        &ComplexMatrix::from_real_diagonal(field),
    )?;
    Density::new(rho)
}

/// Reference collision by dense propagation: `U ρ U†` with
/// `U = exp(−i H_eff Δτ)` on the (g, e) ⊗ Fock space.
pub fn collide_unitary_oracle(joint: &DensityMatrix, dtau: f64, p: &ModelParams) -> Result<DensityMatrix> {
    let h = build_h_eff(p);
    if joint.dim() != h.rows() {
        return Err(Error::Validation(format!(
            "joint state has dimension {}, expected {}",
            joint.dim(),
            h.rows()
        )));
    }
    let u = eigh(&h)?.propagator(dtau);
    Ok(joint.conjugate_by(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::collide_diagonal;
    use crate::field::FieldState;
    use crate::model::{derive_params, RawParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_population_update() {
        let p = derive_params(&RawParams::reference(0.01, 12)).unwrap();
        let d = p.fock_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut field: Vec<f64> = (0..d).map(|n| if n + 3 < d { rng.gen::<f64>() } else { 0.0 }).collect();
            let z: f64 = field.iter().sum();
            field.iter_mut().for_each(|x| *x /= z);
            let pg = rng.gen_range(0.2..1.0);
            let atom = AtomPopulations::new(pg, 1.0 - pg, 0.0).unwrap();
            let dtau = rng.gen_range(0.0..5e10);

            let rho = collide_unitary_oracle(&product_state(&atom, &field).unwrap(), dtau, &p).unwrap();
            let pops = rho.populations();
            let oracle: Vec<f64> = (0..d).map(|n| pops[n] + pops[d + n]).collect();
            let (fast, _) = collide_diagonal(&FieldState::Diagonal(field), &atom, dtau, &p).unwrap();
            for (x, y) in oracle.iter().zip(fast.populations()) {
                assert!((x - y).abs() < 1e-10, "{x} vs {y}");
            }
        }
    }
}
