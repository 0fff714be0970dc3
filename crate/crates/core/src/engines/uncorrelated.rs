use super::diagonal::{collide_populations, GainProfile};
use super::{check_chain_length, collision_window, CollisionRecord, Scenario, Trajectory};
use crate::field::{mean_occupation, FieldState};
use crate::model::{thermal_atom, thermal_field, ModelParams};
use crate::observables::ergotropy_field_formula;
use crate::optimize::CollisionTimeOptimizer;
use crate::Result;

/// Charges the field with `k` independent thermal atoms, re-optimising the
/// interaction time before every collision.
pub fn run_uncorrelated(k: usize, p: &ModelParams) -> Result<Trajectory> {
    check_chain_length(k)?;
    let atom = thermal_atom(p)?;
    let initial_field = thermal_field(p)?;
    let mut pops = initial_field.as_diagonal()?.to_vec();
    let optimizer = CollisionTimeOptimizer::default();
    let mut records = Vec::with_capacity(k);

    for step in 1..=k {
        let profile = GainProfile::new(&pops, &atom, p);
        let best = optimizer.maximize(|t| profile.eval(t), collision_window(&pops, p));
        let s = profile.eval(best.dtau);
        let (next, atom_after) = collide_populations(&pops, &atom, best.dtau, p);
        let field = FieldState::Diagonal(next);
        field.check_cutoff("uncorrelated collision")?;
        let next = field.as_diagonal()?;

        records.push(CollisionRecord {
            k: step,
            dtau: best.dtau,
            du_atom: p.omega_eg() * s,
            du_field: p.omega_q() * s,
            delta_n: mean_occupation(next) - mean_occupation(&pops),
            delta_sigma_ee: atom_after.p_e - atom.p_e,
            ergotropy_field: ergotropy_field_formula(&field, p.omega_q())?.ergotropy,
            atom_final: atom_after,
            stagnated: best.stagnated,
            field: field.clone(),
        });
        pops = field.as_diagonal()?.to_vec();
    }

    Ok(Trajectory {
        scenario: Scenario::Uncorrelated,
        params: *p,
        initial_field,
        records,
    })
}
