use super::diagonal::{collide_populations, GainProfile};
use super::{check_chain_length, collision_window, CollisionRecord, Scenario, Trajectory};
use crate::field::{mean_occupation, AtomPopulations, FieldState};
use crate::model::{thermal_atom, thermal_field, ModelParams};
use crate::observables::ergotropy_field_formula;
use crate::optimize::CollisionTimeOptimizer;
use crate::Result;

struct Branch {
    weight: f64,
    atom: AtomPopulations,
    pops: Vec<f64>,
}

fn mixture(branches: &[Branch], inert: f64, thermal: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = thermal.iter().map(|x| inert * x).collect();
    for b in branches {
        for (o, x) in out.iter_mut().zip(&b.pops) {
            *o += b.weight * x;
        }
    }
    out
}

/// Charges the field with the chain `p_g |g…g⟩⟨g…g| + p_e |e…e⟩⟨e…e|`
/// (plus the thermal weight of the idle level `m`, which never couples).
///
/// Each branch evolves independently; the collision time maximises the
/// branch-averaged gain.
pub fn run_classical_corr(k: usize, p: &ModelParams) -> Result<Trajectory> {
    check_chain_length(k)?;
    let atom = thermal_atom(p)?;
    let initial_field = thermal_field(p)?;
    let thermal = initial_field.as_diagonal()?.to_vec();
    let mut branches = vec![
        Branch {
            weight: atom.p_g,
            atom: AtomPopulations::GROUND,
            pops: thermal.clone(),
        },
        Branch {
            weight: atom.p_e,
            atom: AtomPopulations::EXCITED,
            pops: thermal.clone(),
        },
    ];
    let optimizer = CollisionTimeOptimizer::default();
    let mut records = Vec::with_capacity(k);
    let mut current = mixture(&branches, atom.p_m, &thermal);

    for step in 1..=k {
        let mut profile = GainProfile::default();
        for b in &branches {
            profile.add_scaled(b.weight, &GainProfile::new(&b.pops, &b.atom, p));
        }
        let best = optimizer.maximize(|t| profile.eval(t), collision_window(&current, p));

        let mut atom_after = AtomPopulations {
            p_g: 0.0,
            p_e: 0.0,
            p_m: atom.p_m,
        };
        let mut delta_sigma_ee = 0.0;
        for b in branches.iter_mut() {
            let (next, a) = collide_populations(&b.pops, &b.atom, best.dtau, p);
            delta_sigma_ee += b.weight * (a.p_e - b.atom.p_e);
            atom_after.p_g += b.weight * a.p_g;
            atom_after.p_e += b.weight * a.p_e;
            b.pops = next;
        }
        let next = mixture(&branches, atom.p_m, &thermal);
        let field = FieldState::Diagonal(next);
        field.check_cutoff("classically correlated collision")?;
        let next = field.as_diagonal()?;
        let delta_n = mean_occupation(next) - mean_occupation(&current);

        records.push(CollisionRecord {
            k: step,
            dtau: best.dtau,
            du_atom: p.omega_eg() * delta_sigma_ee,
            du_field: p.omega_q() * delta_n,
            delta_n,
            delta_sigma_ee,
            ergotropy_field: ergotropy_field_formula(&field, p.omega_q())?.ergotropy,
            atom_final: atom_after,
            stagnated: best.stagnated,
            field: field.clone(),
        });
        current = next.to_vec();
    }

    Ok(Trajectory {
        scenario: Scenario::ClassicallyCorrelated,
        params: *p,
        initial_field,
        records,
    })
}
