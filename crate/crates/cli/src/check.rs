//! Desk-scale invariant and oracle suite behind `qbatt check`.

use qbatt::engines::{
    collide_diagonal, collide_unitary_oracle, collision_window, product_state, run_classical_corr, run_entangled,
    run_uncorrelated, Scenario, Trajectory, MAX_EN_ATOMS,
};
use qbatt::model::{build_h_eff, excitation_difference, thermal_atom, thermal_field};
use qbatt::observables::{ergotropy_entropic, ergotropy_field_formula, ergotropy_passive};
use qbatt::qla::{eigh, partial_trace, tensor, Density};
use qbatt::{ComplexMatrix, FieldState, ModelParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunPoint;
use crate::CliError;

pub struct CheckRow {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn row(name: &'static str, worst: f64, tol: f64) -> CheckRow {
    CheckRow {
        name,
        passed: worst <= tol,
        detail: format!("max defect {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn ginibre(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut h = (&g + &g.adjoint()).scale_real(0.5);
    h.hermitize();
    h
}

fn density(dim: usize, rng: &mut ChaCha8Rng) -> Result<Density<f64>, qbatt::Error> {
    let g = ginibre(dim, rng);
    let mut m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    m.hermitize();
    Density::new(m)
}

fn engine(point: &RunPoint) -> impl Fn(qbatt::Error) -> CliError + '_ {
    move |e| CliError::Run {
        point: point.to_string(),
        source: e,
    }
}

fn linear_algebra(rng: &mut ChaCha8Rng) -> Result<Vec<CheckRow>, qbatt::Error> {
    let mut recon = 0.0f64;
    let mut trace = 0.0f64;
    for _ in 0..20 {
        let dim = rng.gen_range(1..=12);
        let h = hermitian(dim, rng);
        recon = recon.max((&eigh(&h)?.reconstruct() - &h).max_abs());
        let n = rng.gen_range(1..=16);
        let (a, b) = (density(2, rng)?, density(n, rng)?);
        let joint = Density::new(tensor(a.matrix(), b.matrix())?)?;
        trace = trace.max((partial_trace(&joint, &[2, n], 0)?.matrix() - a.matrix()).max_abs());
    }
    Ok(vec![
        row("eigh reconstruction", recon, 1e-9),
        row("partial trace of tensor product", trace, 1e-12),
    ])
}

fn model_checks(p: &ModelParams) -> Result<Vec<CheckRow>, qbatt::Error> {
    let commutator = build_h_eff(p).commutator(&excitation_difference(p.n_max())).max_abs();
    let atom = thermal_atom(p)?;
    let field = thermal_field(p)?;
    let norm = (atom.total() - 1.0)
        .abs()
        .max((field.populations().iter().sum::<f64>() - 1.0).abs());
    Ok(vec![
        row("resonance conditions", p.resonance_defect(), 1e-12),
        row("H_eff conserves excitation difference", commutator, 1e-12),
        row("thermal states normalized", norm, 1e-12),
    ])
}

fn oracle(p: &ModelParams, rng: &mut ChaCha8Rng) -> Result<CheckRow, qbatt::Error> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let q = p.with_n_max(12)?.with_t_bar(rng.gen_range(0.005..0.4))?;
        let atom = thermal_atom(&q)?;
        let field = thermal_field(&q)?;
        let pops = field.as_diagonal()?.to_vec();
        let dtau = rng.gen_range(0.0..1.0) * collision_window(&pops, &q);
        let joint = collide_unitary_oracle(&product_state(&atom, &pops)?, dtau, &q)?.populations();
        let (fast, _) = collide_diagonal(&field, &atom, dtau, &q)?;
        let d = q.fock_dim();
        for (n, x) in fast.populations().iter().enumerate() {
            let reference = (atom.p_g + atom.p_e) * (joint[n] + joint[d + n]) + atom.p_m * pops[n];
            worst = worst.max((x - reference).abs());
        }
    }
    Ok(row("population update matches unitary oracle", worst, 1e-10))
}

fn ledger(runs: &[Trajectory]) -> Vec<CheckRow> {
    let mut exchange = 0.0f64;
    let mut split = 0.0f64;
    let mut norm = 0.0f64;
    let mut cutoff = 0.0f64;
    for t in runs {
        let (w_eg, w_q) = (t.params.omega_eg(), t.params.omega_q());
        for r in &t.records {
            exchange = exchange.max((r.delta_n - r.delta_sigma_ee).abs());
            split = split.max((r.du_atom / w_eg - r.du_field / w_q).abs());
            norm = norm.max((r.field.populations().iter().sum::<f64>() - 1.0).abs());
            cutoff = cutoff.max(r.field.top_bin());
        }
    }
    vec![
        row("excitation exchange per collision", exchange, 1e-9),
        row("energy ledger per collision", split, 1e-9),
        row("field populations normalized", norm, 1e-10),
        CheckRow {
            name: "Fock cutoff respected",
            passed: cutoff < 1e-9,
            detail: format!("max top-bin population {cutoff:.3e}"),
        },
    ]
}

fn equivalence(en: &Trajectory, cc: &Trajectory) -> CheckRow {
    let worst = en
        .final_field()
        .populations()
        .iter()
        .zip(cc.final_field().populations())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    row("EN field diagonal equals CC field", worst, 1e-6)
}

fn ergotropy(rng: &mut ChaCha8Rng, field: &FieldState, omega_q: f64) -> Result<Vec<CheckRow>, qbatt::Error> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=12);
        let rho = density(dim, rng)?;
        let h = hermitian(dim, rng);
        let a = ergotropy_passive(&rho, &h)?.ergotropy;
        let b = ergotropy_entropic(&rho, rng.gen_range(0.2..2.0), &h)?.ergotropy;
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
    }
    let n_max = field.n_max();
    let h = qbatt::model::number_operator(n_max).scale_real(omega_q);
    let a = ergotropy_field_formula(field, omega_q)?.ergotropy;
    let b = ergotropy_passive(&field.to_density(), &h)?.ergotropy;
    Ok(vec![
        row("passive and entropic ergotropy agree", worst, 1e-9),
        row("field ergotropy formula", (a - b).abs() / a.abs().max(1e-3), 1e-9),
    ])
}

/// Runs the suite at `point`; engine failures abort with their own error.
pub fn run_checks(point: &RunPoint, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = &point.params;
    let err = engine(point);
    let mut rows = linear_algebra(&mut rng).map_err(&err)?;
    rows.extend(model_checks(p).map_err(&err)?);
    rows.push(oracle(p, &mut rng).map_err(&err)?);

    let nc = run_uncorrelated(point.k, p).map_err(&err)?;
    let cc = run_classical_corr(point.k, p).map_err(&err)?;
    let mut runs = vec![nc, cc];
    if point.k <= MAX_EN_ATOMS {
        let en_point = RunPoint {
            scenario: Scenario::Entangled,
            ..point.clone()
        };
        let en = run_entangled(point.k, p).map_err(engine(&en_point))?;
        rows.push(equivalence(&en, &runs[1]));
        runs.push(en);
    }
    rows.extend(ledger(&runs));
    rows.extend(ergotropy(&mut rng, runs[1].final_field(), p.omega_q()).map_err(&err)?);
    Ok(rows)
}
