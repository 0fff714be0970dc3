use crate::field::{AtomPopulations, FieldState};
use crate::model::{flip_probability, rabi_frequency, selectivity, ModelParams};
use crate::Result;

/// `S(Δτ) = Σ_n c_n sin²(Ω_n Δτ / 2)` with `c_n = A_n [p_g p_n − p_e p_{n+1}]`,
/// precomputed for repeated evaluation.
#[derive(Debug, Clone, Default)]
pub struct GainProfile {
    terms: Vec<(f64, f64)>,
}

impl GainProfile {
    pub fn new(pops: &[f64], atom: &AtomPopulations, p: &ModelParams) -> Self {
        let n_max = pops.len() - 1;
        let terms = (0..n_max)
            .filter_map(|n| {
                let weight = atom.p_g * pops[n] - atom.p_e * pops[n + 1];
                (weight != 0.0).then(|| (selectivity(n, p) * weight, rabi_frequency(n, p)))
            })
            .collect();
        Self { terms }
    }

    /// Adds `weight * other`.
    pub fn add_scaled(&mut self, weight: f64, other: &GainProfile) {
        self.terms.extend(other.terms.iter().map(|&(c, om)| (weight * c, om)));
    }

    pub fn eval(&self, dtau: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, om)| {
                let s = (0.5 * om * dtau).sin();
                c * s * s
            })
            .sum()
    }
}

/// Excitation transferred to the field by one collision of a product
/// atom–field state.
pub fn s_function(field: &FieldState, atom: &AtomPopulations, dtau: f64, p: &ModelParams) -> Result<f64> {
    let pops = field.as_diagonal()?;
    Ok(GainProfile::new(pops, atom, p).eval(dtau))
}

/// Population update for one collision; the top doublet is absent.
pub(crate) fn collide_populations(
    pops: &[f64],
    atom: &AtomPopulations,
    dtau: f64,
    p: &ModelParams,
) -> (Vec<f64>, AtomPopulations) {
    let n_max = pops.len() - 1;
    let flip: Vec<f64> = (0..=n_max)
        .map(|n| if n < n_max { flip_probability(n, dtau, p) } else { 0.0 })
        .collect();
    let AtomPopulations { p_g, p_e, p_m } = *atom;
    let mut out = vec![0.0; n_max + 1];
    let mut transfer = 0.0;
    for n in 0..=n_max {
        let up = pops.get(n + 1).copied().unwrap_or(0.0);
        let (below, flip_below) = if n > 0 { (pops[n - 1], flip[n - 1]) } else { (0.0, 0.0) };
        out[n] = p_g * pops[n] * (1.0 - flip[n])
            + p_e * up * flip[n]
            + p_e * pops[n] * (1.0 - flip_below)
            + p_g * below * flip_below
            + p_m * pops[n];
        transfer += flip[n] * (p_g * pops[n] - p_e * up);
    }
    let atom_after = AtomPopulations {
        p_g: p_g - transfer,
        p_e: p_e + transfer,
        p_m,
    };
    (out, atom_after)
}

/// One collision of a diagonal field with a fresh atom (product input).
pub fn collide_diagonal(
    field: &FieldState,
    atom: &AtomPopulations,
    dtau: f64,
    p: &ModelParams,
) -> Result<(FieldState, AtomPopulations)> {
    let pops = field.as_diagonal()?;
    let (out, atom_after) = collide_populations(pops, atom, dtau, p);
    let out = FieldState::Diagonal(out);
    out.check_cutoff("collide_diagonal")?;
    Ok((out, atom_after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_params, thermal_atom, RawParams};
    use crate::Error;
    use std::f64::consts::PI;

    fn params(t_bar: f64) -> ModelParams {
        derive_params(&RawParams::reference(t_bar, 12)).unwrap()
    }

    #[test]
    fn s_function_examples() {
        let p = params(0.01);
        let vac = FieldState::vacuum(12);
        let om0 = rabi_frequency(0, &p);
        let s = s_function(&vac, &AtomPopulations::GROUND, PI / om0, &p).unwrap();
        assert!((s - selectivity(0, &p)).abs() < 1e-15);
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(s_function(&vac, &AtomPopulations::GROUND, 0.0, &p).unwrap(), 0.0);

        // Thermal atom on the vacuum: single term p_g A_0 sin²(Ω_0 t/2).
        let atom = thermal_atom(&p).unwrap();
        let grid_max = (1..=20_000)
            .map(|j| s_function(&vac, &atom, 2.0 * PI / om0 * j as f64 / 20_000.0, &p).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((grid_max - atom.p_g * selectivity(0, &p)).abs() < 1e-12);
        assert!((s_function(&vac, &atom, PI / om0, &p).unwrap() - grid_max).abs() < 1e-15);
    }

    #[test]
    fn s_function_needs_diagonal() {
        let p = params(0.01);
        let dense = FieldState::Density(FieldState::vacuum(12).to_density());
        assert!(matches!(
            s_function(&dense, &AtomPopulations::GROUND, 1.0, &p),
            Err(Error::Representation(_))
        ));
    }

    #[test]
    fn full_flip_of_ground_vacuum() {
        let p = params(0.01);
        let dtau = PI / rabi_frequency(0, &p);
        let (f, a) = collide_diagonal(&FieldState::vacuum(12), &AtomPopulations::GROUND, dtau, &p).unwrap();
        let pops = f.populations();
        assert!((pops[1] - 1.0).abs() < 1e-12 && pops[0].abs() < 1e-12);
        assert!((a.p_e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_time_is_identity() {
        let p = params(0.01);
        let pops = vec![0.3, 0.25, 0.2, 0.15, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let atom = AtomPopulations::new(0.6, 0.3, 0.1).unwrap();
        let (f, a) = collide_diagonal(&FieldState::Diagonal(pops.clone()), &atom, 0.0, &p).unwrap();
        assert_eq!(a, atom);
        for (x, y) in f.populations().iter().zip(&pops) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn cutoff_guard_trips() {
        let p = derive_params(&RawParams::reference(0.01, 2)).unwrap();
        let om1 = rabi_frequency(1, &p);
        let err = collide_diagonal(&FieldState::fock(1, 2), &AtomPopulations::GROUND, PI / om1, &p);
        assert!(matches!(err, Err(Error::Cutoff { n_max: 2, .. })));
    }

    #[test]
    fn excitation_is_exchanged_one_for_one() {
        let p = params(0.05);
        let pops = vec![0.05, 0.1, 0.2, 0.3, 0.2, 0.1, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let f = FieldState::Diagonal(pops);
        let atom = thermal_atom(&p).unwrap();
        for dtau in [1e9, 7.3e9, 2.2e10] {
            let (g, a) = collide_diagonal(&f, &atom, dtau, &p).unwrap();
            let dn = g.mean_occupation() - f.mean_occupation();
            let s = s_function(&f, &atom, dtau, &p).unwrap();
            assert!((dn - s).abs() < 1e-12);
            assert!((a.p_e - atom.p_e - s).abs() < 1e-12);
            assert!((g.populations().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
