//! Physical parameters, doublet quantities, thermal states and Hamiltonians.
//!
//! Internally ħ = 1 and ω_m = 1 (ω_g = 0). Basis ordering for joint
//! atom–field operators is atom-major: index `a * (n_max + 1) + n`, with
//! atomic levels ordered (g, e) for the effective two-level atom and
//! (g, e, m) for the full three-level atom.

use std::f64::consts::TAU;

use num_complex::Complex;

use crate::field::{AtomPopulations, FieldState};
use crate::{ComplexMatrix, Error, Result};

/// Smallest accepted ratio Δ / max(g_q, Ω_L).
pub const ADIABATIC_RATIO: f64 = 10.0;

/// Tail mass of the untruncated thermal field allowed beyond `n_max`.
pub const THERMAL_TAIL_TOLERANCE: f64 = 1e-12;

/// Stand-in for zero temperature.
pub const ZERO_TEMPERATURE: f64 = 1e-6;

/// Unnormalised inputs, in any consistent frequency unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    /// Upper (eliminated) level frequency; sets the unit.
    pub omega_m: f64,
    /// Field mode frequency.
    pub omega_q: f64,
    /// Ω_L / g_q.
    pub drive_ratio: f64,
    /// Detuning of both Raman legs.
    pub delta: f64,
    pub g_q: f64,
    /// k_B T / ħω_m.
    pub t_bar: f64,
    /// Stark-shift tuning parameter N.
    pub n_select: u32,
    /// Fock cutoff.
    pub n_max: usize,
}

impl RawParams {
    /// ω_q = 0.99 ω_m, Ω_L/g_q = 30, Δ/2π = 1 MHz, g_q = Δ/600, ω_m/2π = 1 THz.
    pub fn reference(t_bar: f64, n_max: usize) -> Self {
        let omega_m = TAU * 1e12;
        let delta = TAU * 1e6;
        Self {
            omega_m,
            omega_q: 0.99 * omega_m,
            drive_ratio: 30.0,
            delta,
            g_q: delta / 600.0,
            t_bar,
            n_select: 1,
            n_max,
        }
    }
}

/// Derived model parameters in units of ω_m. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega_q: f64,
    omega_e: f64,
    omega_l: f64,
    delta: f64,
    g_q: f64,
    drive: f64,
    r: f64,
    n_select: u32,
    t_bar: f64,
    n_max: usize,
}

/// Normalises and validates raw inputs.
///
/// ω_e and the drive frequency ω_L follow from the double Raman resonance
/// Δ = ω_m − ω_L = ω_m − ω_e − ω_q.
pub fn derive_params(raw: &RawParams) -> Result<ModelParams> {
    let checks = [
        ("omega_m", raw.omega_m),
        ("omega_q", raw.omega_q),
        ("drive_ratio", raw.drive_ratio),
        ("delta", raw.delta),
        ("g_q", raw.g_q),
        ("t_bar", raw.t_bar),
    ];
    for (name, v) in checks {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if raw.n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    let omega_q = raw.omega_q / raw.omega_m;
    let delta = raw.delta / raw.omega_m;
    let g_q = raw.g_q / raw.omega_m;
    let drive = raw.drive_ratio * g_q;
    let omega_e = 1.0 - omega_q - delta;
    if omega_e <= 0.0 {
        return Err(Error::Config(format!(
            "omega_e = omega_m - omega_q - delta = {omega_e:e} (units of omega_m) must be positive"
        )));
    }
    let strongest = g_q.max(drive);
    if delta < ADIABATIC_RATIO * strongest {
        return Err(Error::Config(format!(
            "adiabatic elimination needs delta >= {ADIABATIC_RATIO} * max(g_q, Omega_L); got delta = {delta:e}, max coupling = {strongest:e}"
        )));
    }
    Ok(ModelParams {
        omega_q,
        omega_e,
        omega_l: 1.0 - delta,
        delta,
        g_q,
        drive,
        r: 1.0 / raw.drive_ratio,
        n_select: raw.n_select,
        t_bar: raw.t_bar,
        n_max: raw.n_max,
    })
}

impl ModelParams {
    pub fn new(raw: &RawParams) -> Result<Self> {
        derive_params(raw)
    }

    pub fn omega_m(&self) -> f64 {
        1.0
    }
    pub fn omega_g(&self) -> f64 {
        0.0
    }
    pub fn omega_q(&self) -> f64 {
        self.omega_q
    }
    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }
    /// ω_eg = ω_e − ω_g.
    pub fn omega_eg(&self) -> f64 {
        self.omega_e
    }
    /// Classical drive frequency ω_L.
    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn g_q(&self) -> f64 {
        self.g_q
    }
    /// Classical drive coupling Ω_L.
    pub fn drive(&self) -> f64 {
        self.drive
    }
    /// r = g_q / Ω_L.
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn n_select(&self) -> u32 {
        self.n_select
    }
    /// χ = ω_e / ω_m.
    pub fn chi(&self) -> f64 {
        self.omega_e
    }
    pub fn t_bar(&self) -> f64 {
        self.t_bar
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    /// g_q Ω_L / Δ, the effective coupling unit.
    pub fn coupling_scale(&self) -> f64 {
        self.g_q * self.drive / self.delta
    }

    /// Δ_eg^N = (Ω_L² − g_q² N) / Δ.
    pub fn stark_correction(&self) -> f64 {
        (self.drive * self.drive - self.g_q * self.g_q * f64::from(self.n_select)) / self.delta
    }

    /// Largest violation of Δ = ω_m − ω_g − ω_L = ω_m − ω_e − ω_q.
    pub fn resonance_defect(&self) -> f64 {
        let a = (1.0 - self.omega_g() - self.omega_l - self.delta).abs();
        let b = (1.0 - self.omega_e - self.omega_q - self.delta).abs();
        a.max(b)
    }

    pub fn with_t_bar(&self, t_bar: f64) -> Result<Self> {
        if !(t_bar > 0.0 && t_bar.is_finite()) {
            return Err(Error::Config(format!("t_bar must be positive, got {t_bar}")));
        }
        Ok(Self { t_bar, ..*self })
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        Ok(Self { n_max, ..*self })
    }

    pub fn with_n_select(&self, n_select: u32) -> Self {
        Self { n_select, ..*self }
    }
}

/// Amplitude bound and Rabi frequency of the doublet {|g,n⟩, |e,n+1⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletQuantities {
    pub n: usize,
    pub selectivity: f64,
    pub rabi_frequency: f64,
}

pub fn doublet(n: usize, p: &ModelParams) -> DoubletQuantities {
    DoubletQuantities {
        n,
        selectivity: selectivity(n, p),
        rabi_frequency: rabi_frequency(n, p),
    }
}

fn detuning_index(n: usize, p: &ModelParams) -> f64 {
    (n as f64 + 1.0) - f64::from(p.n_select)
}

/// A_n = 1 / (1 + r² (n+1−N)² / (4(n+1))).
pub fn selectivity(n: usize, p: &ModelParams) -> f64 {
    let k = detuning_index(n, p);
    1.0 / (1.0 + p.r * p.r * k * k / (4.0 * (n as f64 + 1.0)))
}

/// Ω_n = (g_q Ω_L / Δ) √(r² (n+1−N)² + 4(n+1)).
pub fn rabi_frequency(n: usize, p: &ModelParams) -> f64 {
    let k = detuning_index(n, p);
    p.coupling_scale() * (p.r * p.r * k * k + 4.0 * (n as f64 + 1.0)).sqrt()
}

/// Probability that |g,n⟩ has flipped to |e,n+1⟩ after `dtau`.
pub fn flip_probability(n: usize, dtau: f64, p: &ModelParams) -> f64 {
    let s = (0.5 * rabi_frequency(n, p) * dtau).sin();
    selectivity(n, p) * s * s
}

/// Boltzmann occupations of levels (0, χ, 1) at temperature T̄.
pub fn thermal_atom(p: &ModelParams) -> Result<AtomPopulations> {
    if !(p.t_bar > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {}", p.t_bar)));
    }
    let w_e = (-p.chi() / p.t_bar).exp();
    let w_m = (-1.0 / p.t_bar).exp();
    let z = 1.0 + w_e + w_m;
    Ok(AtomPopulations {
        p_g: 1.0 / z,
        p_e: w_e / z,
        p_m: w_m / z,
    })
}

/// Thermal Fock populations `∝ exp(−n ω_q / T̄)` on `0..=n_max`.
///
/// Fails when the untruncated distribution would put
/// [`THERMAL_TAIL_TOLERANCE`] or more beyond the cutoff.
pub fn thermal_field(p: &ModelParams) -> Result<FieldState> {
    if !(p.t_bar > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {}", p.t_bar)));
    }
    let x = p.omega_q / p.t_bar;
    let tail = (-(p.n_max as f64 + 1.0) * x).exp();
    if tail >= THERMAL_TAIL_TOLERANCE {
        return Err(Error::Cutoff {
            n_max: p.n_max,
            mass: tail,
            context: "thermal field tail",
        });
    }
    let w: Vec<f64> = (0..=p.n_max).map(|n| (-(n as f64) * x).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(FieldState::Diagonal(w.into_iter().map(|v| v / z).collect()))
}

fn c(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

/// Effective g–e Hamiltonian after eliminating |m⟩:
///
/// `H = −(g_q² N/Δ) σ_gg − (g_q²/Δ) σ_ee ⊗ b†b + (Ω_L g_q/Δ)(σ_ge ⊗ b + σ_eg ⊗ b†)`
///
/// on `2 (n_max + 1)` states. The bare elimination also shifts the g–e gap
/// by Δ_eg^N ([`ModelParams::stark_correction`]); that shift is cancelled by
/// the d.c. Stark shift applied to each atom (see [`build_h_full`]), so it
/// does not appear here and doublet `n` splits by exactly Ω_n.
pub fn build_h_eff(p: &ModelParams) -> ComplexMatrix {
    let d = p.fock_dim();
    let g2 = p.g_q * p.g_q / p.delta;
    let coupling = p.coupling_scale();
    let mut h = ComplexMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        h[(n, n)] = c(-g2 * f64::from(p.n_select));
        h[(d + n, d + n)] = c(-g2 * n as f64);
    }
    for n in 0..d - 1 {
        let amp = c(coupling * ((n + 1) as f64).sqrt());
        // ⟨g,n| σ_ge b |e,n+1⟩ and its conjugate.
        h[(n, d + n + 1)] = amp;
        h[(d + n + 1, n)] = amp;
    }
    h
}

/// Three-level Raman Hamiltonian in the frame that removes its explicit time
/// dependence, on `3 (n_max + 1)` states with levels ordered (g, e, m).
///
/// Starting from `H₀ = ω_e σ_ee + ω_m σ_mm + ω_q b†b` and the coupling
/// `Ω_L(σ_gm e^{iω_L t} + h.c.) + g_q(σ_em b† + h.c.)`, move to the frame
/// generated by `G = ω_e σ_ee + ω_L σ_mm + ω_q b†b`. Then `H₀ − G = Δ σ_mm`,
/// `σ_gm e^{iω_L t}` picks up `e^{−iω_L t}` and becomes static, and
/// `σ_em b†` picks up `e^{i(ω_e + ω_q − ω_L)t} = 1` by the resonance
/// condition. The result is
///
/// `H = Δ σ_mm + Ω_L(σ_gm + σ_mg) + g_q(σ_em b† + σ_me b) − Δ_eg^N σ_ee`,
///
/// where the last term is the d.c. Stark shift that compensates the
/// elimination-induced g–e gap correction. Second-order elimination of |m⟩
/// from this Hamiltonian reproduces [`build_h_eff`] up to a constant.
pub fn build_h_full(p: &ModelParams) -> ComplexMatrix {
    let d = p.fock_dim();
    let (g, e, m) = (0, d, 2 * d);
    let mut h = ComplexMatrix::zeros(3 * d, 3 * d);
    for n in 0..d {
        h[(m + n, m + n)] = c(p.delta);
        h[(e + n, e + n)] = c(-p.stark_correction());
        h[(g + n, m + n)] = c(p.drive);
        h[(m + n, g + n)] = c(p.drive);
    }
    for n in 0..d - 1 {
        let amp = c(p.g_q * ((n + 1) as f64).sqrt());
        // σ_em b† |m,n⟩ = √(n+1) |e,n+1⟩
        h[(e + n + 1, m + n)] = amp;
        h[(m + n, e + n + 1)] = amp;
    }
    h
}

/// Field number operator `b†b` on `0..=n_max`.
pub fn number_operator(n_max: usize) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&(0..=n_max).map(|n| n as f64).collect::<Vec<_>>())
}

/// `1_atom ⊗ b†b − σ_ee ⊗ 1_field` on the two-level atom ⊗ field space.
pub fn excitation_difference(n_max: usize) -> ComplexMatrix {
    let d = n_max + 1;
    let diag: Vec<f64> = (0..2 * d)
        .map(|i| {
            let (atom, n) = (i / d, i % d);
            n as f64 - if atom == 1 { 1.0 } else { 0.0 }
        })
        .collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::eigh;

    fn reference(t_bar: f64) -> ModelParams {
        derive_params(&RawParams::reference(t_bar, 8)).unwrap()
    }

    fn with_r(r: f64, n_select: u32) -> ModelParams {
        let raw = RawParams {
            omega_m: 1.0,
            omega_q: 0.9,
            drive_ratio: 1.0 / r,
            delta: 1e-3,
            g_q: 1e-5 * r.min(1.0),
            t_bar: 0.1,
            n_select,
            n_max: 60,
        };
        derive_params(&raw).unwrap()
    }

    #[test]
    fn reference_parameters_derive() {
        let p = reference(0.01);
        assert!((p.r() - 1.0 / 30.0).abs() < 1e-15);
        assert!((p.chi() - (0.01 - 1e-6)).abs() < 1e-15);
        assert!(p.resonance_defect() < 1e-12);
        assert!((p.omega_l() - (1.0 - 1e-6)).abs() < 1e-15);
        assert!((p.r() - p.g_q() / p.drive()).abs() < 1e-15);
    }

    #[test]
    fn guards_reject_bad_configs() {
        let mut raw = RawParams::reference(0.01, 8);
        raw.delta = 0.3 * raw.g_q;
        assert!(matches!(derive_params(&raw), Err(Error::Config(_))));

        let mut raw = RawParams::reference(0.01, 8);
        raw.omega_q = raw.omega_m;
        assert!(matches!(derive_params(&raw), Err(Error::Config(_))));

        let mut raw = RawParams::reference(0.01, 8);
        raw.t_bar = 0.0;
        assert!(matches!(derive_params(&raw), Err(Error::Config(_))));
    }

    #[test]
    fn selectivity_examples() {
        assert_eq!(selectivity(0, &with_r(2.0, 1)), 1.0);
        assert_eq!(selectivity(0, &with_r(1e-3, 1)), 1.0);
        assert!((selectivity(1, &with_r(2.0, 1)) - 2.0 / 3.0).abs() < 1e-15);
        let a4 = selectivity(4, &with_r(30.0, 1));
        assert!((a4 - 20.0 / 14420.0).abs() < 1e-15);
        assert!((a4 - 1.39e-3).abs() < 1e-5);
    }

    #[test]
    fn selectivity_is_bounded_and_monotone() {
        for r in [0.01, 1.0, 30.0] {
            for n_select in 0..=50u32 {
                let p = with_r(r, n_select);
                for n in 0..=50usize {
                    let a = selectivity(n, &p);
                    assert!(a > 0.0 && a <= 1.0);
                }
            }
            // Fixed n+1: A falls as |n+1−N| grows.
            for n in 0..=50usize {
                let mut by_gap: Vec<(i64, f64)> = (0..=50u32)
                    .map(|ns| ((n as i64 + 1 - ns as i64).abs(), selectivity(n, &with_r(r, ns))))
                    .collect();
                by_gap.sort_by_key(|a| a.0);
                for w in by_gap.windows(2) {
                    if w[1].0 > w[0].0 {
                        assert!(w[1].1 < w[0].1);
                    } else {
                        assert_eq!(w[1].1, w[0].1);
                    }
                }
            }
        }
    }

    #[test]
    fn rabi_frequency_examples_and_identity() {
        let p = reference(0.01);
        let s = p.coupling_scale();
        assert!((rabi_frequency(0, &p) - 2.0 * s).abs() <= 1e-15 * s);
        let p3 = p.with_n_select(4);
        assert!((rabi_frequency(3, &p3) - 2.0 * s * 2.0).abs() <= 1e-15 * s);

        for r in [0.01, 1.0, 30.0] {
            for ns in [0u32, 1, 7, 50] {
                let p = with_r(r, ns);
                let s = p.coupling_scale();
                for n in 0..=50usize {
                    let om = rabi_frequency(n, &p);
                    let k = n as f64 + 1.0 - ns as f64;
                    let lhs = om * om - s * s * 4.0 * (n as f64 + 1.0);
                    let rhs = (s * p.r()).powi(2) * k * k;
                    assert!((lhs - rhs).abs() <= 1e-12 * (om * om));
                    assert!(om > 0.0);
                }
            }
        }
    }

    #[test]
    fn small_r_rabi_frequency_forgets_n() {
        let a = with_r(1e-6, 1);
        let b = with_r(1e-6, 40);
        for n in 0..20 {
            let ra = rabi_frequency(n, &a) / a.coupling_scale();
            let rb = rabi_frequency(n, &b) / b.coupling_scale();
            assert!((ra - 2.0 * ((n + 1) as f64).sqrt()).abs() < 1e-8);
            assert!((ra - rb).abs() < 1e-8);
        }
    }

    #[test]
    fn flip_probability_periods() {
        let p = reference(0.01);
        for n in [0, 3, 7] {
            let om = rabi_frequency(n, &p);
            assert_eq!(flip_probability(n, 0.0, &p), 0.0);
            assert!((flip_probability(n, std::f64::consts::PI / om, &p) - selectivity(n, &p)).abs() < 1e-15);
            assert!(flip_probability(n, TAU / om, &p).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_atom_anchors() {
        let raw = RawParams {
            omega_q: 0.99 * TAU * 1e12 - TAU * 1e6,
            ..RawParams::reference(0.1, 8)
        };
        let p = derive_params(&raw).unwrap();
        assert!((p.chi() - 0.01).abs() < 1e-14);
        let a = thermal_atom(&p).unwrap();
        assert!(((a.p_m / a.p_g) / (-10f64).exp() - 1.0).abs() < 1e-12);
        assert!(((a.p_e / a.p_g) / (-0.1f64).exp() - 1.0).abs() < 1e-12);
        assert!((a.p_g - 0.52497).abs() < 1e-5);
        assert!((a.total() - 1.0).abs() < 1e-12);

        let cold = thermal_atom(&reference(ZERO_TEMPERATURE)).unwrap();
        assert!((cold.p_g - 1.0).abs() < 1e-12 && cold.p_e < 1e-12 && cold.p_m < 1e-12);
    }

    #[test]
    fn thermal_field_anchors() {
        let f = thermal_field(&reference(0.01)).unwrap();
        let pops = f.populations();
        assert!((pops[0] - 1.0).abs() < 1e-40);
        assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let hot = reference(100.0);
        assert!(matches!(thermal_field(&hot), Err(Error::Cutoff { .. })));

        // Bose–Einstein mean as an independent closed form.
        let p = with_r(0.1, 1).with_t_bar(0.3).unwrap();
        let f = thermal_field(&p).unwrap();
        let be = 1.0 / ((p.omega_q() / p.t_bar()).exp() - 1.0);
        assert!((f.mean_occupation() - be).abs() < 1e-12);
        assert!((f.populations().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_eff_couples_only_doublets() {
        let p = reference(0.01);
        let d = p.fock_dim();
        let h = build_h_eff(&p);
        assert!(h.is_hermitian(0.0));
        for i in 0..2 * d {
            for j in 0..2 * d {
                if i == j || h[(i, j)].norm() == 0.0 {
                    continue;
                }
                // Only |g,n⟩ ↔ |e,n+1⟩.
                let (lo, hi) = (i.min(j), i.max(j));
                assert!(lo < d && hi >= d && hi - d == lo + 1, "unexpected coupling {i},{j}");
            }
        }
        for n in 0..d {
            assert_eq!(h[(d, n)].norm(), 0.0, "|e,0⟩ must be an eigenstate");
        }
        let g2 = p.g_q() * p.g_q() / p.delta();
        assert_eq!(h[(0, 0)].re, -g2 * f64::from(p.n_select()));
        let p5 = p.with_n_select(5);
        assert_eq!(build_h_eff(&p5)[(2, 2)].re, -g2 * 5.0);
    }

    #[test]
    fn h_eff_doublet_gaps_equal_rabi_frequencies() {
        for p in [reference(0.01), with_r(30.0, 3), with_r(1.0, 2)] {
            let d = p.fock_dim();
            let h = build_h_eff(&p);
            for n in 0..d - 1 {
                let block = h.submatrix(&[n, d + n + 1]);
                let e = eigh(&block).unwrap();
                let gap = e.values[0] - e.values[1];
                let om = rabi_frequency(n, &p);
                assert!((gap / om - 1.0).abs() < 1e-10, "n={n}: {gap} vs {om}");
            }
        }
    }

    #[test]
    fn h_eff_conserves_excitation_difference() {
        for p in [reference(0.01), with_r(30.0, 3)] {
            let h = build_h_eff(&p);
            let x = excitation_difference(p.n_max());
            assert!(h.commutator(&x).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn h_full_limits() {
        // g_q → 0: pure g↔m problem with splitting 2√(Ω_L² + Δ²/4).
        let raw = RawParams {
            omega_m: 1.0,
            omega_q: 0.9,
            drive_ratio: 5e8,
            delta: 1e-2,
            g_q: 1e-12,
            t_bar: 0.1,
            n_select: 1,
            n_max: 2,
        };
        let p = derive_params(&raw).unwrap();
        let d = p.fock_dim();
        let h = build_h_full(&p);
        let block = h.submatrix(&[0, 2 * d]);
        let e = eigh(&block).unwrap();
        let expect = 2.0 * (p.drive().powi(2) + p.delta().powi(2) / 4.0).sqrt();
        assert!(((e.values[0] - e.values[1]) / expect - 1.0).abs() < 1e-12);
        // The e–m coupling scales with g_q and vanishes with it.
        assert!(h[(d + 1, 2 * d)].norm() < 1e-11);

        // Level g only talks to m through the drive; e–m is a JC exchange.
        let p = reference(0.01);
        let d = p.fock_dim();
        let h = build_h_full(&p);
        for n in 0..d {
            for j in 0..3 * d {
                let v = h[(n, j)];
                if j != 2 * d + n {
                    assert_eq!(v.norm(), 0.0);
                }
            }
        }
        for n in 0..d - 1 {
            assert!((h[(d + n + 1, 2 * d + n)].re - p.g_q() * ((n + 1) as f64).sqrt()).abs() < 1e-24);
        }
    }
}
