//! Collision time search: a uniform grid scan followed by golden-section
//! refinement around the best sample.
//!
//! The gain functions are quasi-periodic sums of `sin²` terms with
//! incommensurate frequencies, so they are multimodal and a pure local
//! method would lock onto the first hump.

use crate::Real;

/// Number of uniform samples in `(0, window]`.
pub const GRID_SAMPLES: usize = 4096;

/// Relative tolerance on the refined time.
pub const REFINE_RTOL: f64 = 1e-8;

/// Result of a collision time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizedTime<T> {
    pub dtau: T,
    pub gain: T,
    /// No positive gain was found in the window; `dtau` is zero.
    pub stagnated: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct CollisionTimeOptimizer {
    pub samples: usize,
    pub rtol: f64,
}

impl Default for CollisionTimeOptimizer {
    fn default() -> Self {
        Self {
            samples: GRID_SAMPLES,
            rtol: REFINE_RTOL,
        }
    }
}

impl CollisionTimeOptimizer {
    /// Maximises `gain` over `(0, window]`.
    ///
    /// Ties on the grid go to the earliest sample within `1e-12` (relative)
    /// of the best value, so the shortest interaction wins.
    pub fn maximize<T: Real>(&self, gain: impl Fn(T) -> T, window: T) -> OptimizedTime<T> {
        let n = self.samples.max(2);
        let step = window / T::from_usize_lossy(n);
        let values: Vec<T> = (1..=n).map(|j| gain(step * T::from_usize_lossy(j))).collect();

        let best = values.iter().copied().fold(T::neg_infinity(), T::max);
        if !(best > T::zero()) {
            return OptimizedTime {
                dtau: T::zero(),
                gain: T::zero(),
                stagnated: true,
            };
        }
        let slack = best.abs() * T::lit(1e-12);
        let j = values.iter().position(|&v| v >= best - slack).unwrap_or(0);

        let t_j = step * T::from_usize_lossy(j + 1);
        let lo = step * T::from_usize_lossy(j);
        let hi = (step * T::from_usize_lossy(j + 2)).min(window);
        let (t_ref, g_ref) = golden_section_max(&gain, lo, hi, T::lit(self.rtol));

        let (dtau, g) = if g_ref >= values[j] {
            (t_ref, g_ref)
        } else {
            (t_j, values[j])
        };
        OptimizedTime {
            dtau,
            gain: g,
            stagnated: false,
        }
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `rtol` times its midpoint.
/// Returns the best point seen and its value.
pub fn golden_section_max<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, rtol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while (b - a) > rtol * ((a + b) / T::lit(2.0)).abs() && iterations < 400 {
        iterations += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let mid = (a + b) / T::lit(2.0);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |best, cand| if cand.1 > best.1 { cand } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_doublet_maximum_is_half_period() {
        let (a0, om) = (0.93, 1.7e-10);
        let gain = |t: f64| a0 * (0.5 * om * t).sin().powi(2);
        let r = CollisionTimeOptimizer::default().maximize(gain, 2.0 * PI / om);
        assert!(!r.stagnated);
        assert!((r.dtau / (PI / om) - 1.0).abs() < 1e-6);
        assert!((r.gain - a0).abs() < 1e-12);
    }

    #[test]
    fn beats_brute_force_on_two_incommensurate_doublets() {
        let (o0, o1) = (1.0, 2f64.sqrt());
        let gain = |t: f64| 0.4 * (0.5 * o0 * t).sin().powi(2) + 0.55 * (0.5 * o1 * t).sin().powi(2);
        let window = 2.0 * PI / o0;
        let r = CollisionTimeOptimizer::default().maximize(gain, window);
        let brute = (1..=1_000_000)
            .map(|j| gain(window * j as f64 / 1e6))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.gain >= brute - 1e-12, "{} < {}", r.gain, brute);
        // Also at least each single-doublet restriction evaluated at its optimum time.
        assert!(r.gain >= gain(PI / o0) && r.gain >= gain(PI / o1));
    }

    #[test]
    fn stagnation_when_nothing_to_gain() {
        let r = CollisionTimeOptimizer::default().maximize(|_t: f64| 0.0, 1.0);
        assert!(r.stagnated);
        assert_eq!(r.gain, 0.0);
        assert_eq!(r.dtau, 0.0);
        let r = CollisionTimeOptimizer::default().maximize(|t: f64| -t, 1.0);
        assert!(r.stagnated);
    }

    #[test]
    fn ties_prefer_shortest_time() {
        // Two equal humps at t = 1 and t = 3.
        let gain = |t: f64| (0.5 * PI * t).sin().powi(2);
        let r = CollisionTimeOptimizer::default().maximize(gain, 4.0);
        assert!((r.dtau - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_precision_search() {
        let gain = |t: f32| (t - 0.3) * (0.7 - t);
        let r = CollisionTimeOptimizer {
            samples: 64,
            rtol: 1e-5,
        }
        .maximize(gain, 1.0f32);
        assert!((r.dtau - 0.5).abs() < 1e-3);
    }
}
