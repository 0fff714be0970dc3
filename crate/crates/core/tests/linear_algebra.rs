mod common;

use common::*;
use proptest::prelude::*;
use qbatt::qla::{eigh, partial_trace, relative_entropy_quantum, tensor, von_neumann_entropy, Density};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), dim in 1usize..=16) {
        let h = random_hermitian(dim, &mut rng(seed));
        let e = eigh(&h).unwrap();
        prop_assert!((&e.reconstruct() - &h).max_abs() <= 1e-9);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let overlap = e.vectors.adjoint().matmul(&e.vectors);
        prop_assert!((&overlap - &qbatt::ComplexMatrix::identity(dim)).max_abs() <= 1e-9);
    }

    #[test]
    fn partial_trace_inverts_tensor(seed in any::<u64>(), n in 1usize..=16) {
        let mut r = rng(seed);
        let a = random_density(2, &mut r);
        let b = random_density(n, &mut r);
        let joint = Density::new(tensor(a.matrix(), b.matrix()).unwrap()).unwrap();
        let back = partial_trace(&joint, &[2, n], 0).unwrap();
        prop_assert!((back.matrix() - a.matrix()).max_abs() <= 1e-12);
        let other = partial_trace(&joint, &[2, n], 1).unwrap();
        prop_assert!((other.matrix() - b.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn tensor_of_hermitian_is_hermitian(seed in any::<u64>(), m in 1usize..=5, n in 1usize..=5) {
        let mut r = rng(seed);
        let t = tensor(&random_hermitian(m, &mut r), &random_hermitian(n, &mut r)).unwrap();
        prop_assert!(t.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=10) {
        let mut r = rng(seed);
        let rho = random_density(dim, &mut r);
        let u = random_unitary(dim, &mut r);
        let s0 = von_neumann_entropy(&rho).unwrap();
        let s1 = von_neumann_entropy(&rho.conjugate_by(&u)).unwrap();
        prop_assert!((s0 - s1).abs() <= 1e-10);
        prop_assert!(s0 >= -1e-12 && s0 <= (dim as f64).ln() + 1e-12);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), dim in 1usize..=10) {
        let mut r = rng(seed);
        let rho = random_density(dim, &mut r);
        let sigma = random_density(dim, &mut r);
        prop_assert!(relative_entropy_quantum(&rho, &sigma).unwrap() >= -1e-12);
    }

    #[test]
    fn unitary_steps_keep_states_normalized(seed in any::<u64>(), dim in 1usize..=12) {
        let mut r = rng(seed);
        let amps = common::ginibre(dim, &mut r).column(0);
        let mut psi = qbatt::StateVector::normalized(amps).unwrap();
        for _ in 0..5 {
            psi = psi.evolve(&random_unitary(dim, &mut r));
            prop_assert!((psi.norm_sqr() - 1.0).abs() <= 1e-10);
        }
        let rho = psi.to_density();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(rho.eigen().unwrap().values.iter().all(|&v| v >= -1e-10));
    }
}
