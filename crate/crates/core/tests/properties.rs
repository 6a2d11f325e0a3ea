use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use triality::linalg::{max_abs_diff, random_isometry};
use triality::{
    coherence_l1, eigen_ensemble, ensemble_from_isometry, path_information, quadratic_triality, random_density,
    roof_minimize, roof_objective, triality_report, Mode, RoofConfig, SimplexFunction,
};

fn dim_and_rank() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|d| (Just(d), 1..=d))
}

fn permutation(dim: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..dim).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn isometry_ensembles_reconstruct((dim, rank) in dim_and_rank(), extra in 0usize..=6, seed: u64) {
        let rho = random_density(dim, rank, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let v = random_isometry(rank + extra, rank, &mut rng);
        let ens = ensemble_from_isometry(&rho, &v).unwrap();
        prop_assert!(ens.reconstruction_error() <= 1e-8);
        prop_assert!((ens.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        prop_assert!(ens.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn spectral_decomposition_reconstructs((dim, rank) in dim_and_rank(), seed: u64) {
        let rho = random_density(dim, rank, seed).unwrap();
        let sd = rho.spectral();
        prop_assert_eq!(sd.rank, rank);
        prop_assert!(max_abs_diff(&sd.reconstruct(), rho.matrix()) <= 1e-9);
    }

    #[test]
    fn direct_l1_triality_sums_to_one((dim, rank) in dim_and_rank(), seed: u64) {
        let rho = random_density(dim, rank, seed).unwrap();
        let l1 = SimplexFunction::builtin("l1").unwrap();
        let r = triality_report(&l1, &rho, Mode::Direct, None).unwrap();
        prop_assert!((r.sum - 1.0).abs() <= 1e-12);
        prop_assert!(r.m >= -1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r.c));
    }

    #[test]
    fn measures_are_permutation_invariant(
        (dim, rank, perm) in dim_and_rank().prop_flat_map(|(d, r)| (Just(d), Just(r), permutation(d))),
        seed: u64,
    ) {
        let rho = random_density(dim, rank, seed).unwrap();
        let moved = rho.permuted(&perm).unwrap();
        prop_assert!((coherence_l1(&moved) - coherence_l1(&rho)).abs() <= 1e-12);
        for name in ["l1", "entropy", "fidelity"] {
            let f = SimplexFunction::builtin(name).unwrap();
            prop_assert!((path_information(&f, &moved) - path_information(&f, &rho)).abs() <= 1e-12);
        }
        let (a, b) = (quadratic_triality(&moved), quadratic_triality(&rho));
        prop_assert!((a.w - b.w).abs() <= 1e-12 && (a.p - b.p).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roof_never_loses_to_its_start(dim in 2usize..=3, seed: u64, name in prop::sample::select(vec!["l1", "entropy", "fidelity"])) {
        let rho = random_density(dim, dim, seed).unwrap();
        let f = SimplexFunction::builtin(name).unwrap();
        let cfg = RoofConfig { restarts: 2, max_iters: 300, ..RoofConfig::with_seed(seed) };
        let r = roof_minimize(&f, &rho, &cfg).unwrap();
        let start = roof_objective(&f, &eigen_ensemble(&rho).unwrap());
        prop_assert!(r.value <= start + 1e-12);
        prop_assert!(r.value <= f.evaluate(&triality::diagonal(&rho)) + 1e-6);
        prop_assert!(r.ensemble.reconstruction_error() <= 1e-8);
    }
}
