use demon_core::info::random::{haar_unitary, random_bipartite_state, random_joint, random_state};
use demon_core::info::thermal::noneq_free_energy_via_relative_entropy;
use demon_core::info::*;
use demon_core::rng::stream;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn entropy_is_additive(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = stream(seed, 0);
        let a = random_state(&mut rng, da);
        let b = random_state(&mut rng, db);
        let lhs = von_neumann_entropy(&a.tensor(&b));
        prop_assert!((lhs - von_neumann_entropy(&a) - von_neumann_entropy(&b)).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = stream(seed, 1);
        let rho = random_state(&mut rng, d);
        let u = haar_unitary(&mut rng, d);
        let evolved = rho.evolve(&u).unwrap();
        prop_assert!((von_neumann_entropy(&evolved) - von_neumann_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_subadditive(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = stream(seed, 2);
        let rho = random_bipartite_state(&mut rng, da, db);
        let a = rho.partial_trace(&[da, db], &[0]).unwrap();
        let b = rho.partial_trace(&[da, db], &[1]).unwrap();
        prop_assert!(von_neumann_entropy(&rho) <= von_neumann_entropy(&a) + von_neumann_entropy(&b) + 1e-9);
        prop_assert!(mutual_information_quantum(&rho, (da, db)).unwrap() >= -1e-9);
    }

    #[test]
    fn klein_inequality(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = stream(seed, 3);
        let sigma = random_state(&mut rng, d);
        let rho = random_state(&mut rng, d);
        prop_assert!(relative_entropy(&sigma, &rho).unwrap() >= -1e-12);
        prop_assert!(relative_entropy(&sigma, &sigma).unwrap().abs() < 1e-8);
    }

    #[test]
    fn mutual_information_forms_agree(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let mut rng = stream(seed, 4);
        let p = random_joint(&mut rng, rows, cols);
        let [a, b, c] = mutual_information_forms(&p);
        prop_assert!((a - b).abs() < 1e-10 && (a - c).abs() < 1e-10);
        prop_assert!(a >= -1e-12);
    }

    #[test]
    fn energy_is_log_partition_derivative(levels in prop::collection::vec(-3.0f64..3.0, 1..6), beta in 0.1f64..5.0) {
        let h = SpectrumModel::nondegenerate(levels).unwrap();
        let step = 1e-5;
        let lz = |b: f64| ln_partition_function(&h, InverseTemperature::new(b).unwrap()).unwrap();
        let fd = -(lz(beta + step) - lz(beta - step)) / (2.0 * step);
        let e = average_energy(&h, InverseTemperature::new(beta).unwrap());
        prop_assert!((fd - e).abs() <= 1e-6 * e.abs().max(1e-3), "fd {} vs {}", fd, e);
    }

    #[test]
    fn gibbs_state_minimises_free_energy(seed in any::<u64>(), levels in prop::collection::vec(0.0f64..4.0, 2..5), beta in 0.1f64..4.0) {
        let mut rng = stream(seed, 5);
        let h = SpectrumModel::nondegenerate(levels).unwrap();
        let b = InverseTemperature::new(beta).unwrap();
        let hm = h.matrix();
        let rho = random_state(&mut rng, h.dim());
        let f_rho = noneq_free_energy(&rho, &hm, b).unwrap();
        let f_eq = equilibrium_free_energy(&h, b).unwrap();
        prop_assert!(f_rho >= f_eq - 1e-12);
        let via = noneq_free_energy_via_relative_entropy(&rho, &hm, b).unwrap();
        prop_assert!((via - f_rho).abs() < 1e-9);
    }
}
