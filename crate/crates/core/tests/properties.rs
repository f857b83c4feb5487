//! Cross-module property tests over seeded random instances.

use proptest::prelude::*;
use tqsd::bounds::{self, gamma_factor};
use tqsd::linalg::{max_abs_entry, CMatrix, HermitianOperator};
use tqsd::protocol::{optimize_hamiltonian, Protocol};
use tqsd::sampling;
use tqsd::states::{delta_asymmetric, helstrom_guess, min_entropy, trace_distance, Ensemble};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_dominates_cosine_gap(k in 0.0f64..26.0) {
        let gamma = gamma_factor(k).unwrap();
        prop_assert!(2.0 * (1.0 - k.cos()) <= gamma * k + 1e-12);
    }

    #[test]
    fn exponential_group_law(seed in any::<u64>(), s1 in -3.0f64..3.0, s2 in -3.0f64..3.0) {
        let mut rng = sampling::rng_from_seed(seed);
        let h = sampling::random_hermitian(4, &mut rng);
        let lhs = h.expm_antihermitian(s1) * h.expm_antihermitian(s2);
        let rhs = h.expm_antihermitian(s1 + s2);
        prop_assert!(max_abs_entry(&(lhs - rhs)) <= 1e-8);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let mut rng = sampling::rng_from_seed(seed);
        let a = sampling::random_density_matrix(3, &mut rng);
        let b = sampling::random_density_matrix(3, &mut rng);
        let c = sampling::random_density_matrix(3, &mut rng);
        let dab = trace_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&dab));
        prop_assert!((dab - trace_distance(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!(dab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-9);
    }

    #[test]
    fn helstrom_between_prior_and_one(seed in any::<u64>(), p0 in 0.01f64..0.99) {
        let mut rng = sampling::rng_from_seed(seed);
        let r0 = sampling::random_density_matrix(2, &mut rng);
        let r1 = sampling::random_density_matrix(2, &mut rng);
        let p = helstrom_guess(p0, &r0, 1.0 - p0, &r1).unwrap();
        prop_assert!(p >= p0.max(1.0 - p0) - 1e-12);
        prop_assert!(p <= 1.0 + 1e-12);
        // Trace identity between the two asymmetric forms.
        let lhs = p0 + delta_asymmetric(1.0 - p0, &r1, p0, &r0).unwrap();
        let rhs = (1.0 - p0) + delta_asymmetric(p0, &r0, 1.0 - p0, &r1).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn min_entropy_is_antitone(p in 0.01f64..1.0, q in 0.01f64..1.0) {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        prop_assume!(hi - lo > 1e-12);
        prop_assert!(min_entropy(lo).unwrap() > min_entropy(hi).unwrap());
    }

    #[test]
    fn simulation_never_beats_the_bounds(seed in any::<u64>(), t in 0.0f64..4.0) {
        let mut rng = sampling::rng_from_seed(seed);
        let r0 = sampling::random_density_matrix(2, &mut rng);
        let r1 = sampling::random_density_matrix(2, &mut rng);
        let h = sampling::random_psd_hamiltonian(4, 1.0, &mut rng);
        let ensemble = Ensemble::uniform(vec![r0.clone(), r1.clone()]).unwrap();
        let sim = Protocol::new(ensemble, h.clone(), t, 1.0)
            .unwrap()
            .success_probability()
            .unwrap();
        for report in bounds::two_state_reports(0.5, 0.5, &r0, &r1, &h, t, 1.0).unwrap() {
            prop_assert!(sim <= report.value + 1e-9, "{} too small", report.bound_name);
        }
    }

    #[test]
    fn success_probability_ignores_identity_shift(seed in any::<u64>(), c in -5.0f64..5.0) {
        let mut rng = sampling::rng_from_seed(seed);
        let ensemble = sampling::random_ensemble(2, 2, &mut rng);
        let h = sampling::random_hermitian(4, &mut rng);
        let shifted = HermitianOperator::new(h.matrix() + CMatrix::identity(4, 4).scale(c)).unwrap();
        let p1 = Protocol::new(ensemble.clone(), h, 0.9, 1.0).unwrap().success_probability().unwrap();
        let p2 = Protocol::new(ensemble, shifted, 0.9, 1.0).unwrap().success_probability().unwrap();
        prop_assert!((p1 - p2).abs() <= 1e-9);
    }
}

/// The search oracle is a lower-bound witness: whatever it finds must stay
/// under the max-energy bound evaluated on the found Hamiltonian.
#[test]
fn optimizer_output_respects_trace_distance_bound() {
    for seed in 0..10u64 {
        let mut rng = sampling::rng_from_seed(1000 + seed);
        let r0 = sampling::random_density_matrix(2, &mut rng);
        let r1 = sampling::random_density_matrix(2, &mut rng);
        let ensemble = Ensemble::uniform(vec![r0.clone(), r1.clone()]).unwrap();
        let t = 0.4 + 0.2 * seed as f64;
        let (found_h, found_p) = optimize_hamiltonian(&ensemble, t, 1.0, 1.0, 40, seed).unwrap();
        let bound = bounds::simple_trace_bound(0.5, 0.5, &r0, &r1, &found_h, t, 1.0).unwrap();
        assert!(
            found_p <= bound + 1e-9,
            "seed {seed}: found {found_p} above bound {bound}"
        );
    }
}
