//! Property tests for the structural invariants: exact normalization,
//! monotonicity, graph-intersection structure, search optimality, and
//! parallel/sequential agreement.

use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use qcomposite::exact::{
    self, all_distinct_probability, coverage_distribution, find_pool_size, link_probability,
    overlap_distribution,
};
use qcomposite::sim::{self, trial_rng, NetworkInstance};
use qcomposite::{runner, SchemeParams};

fn params(k: u64, p: u64, q: u64) -> SchemeParams {
    SchemeParams::new(k, p, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn overlap_distribution_normalizes_exactly(k in 1u64..8, extra in 0u64..14) {
        let p = k + extra;
        let dist = overlap_distribution(&params(k, p, 1)).unwrap();
        let total: BigRational = dist.iter().map(|(_, pr)| pr.as_ratio().clone()).sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn coverage_normalizes_and_matches_all_distinct(
        k in 1u64..5,
        extra in 0u64..10,
        m in 1u64..5,
    ) {
        let p = k + extra;
        let dist = coverage_distribution(&params(k, p, 1), m).unwrap();
        let total: BigRational = dist.iter().map(|(_, pr)| pr.as_ratio().clone()).sum();
        prop_assert!(total.is_one());
        if m * k <= p {
            let tail = all_distinct_probability(&params(k, p, 1), m).unwrap();
            prop_assert_eq!(dist.probability(m * k).unwrap(), &tail);
        }
    }

    #[test]
    fn link_probability_monotone_in_threshold(k in 1u64..8, extra in 0u64..14) {
        let p = k + extra;
        let mut last = link_probability(&params(k, p, 1)).unwrap();
        for q in 2..=k {
            let next = link_probability(&params(k, p, q)).unwrap();
            prop_assert!(next <= last);
            last = next;
        }
    }

    #[test]
    fn solved_pool_size_is_locally_optimal(
        k in 1u64..6,
        q_raw in 0u64..6,
        target in 0.2f64..0.95,
    ) {
        let q = 1 + q_raw % k;
        let solved = find_pool_size(k, q, target).unwrap();
        let t = BigRational::from_float(target).unwrap();
        let diff = |pool: u64| {
            (link_probability(&params(k, pool, q)).unwrap().into_ratio() - &t).abs()
        };
        let best = diff(solved);
        // no pool below the solved one may tie or beat it, and none above
        // may beat it (ties above resolve downward)
        for pool in k..solved {
            prop_assert!(diff(pool) > best, "P={pool} ties or beats {solved}");
        }
        for pool in solved + 1..=solved + 5 {
            prop_assert!(diff(pool) >= best, "P={pool} beats {solved}");
        }
    }

    #[test]
    fn secure_graph_is_key_geo_intersection(
        seed in any::<u64>(),
        n in 2u64..40,
        r in 0.05f64..0.70,
        k in 1u64..5,
        extra in 0u64..20,
        m_frac in 0u64..3,
    ) {
        let p = k + extra;
        let captured = (n - 1).min(m_frac * n / 4);
        let pr = SchemeParams::new(k, p, 1).unwrap().with_node_count(n).unwrap();
        let inst = NetworkInstance::sample(&pr, r, captured, false, &mut trial_rng(seed, 0)).unwrap();
        let key: std::collections::BTreeSet<_> = inst.key_graph_edges().into_iter().collect();
        let geo: std::collections::BTreeSet<_> = inst.geo_graph_edges().into_iter().collect();
        let secure: std::collections::BTreeSet<_> = inst.secure_edges().iter().copied().collect();
        prop_assert!(secure.is_subset(&key));
        prop_assert!(secure.is_subset(&geo));
        let expected: std::collections::BTreeSet<_> = key.intersection(&geo).copied().collect();
        prop_assert_eq!(secure, expected);
    }

    #[test]
    fn trial_folding_is_execution_order_insensitive(seed in any::<u64>(), trials in 1u64..300) {
        let step = |t: u64| {
            use rand::Rng;
            let mut rng = trial_rng(seed, t);
            rng.gen_range(0..1000u64)
        };
        let parallel = runner::fold_trials(trials, 0u64, step, |a, b| a + b);
        let sequential = runner::fold_trials_seq(trials, 0u64, step, |a, b| a + b);
        prop_assert_eq!(parallel, sequential);
    }

    #[test]
    fn estimates_are_pure_functions_of_seed(seed in any::<u64>()) {
        let pr = SchemeParams::new(2, 8, 1).unwrap().with_node_count(12).unwrap();
        let a = sim::estimate_connectivity(&pr, 0.3, 40, seed, 2).unwrap();
        let b = sim::estimate_connectivity(&pr, 0.3, 40, seed, 2).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn chan_formula_equals_exact_only_for_single_key_rings() {
    // equality holds at K=1; a strict gap appears at the smallest K=2 case
    for p in 2..=6u64 {
        let chan = exact::compromise_probability_chan(&params(1, p, 1), 2).unwrap();
        let correct = exact::compromise_probability_exact(&params(1, p, 1), 2).unwrap();
        assert_eq!(chan, correct, "P={p}");
    }
    let chan = exact::compromise_probability_chan(&params(2, 4, 1), 1).unwrap();
    let correct = exact::compromise_probability_exact(&params(2, 4, 1), 1).unwrap();
    assert_ne!(chan, correct);
}
