//! Property tests: format round-trips, normalization invariants, and
//! simplification checked against brute-force oracles on small instances.

use cspkit::bench::{gen_cnf_mixed, gen_csp_mixed, GeneratorConfig, SplitMix64};
use cspkit::instance::{Assignment, CspInstance, Simplified};
use cspkit::io::{parse_csp, parse_dimacs, write_csp, write_dimacs};
use cspkit::solvers::{brute_force_csp, DEFAULT_ENUMERATION_BUDGET};
use proptest::prelude::*;

fn small_instance(seed: u64) -> CspInstance {
    let mut rng = SplitMix64::new(seed);
    let n = 2 + rng.below(4) as usize;
    let cfg = GeneratorConfig {
        n,
        m: 1 + rng.below(4) as usize,
        k: 1 + rng.below(n.min(3) as u64) as usize,
        domain_size: 2 + rng.below(2) as usize,
        tuples_per_constraint: 1 + rng.below(4) as usize,
        edge_probability: 0.0,
        clique_size: 0,
        seed: rng.next_u64(),
    };
    gen_csp_mixed(&cfg).unwrap()
}

fn sat_bit(instance: &CspInstance) -> bool {
    brute_force_csp(instance, DEFAULT_ENUMERATION_BUDGET)
        .unwrap()
        .satisfiable
}

/// Deterministic round-trip sweep across both formats.
#[test]
fn thousand_artifact_round_trips() {
    for seed in 0..1000u64 {
        let instance = small_instance(seed);
        assert_eq!(
            parse_csp(&write_csp(&instance)).unwrap(),
            instance,
            "seed {seed}"
        );

        let mut rng = SplitMix64::new(seed ^ 0xD1AC);
        let n = 2 + rng.below(8) as usize;
        let cfg = GeneratorConfig {
            n,
            m: rng.below(10) as usize,
            k: 1 + rng.below(n as u64) as usize,
            seed: rng.next_u64(),
            ..GeneratorConfig::default()
        };
        let formula = gen_cnf_mixed(&cfg).unwrap();
        assert_eq!(
            parse_dimacs(&write_dimacs(&formula)).unwrap(),
            formula,
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn csp_json_round_trip(seed in any::<u64>()) {
        let instance = small_instance(seed);
        let text = write_csp(&instance);
        let back = parse_csp(&text).unwrap();
        prop_assert_eq!(&back, &instance);
        prop_assert_eq!(write_csp(&back), text);
    }

    #[test]
    fn dimacs_round_trip(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let n = 2 + rng.below(6) as usize;
        let cfg = GeneratorConfig {
            n,
            m: rng.below(8) as usize,
            k: 1 + rng.below(n as u64) as usize,
            seed: rng.next_u64(),
            ..GeneratorConfig::default()
        };
        let formula = gen_cnf_mixed(&cfg).unwrap();
        let text = write_dimacs(&formula);
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back, &formula);
        prop_assert_eq!(write_dimacs(&back), text);
    }

    #[test]
    fn normalize_is_idempotent_and_preserves_satisfiability(seed in any::<u64>()) {
        let instance = small_instance(seed);
        let once = instance.normalize();
        let twice = once.instance.normalize();
        prop_assert_eq!(&twice.instance, &once.instance);
        prop_assert!(twice.is_identity());
        prop_assert_eq!(sat_bit(&once.instance), sat_bit(&instance));
        let solved = brute_force_csp(&once.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        if let Some(w) = &solved.witness {
            prop_assert!(instance.check(&once.map_witness(w)).unwrap());
        }
    }

    /// The residual after a partial assignment is satisfiable exactly when
    /// the original has a satisfying extension of that assignment.
    #[test]
    fn assign_and_simplify_matches_extension_oracle(seed in any::<u64>()) {
        let instance = small_instance(seed);
        let n = instance.num_vars();
        let d = instance.domain_size();
        let mut rng = SplitMix64::new(seed ^ 0xABCD);
        let mut partial = Assignment::empty(n);
        for v in 0..n {
            if rng.next_bool() {
                partial.set(v, rng.below(d as u64) as usize);
            }
        }

        // Oracle: enumerate all total assignments extending the partial one.
        let mut extension_exists = false;
        let total = (d as u64).pow(n as u32);
        let mut values = vec![0usize; n];
        for _ in 0..total {
            let extends = partial.assigned().all(|(v, val)| values[v] == val);
            if extends && instance.check(&Assignment::from_total(values.clone())).unwrap() {
                extension_exists = true;
                break;
            }
            let mut i = n;
            while i > 0 {
                i -= 1;
                values[i] += 1;
                if values[i] < d {
                    break;
                }
                values[i] = 0;
            }
        }

        let residual_sat = match instance.assign_and_simplify(&partial).unwrap() {
            Simplified::Unsat => false,
            Simplified::Instance(residual) => sat_bit(&residual),
        };
        prop_assert_eq!(residual_sat, extension_exists);
    }

    #[test]
    fn parameter_sums_recomputed_independently(seed in any::<u64>()) {
        let instance = small_instance(seed);
        let p = instance.parameters();
        let size: usize = instance
            .constraints
            .iter()
            .map(|c| c.scope.len() * c.relation().len())
            .sum();
        let tuples: usize = instance.constraints.iter().map(|c| c.relation().len()).sum();
        prop_assert_eq!(p.size, size);
        prop_assert_eq!(p.tuples, tuples);
        prop_assert!(p.tuples <= p.size);
        prop_assert!(p.size <= p.max_arity.max(1) * p.tuples.max(1));
    }

    #[test]
    fn disjoint_union_sat_is_conjunction(seed in any::<u64>()) {
        let a = small_instance(seed);
        let b = small_instance(seed.wrapping_add(1));
        let union = CspInstance::disjoint_union(&[a.clone(), b.clone()]);
        prop_assert_eq!(sat_bit(&union.instance), sat_bit(&a) && sat_bit(&b));
    }
}
