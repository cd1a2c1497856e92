//! Randomized invariants across the library.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use powerfree_core::arith::{factorize_u128, is_prime_u128};
use powerfree_core::exponents::{
    gamma_min, lambert_w_minus1, profile_from_group, RateProfile,
};
use powerfree_core::groups::full_catalog;
use powerfree_core::localarith::{count_roots_mod_pk, poly_from_i64, roots_mod_pk};
use powerfree_core::ratefn::{
    rate_function, simulate_omega_model, simulate_omega_model_range, RateVector, SanovModel,
};
use powerfree_core::rng::CounterRng;
use powerfree_core::sequences::{density_oracle, SequenceKind};
use powerfree_core::survey::is_kfree;

fn catalog() -> &'static [powerfree_core::groups::GroupRecord] {
    static CATALOG: std::sync::OnceLock<Vec<powerfree_core::groups::GroupRecord>> =
        std::sync::OnceLock::new();
    CATALOG.get_or_init(|| full_catalog().unwrap())
}

fn prob_vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, len).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / sum).collect()
    })
}

fn labelled(values: &[f64]) -> RateVector {
    let pairs: BTreeMap<String, f64> =
        values.iter().enumerate().map(|(i, &v)| (format!("l{i}"), v)).collect();
    RateVector::new(pairs).unwrap()
}

proptest! {
    #[test]
    fn rate_function_nonnegative_and_zero_at_center(
        c in prob_vector(4),
        scale in proptest::collection::vec(0.1f64..3.0, 4),
    ) {
        let cv = labelled(&c);
        let x: Vec<f64> = c.iter().zip(&scale).map(|(&cj, &s)| cj * s).collect();
        let xv = labelled(&x);
        let at_center = rate_function(&cv, &cv).unwrap().finite().unwrap();
        prop_assert!(at_center.abs() < 1e-12);
        let value = rate_function(&cv, &xv).unwrap().finite().unwrap();
        prop_assert!(value >= -1e-12, "I = {value}");
    }

    #[test]
    fn rate_function_convex_along_segments(
        c in prob_vector(4),
        a in proptest::collection::vec(0.05f64..2.0, 4),
        b in proptest::collection::vec(0.05f64..2.0, 4),
    ) {
        let cv = labelled(&c);
        let xa: Vec<f64> = c.iter().zip(&a).map(|(&cj, &s)| cj * s).collect();
        let xb: Vec<f64> = c.iter().zip(&b).map(|(&cj, &s)| cj * s).collect();
        let mid: Vec<f64> = xa.iter().zip(&xb).map(|(&p, &q)| 0.5 * (p + q)).collect();
        let ia = rate_function(&cv, &labelled(&xa)).unwrap().finite().unwrap();
        let ib = rate_function(&cv, &labelled(&xb)).unwrap().finite().unwrap();
        let im = rate_function(&cv, &labelled(&mid)).unwrap().finite().unwrap();
        prop_assert!(im <= 0.5 * (ia + ib) + 1e-10);
    }

    #[test]
    fn lambert_w_round_trip(w in -40.0f64..-1.0) {
        let x = w * w.exp();
        let back = lambert_w_minus1(x).unwrap();
        prop_assert!((back - w).abs() <= 1e-10 * w.abs(), "{w} vs {back}");
    }

    #[test]
    fn solver_beats_endpoints_for_random_theta(
        idx in 0usize..28,
        theta in 0.0f64..1.5,
    ) {
        let records = catalog();
        let profile = profile_from_group(&records[idx], theta, None).unwrap();
        let result = gamma_min(&profile).unwrap();
        prop_assert!(result.gamma >= -1e-12);
        prop_assert!((result.g_value - result.gamma - theta).abs() < 1e-12);
        prop_assert!(result.g_value <= result.g1.max(result.g2) + 1e-12);
    }

    #[test]
    fn gamma_invariant_under_class_splitting(
        idx in 0usize..28,
        theta in prop_oneof![Just(0.0), Just(0.5), Just(1.0)],
        frac in 0.1f64..0.9,
    ) {
        let records = catalog();
        let record = &records[idx];
        let base = profile_from_group(record, theta, None).unwrap();
        let reference = gamma_min(&base).unwrap();

        // Split every class into two labels carrying `frac` and `1-frac` of
        // its weight (same λ): the minimax value must not move.
        let mut c: BTreeMap<String, f64> = BTreeMap::new();
        let mut cp: BTreeMap<String, f64> = BTreeMap::new();
        let mut lambda_of: BTreeMap<String, u32> = BTreeMap::new();
        for label in &base.labels {
            let lambda = base.lambda_of[label];
            let cj = base.c.get(label).unwrap();
            for (suffix, part) in [("a", frac), ("b", 1.0 - frac)] {
                let key = format!("{label}{suffix}");
                c.insert(key.clone(), cj * part);
                cp.insert(key.clone(), cj * part * lambda as f64);
                lambda_of.insert(key, lambda);
            }
        }
        let split = RateProfile::new(
            RateVector::new(c).unwrap(),
            RateVector::new(cp).unwrap(),
            lambda_of,
            base.degree,
            theta,
        ).unwrap();
        let result = gamma_min(&split).unwrap();
        prop_assert!(
            (result.gamma - reference.gamma).abs() < 1e-9,
            "{}: {} vs {}", record.chm_name, result.gamma, reference.gamma
        );
    }

    #[test]
    fn root_counts_multiply_by_crt(
        coeffs in proptest::collection::vec(-30i64..30, 3..5),
        pi in 0usize..5,
        qi in 0usize..5,
        k in 1u32..3,
    ) {
        prop_assume!(pi != qi);
        prop_assume!(coeffs.last() != Some(&0));
        let primes = [2u64, 3, 5, 7, 11];
        let (p, q) = (primes[pi], primes[qi]);
        let f = match poly_from_i64(&coeffs) {
            Ok(f) => f,
            Err(_) => return Ok(()), // zero polynomial after trimming
        };
        let np = roots_mod_pk(&f, p, k).unwrap().len() as u64;
        let nq = roots_mod_pk(&f, q, k).unwrap().len() as u64;
        let m = (p.pow(k) * q.pow(k)) as u128;
        let reduced = f.reduced_mod(m);
        let mut brute = 0u64;
        for a in 0..m {
            let mut acc = 0u128;
            for c in reduced.iter().rev() {
                acc = (acc * a + c) % m;
            }
            if acc == 0 {
                brute += 1;
            }
        }
        prop_assert_eq!(np * nq, brute);
    }

    #[test]
    fn regular_primes_have_stable_root_counts(
        coeffs in proptest::collection::vec(-50i64..50, 3..6),
        k in 2u32..4,
    ) {
        prop_assume!(coeffs.last() != Some(&0));
        let f = match poly_from_i64(&coeffs) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let d = f.degree() as u64;
        let bad = (f.discriminant() * f.leading_coefficient() * f.content())
            .to_i128()
            .map(|v| v.unsigned_abs());
        for p in [3u64, 5, 7, 11, 13, 17] {
            let regular = bad.map_or(false, |b| b != 0 && b % p as u128 != 0);
            if !regular {
                continue;
            }
            let base = count_roots_mod_pk(&f, p, 1, false).unwrap();
            prop_assert!(base <= d);
            let lifted = count_roots_mod_pk(&f, p, k, false).unwrap();
            prop_assert_eq!(lifted, base, "p={}", p);
        }
    }

    #[test]
    fn two_squares_oracle_sums_to_one(m in 1u128..400) {
        let total: num_rational::BigRational = (0..m)
            .map(|a| density_oracle(SequenceKind::TwoSquares, a, m).unwrap())
            .sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn factorization_certifies_random_inputs(n in 1u128..u64::MAX as u128) {
        let factors = factorize_u128(n).unwrap();
        let product: u128 = factors.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(product, n);
        for w in factors.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for &(p, _) in &factors {
            prop_assert!(is_prime_u128(p));
        }
    }

    #[test]
    fn kfree_matches_naive(n in 2i64..5000, k in 2u32..4) {
        let claimed = is_kfree(&BigInt::from(n), k).unwrap();
        let mut naive = true;
        let mut b = 2i64;
        while b.pow(k) <= n {
            if n % b.pow(k) == 0 {
                naive = false;
                break;
            }
            b += 1;
        }
        prop_assert_eq!(claimed, naive);
    }

    #[test]
    fn simulation_partition_independent(
        trials in 10u64..200,
        cut in 1u64..9,
        seed in any::<u64>(),
    ) {
        let model = SanovModel::new(
            vec![2, 3, 5, 7],
            vec!["a".into(), "a".into(), "b".into(), "b".into()],
            RateVector::from_pairs([("a", 1.0), ("b", 2.0)]).unwrap(),
            RateVector::from_pairs([("a", 0.5), ("b", 0.5)]).unwrap(),
        ).unwrap();
        let whole = simulate_omega_model(&model, trials, seed).unwrap();
        let mid = trials * cut / 10 + 1;
        let left = simulate_omega_model_range(&model, 0, mid, seed).unwrap();
        let right = simulate_omega_model_range(&model, mid, trials, seed).unwrap();
        prop_assert_eq!(left.merge(right).unwrap(), whole);
    }

    #[test]
    fn counter_rng_bounded_and_pure(counter in any::<u64>(), bound in 1u64..1_000_000) {
        let rng = CounterRng::new(99);
        let v = rng.below(counter, 7, bound);
        prop_assert!(v < bound);
        prop_assert_eq!(v, rng.below(counter, 7, bound));
        let u = rng.uniform(counter, 3);
        prop_assert!((0.0..1.0).contains(&u));
    }
}

#[test]
fn catalog_profiles_are_valid_for_all_groups() {
    // Deterministic sweep kept alongside the random ones: every catalog
    // group yields a well-formed profile whose entropy identity holds.
    let records = catalog();
    assert_eq!(records.len(), 28);
    for record in records {
        let profile = profile_from_group(record, 1.0, None).unwrap();
        let i_f = rate_function(&profile.c, &profile.cprime)
            .unwrap()
            .finite()
            .unwrap();
        assert!((i_f - record.entropy).abs() < 1e-12, "{}", record.chm_name);
        assert!(!BigInt::from(record.order).is_zero());
    }
}
