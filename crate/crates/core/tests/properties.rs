//! Randomized property checks. Seeds are pinned; set DGALOIS_TEST_SEED to
//! explore others.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgalois::field::{CycloField, FieldElem};
use dgalois::roots::{Kind, RootSystem};
use dgalois::weyl::{find_strictly_transitive, is_strictly_transitive, weyl_action, word_perm, CycleType, Perm};

fn seed() -> u64 {
    std::env::var("DGALOIS_TEST_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_611)
}

fn random_elem(f: &Arc<CycloField>, rng: &mut ChaCha8Rng) -> FieldElem {
    let coeffs: Vec<BigRational> = (0..f.degree())
        .map(|_| {
            if rng.gen_bool(0.3) {
                BigRational::from_integer(0.into())
            } else {
                BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=5)))
            }
        })
        .collect();
    f.from_coeffs(&coeffs)
}

#[test]
fn field_axioms_hold_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let fields = [CycloField::new(12).unwrap(), CycloField::new(15).unwrap(), CycloField::new(8).unwrap()];
    for i in 0..1000 {
        let f = &fields[i % fields.len()];
        let (a, b, c) = (random_elem(f, &mut rng), random_elem(f, &mut rng), random_elem(f, &mut rng));
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c), "additive associativity, sample {i}");
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c), "multiplicative associativity, sample {i}");
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c), "distributivity, sample {i}");
        assert_eq!(&a * &b, &b * &a, "commutativity, sample {i}");
        assert!((&a - &a).is_zero());
        if !a.is_zero() && i % 10 == 0 {
            assert!((&a * &a.inv().unwrap()).is_one(), "inverse, sample {i}");
        }
    }
}

/// Brute force over subsets: some type in the set has no union of cycles
/// with exactly k points, for every 0 < k < m.
fn transitive_oracle(cts: &[Vec<usize>], m: usize) -> bool {
    let sums = |parts: &[usize]| {
        let mut s = vec![false; m + 1];
        for mask in 0u32..(1 << parts.len()) {
            let t: usize = parts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).sum();
            s[t] = true;
        }
        s
    };
    let tables: Vec<Vec<bool>> = cts.iter().map(|p| sums(p)).collect();
    (1..m).all(|k| tables.iter().any(|t| !t[k]))
}

fn partition(m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=m, 1..=m).prop_map(move |raw| {
        let mut left = m;
        let mut parts = Vec::new();
        for r in raw {
            if left == 0 {
                break;
            }
            let p = r.min(left);
            parts.push(p);
            left -= p;
        }
        if left > 0 {
            parts.push(left);
        }
        parts
    })
}

fn transitivity_case() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (2usize..=10).prop_flat_map(|m| (Just(m), prop::collection::vec(partition(m), 1..=3)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 500,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed()),
        ..ProptestConfig::default()
    })]

    #[test]
    fn strict_transitivity_matches_subset_sums((m, sets) in transitivity_case()) {
        let cts: Vec<CycleType> = sets.iter().map(|p| CycleType::new(p.clone())).collect();
        let (ok, cert) = is_strictly_transitive(&cts, m);
        prop_assert_eq!(ok, transitive_oracle(&sets, m));
        prop_assert!(cert.replay(&cts));
        // order of the set is irrelevant
        let rev: Vec<CycleType> = cts.iter().rev().cloned().collect();
        prop_assert_eq!(is_strictly_transitive(&rev, m).0, ok);
    }
}

fn orbit_of_zero(perms: &[Perm]) -> usize {
    let m = perms[0].degree();
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

/// One concrete element per class of a strictly transitive set, each
/// conjugated by a random group element, always generates a transitive group.
#[test]
fn sampled_representatives_generate_transitive_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    for (kind, rank) in [(Kind::A, 4), (Kind::C, 3), (Kind::D, 4), (Kind::B, 3), (Kind::E6, 6)] {
        let rs = RootSystem::new(kind, rank).unwrap();
        let highest = rs.minuscule_weights()[0].clone();
        let search = find_strictly_transitive(kind, rank, &highest, Some(2), None).unwrap();
        let (_, _, gens) = weyl_action(kind, rank, &highest).unwrap();
        assert!(!search.sets.is_empty(), "{kind}{rank}");
        for _ in 0..100 {
            let set = &search.sets[rng.gen_range(0..search.sets.len())];
            let perms: Vec<Perm> = set
                .iter()
                .map(|&i| {
                    let w = word_perm(&gens, &search.enumeration.types[i].witness_word).unwrap();
                    let len = rng.gen_range(0..20);
                    let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=rank)).collect();
                    let g = word_perm(&gens, &word).unwrap();
                    let c = g.compose(&w).compose(&g.inverse());
                    assert_eq!(c.cycle_type(), search.enumeration.types[i].parts);
                    c
                })
                .collect();
            assert_eq!(orbit_of_zero(&perms), gens[0].degree(), "{kind}{rank} set {set:?}");
        }
    }
}
