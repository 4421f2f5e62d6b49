use std::collections::HashMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use shapecount::{
    count_shape, enumerate_beta, member, normalize, series_constant, uniqueness_condition, Mode,
    PrimeTable, Shape, ShapeSignature,
};

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| PrimeTable::with_factor_limit(2_000_000, 1_000_000).unwrap())
}

fn shapes() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=4, 1..=4)
}

/// Every way of writing `n <= limit` as an ordered product of prime powers
/// with the given exponents, keyed by value.
fn representations(limit: u64, exps: &[u32], distinct: bool) -> HashMap<u64, usize> {
    fn go(
        primes: &[u32],
        exps: &[u32],
        limit: u64,
        acc: u64,
        used: &mut Vec<u64>,
        distinct: bool,
        out: &mut HashMap<u64, usize>,
    ) {
        let Some((&e, rest)) = exps.split_first() else {
            *out.entry(acc).or_default() += 1;
            return;
        };
        for &p in primes {
            let p = u64::from(p);
            let Some(v) = p.checked_pow(e).and_then(|q| q.checked_mul(acc)) else {
                break;
            };
            if v > limit {
                break;
            }
            if distinct && used.contains(&p) {
                continue;
            }
            used.push(p);
            go(primes, rest, limit, v, used, distinct, out);
            used.pop();
        }
    }
    let mut out = HashMap::new();
    go(
        table().primes(),
        exps,
        limit,
        1,
        &mut Vec::new(),
        distinct,
        &mut out,
    );
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_ignores_order(mut exps in shapes(), seed in any::<u64>()) {
        let a = normalize(&Shape::new(exps.clone()).unwrap());
        let n = exps.len();
        exps.rotate_left((seed as usize) % n);
        exps.swap(0, (seed as usize / 7) % n);
        prop_assert_eq!(a, normalize(&Shape::new(exps).unwrap()));
    }

    #[test]
    fn counts_are_consistent(exps in shapes(), x in 1u64..200_000, dx in 0u64..5_000) {
        let t = table();
        let s = Shape::new(exps.clone()).unwrap();
        let sigma = count_shape(x, &s, Mode::Sigma, t).unwrap().count;
        let pi = count_shape(x, &s, Mode::Pi, t).unwrap().count;
        prop_assert!(pi <= sigma);
        prop_assert!(count_shape(x + dx, &s, Mode::Sigma, t).unwrap().count >= sigma);
        let mut rev = exps.clone();
        rev.reverse();
        let r = Shape::new(rev).unwrap();
        prop_assert_eq!(count_shape(x, &r, Mode::Pi, t).unwrap().count, pi);
        let min = 1u64.checked_shl(s.total() as u32).unwrap_or(u64::MAX);
        if min > 1 && min <= 1 << 40 {
            prop_assert_eq!(count_shape(min - 1, &s, Mode::Sigma, t).unwrap().count, 0);
            if min <= 2_000_000 {
                prop_assert_eq!(count_shape(min, &s, Mode::Sigma, t).unwrap().count, 1);
            }
        }
    }

    #[test]
    fn membership_relations(exps in shapes(), n in 2u64..1_000_000) {
        let t = table();
        let s = Shape::new(exps).unwrap();
        let f = t.factorize(n).unwrap();
        if member(n, &s, Mode::Pi, &f).unwrap() {
            prop_assert!(member(n, &s, Mode::Sigma, &f).unwrap());
        }
    }

    #[test]
    fn ones_shapes_match_omega(k in 1usize..=6, n in 2u64..1_000_000) {
        let t = table();
        let s = Shape::ones(k).unwrap();
        let f = t.factorize(n).unwrap();
        prop_assert_eq!(member(n, &s, Mode::Sigma, &f).unwrap(), f.big_omega() as usize == k);
        let squarefree = f.big_omega() as usize == f.omega();
        prop_assert_eq!(member(n, &s, Mode::Pi, &f).unwrap(), squarefree && f.omega() == k);
    }
}

#[test]
fn sigma_membership_matches_tuple_enumeration() {
    let t = table();
    let limit = 10_000u64;
    // all multisets of positive exponents with sum <= 8
    fn multisets(max_part: u32, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for part in (1..=max_part.min(left)).rev() {
            prefix.push(part);
            multisets(part, left - part, prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    multisets(8, 8, &mut Vec::new(), &mut all);
    let facts: Vec<_> = (2..=limit).map(|n| t.factorize(n).unwrap()).collect();
    for exps in all {
        let s = Shape::new(exps.clone()).unwrap();
        for (mode, distinct) in [(Mode::Sigma, false), (Mode::Pi, true)] {
            let reps = representations(limit, &exps, distinct);
            for (i, f) in facts.iter().enumerate() {
                let n = i as u64 + 2;
                assert_eq!(
                    member(n, &s, mode, f).unwrap(),
                    reps.contains_key(&n),
                    "n={n} shape={exps:?} {mode}"
                );
            }
            let count = count_shape(limit, &s, mode, t).unwrap().count;
            assert_eq!(count as usize, reps.len(), "shape={exps:?} {mode}");
        }
    }
}

#[test]
fn uniqueness_matches_single_representation() {
    // a representation assigns one prime to each (labelled) slot of beta
    let suite: [&[u32]; 10] = [
        &[3],
        &[3, 5],
        &[2, 3],
        &[2, 2],
        &[3, 3],
        &[2, 3, 5],
        &[3, 5, 19],
        &[4, 6],
        &[2, 4, 6],
        &[2, 5, 9],
    ];
    for beta in suite {
        let reps = representations(1_000_000, beta, false);
        let single = reps.values().all(|&r| r == 1);
        assert_eq!(uniqueness_condition(beta), single, "{beta:?}");
    }
}

#[test]
fn pi_constant_below_sigma_constant() {
    let t = table();
    for (alpha, beta) in [
        (1u32, vec![3u32]),
        (1, vec![2, 2]),
        (1, vec![3, 4]),
        (2, vec![5, 7]),
    ] {
        let sig = ShapeSignature { alpha, k: 1, beta };
        let tol = 1e-6;
        let s = series_constant(&sig, Mode::Sigma, tol, t).unwrap();
        let p = series_constant(&sig, Mode::Pi, tol, t).unwrap();
        assert!(p.value <= s.value + s.tail_bound + p.tail_bound, "{sig:?}");
    }
}

#[test]
fn brackets_at_two_tolerances_overlap() {
    let t = table();
    let sig = ShapeSignature {
        alpha: 1,
        k: 1,
        beta: vec![2, 3],
    };
    let a = series_constant(&sig, Mode::Pi, 1e-4, t).unwrap();
    let b = series_constant(&sig, Mode::Pi, 1e-7, t).unwrap();
    assert!(a.truncation_threshold <= b.truncation_threshold);
    assert!(a.value <= b.value);
    assert!(b.value <= a.value + a.tail_bound && a.value <= b.value + b.tail_bound);
    let members = enumerate_beta(1000, &[2, 3], Mode::Pi, t).unwrap();
    assert_eq!(members, vec![72, 108, 200, 392, 500, 675, 968]);
}
