//! Exact counting of shape members.
//!
//! Pi-mode members have a unique representation once the primes inside each
//! group of equal exponents are listed in increasing order, so they are
//! counted by walking such canonical prime tuples. The outermost slots carry
//! the largest exponents and the innermost slot is resolved with one
//! `pi(b) - pi(lo)` lookup, minus the already chosen primes that fall in range.
//!
//! A Sigma-mode member has exactly one exponent multiset, and that multiset is
//! one of the finitely many ways of merging the shape's slots. Sigma counts are
//! therefore sums of Pi counts over those merge profiles, which are disjoint.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{iroot, pow_exceeds, PrimeTable};
use crate::shapes::{merge_profiles, Mode, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub x: u64,
    pub shape: Shape,
    pub mode: Mode,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsPair {
    pub lower: u64,
    pub upper: u64,
}

/// Largest prime any slot can need when enumerating values `<= x`: the slot
/// with exponent `e` is largest when every other slot holds the prime 2.
pub fn required_prime_bound(x: u128, exponents: &[u32]) -> u64 {
    let total: u64 = exponents.iter().map(|&e| u64::from(e)).sum();
    exponents
        .iter()
        .map(|&e| {
            let others = total - u64::from(e);
            if others >= 128 {
                0
            } else {
                iroot(x >> others, e).min(u64::MAX as u128) as u64
            }
        })
        .max()
        .unwrap_or(0)
}

fn ensure_capacity(table: &PrimeTable, needed: u64, what: &'static str) -> Result<()> {
    if needed > table.limit() {
        Err(Error::Capacity {
            what,
            needed,
            limit: table.limit(),
        })
    } else {
        Ok(())
    }
}

/// Context handed to the innermost slot of a canonical walk.
pub(crate) struct Leaf<'c> {
    /// Remaining budget: the innermost prime power must be `<= rem`.
    pub rem: u128,
    /// Exponent of the innermost slot.
    pub exp: u32,
    /// Exclusive lower bound on the innermost prime (0 if unconstrained).
    pub lo: u64,
    /// Primes already placed in the outer slots.
    pub chosen: &'c [u64],
    /// Product of the outer prime powers.
    pub prod: u128,
}

impl Leaf<'_> {
    /// Largest admissible innermost prime, ignoring primality.
    pub fn top(&self) -> u64 {
        iroot(self.rem, self.exp).min(u64::MAX as u128) as u64
    }

    /// Chosen primes in `(lo, b]`, which the innermost slot must skip.
    pub fn collisions(&self, b: u64) -> impl Iterator<Item = u64> + '_ {
        let lo = self.lo;
        self.chosen
            .iter()
            .copied()
            .filter(move |&c| c > lo && c <= b)
    }
}

/// Walks canonical tuples of pairwise distinct primes for an exponent
/// multiset: primes strictly increase within a group of equal exponents.
pub(crate) struct DistinctWalk<'t> {
    table: &'t PrimeTable,
    exps: Vec<u32>,
    // slot i continues the group of slot i - 1
    continues: Vec<bool>,
    // slots after i in the same group
    group_tail: Vec<u32>,
    // sum of exponents in groups after slot i's group
    later: Vec<u32>,
}

impl<'t> DistinctWalk<'t> {
    pub fn new(table: &'t PrimeTable, exponents: &[u32]) -> Self {
        let mut exps = exponents.to_vec();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let r = exps.len();
        let continues: Vec<bool> = (0..r).map(|i| i > 0 && exps[i] == exps[i - 1]).collect();
        let group_tail = (0..r)
            .map(|i| exps[i + 1..].iter().take_while(|&&e| e == exps[i]).count() as u32)
            .collect();
        let later = (0..r)
            .map(|i| exps[i..].iter().filter(|&&e| e < exps[i]).sum())
            .collect();
        DistinctWalk {
            table,
            exps,
            continues,
            group_tail,
            later,
        }
    }

    pub fn run<F>(&self, bound: u128, leaf: &mut F) -> Result<()>
    where
        F: FnMut(&Leaf<'_>) -> Result<()>,
    {
        if self.exps.is_empty() {
            return Ok(());
        }
        let mut chosen = Vec::with_capacity(self.exps.len());
        self.descend(0, bound, 0, 1, &mut chosen, leaf)
    }

    fn descend<F>(
        &self,
        slot: usize,
        rem: u128,
        lo: u64,
        prod: u128,
        chosen: &mut Vec<u64>,
        leaf: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&Leaf<'_>) -> Result<()>,
    {
        let exp = self.exps[slot];
        if slot + 1 == self.exps.len() {
            return leaf(&Leaf {
                rem,
                exp,
                lo,
                chosen,
                prod,
            });
        }
        // p^(exp * (1 + same-group slots left)) * 2^(later groups) <= rem
        let span = exp * (1 + self.group_tail[slot]);
        let later = self.later[slot];
        if later >= 128 {
            return Ok(());
        }
        let max_p = iroot(rem >> later, span).min(u64::MAX as u128) as u64;
        if max_p <= lo {
            return Ok(());
        }
        ensure_capacity(self.table, max_p, "prime enumeration")?;
        let next_continues = self.continues[slot + 1];
        let mut idx = self.table.pi_unchecked(lo) as usize;
        while let Some(p) = self.table.nth(idx) {
            if p > max_p {
                break;
            }
            idx += 1;
            if chosen.contains(&p) {
                continue;
            }
            let power = (p as u128).pow(exp);
            chosen.push(p);
            let next_lo = if next_continues { p } else { 0 };
            let res = self.descend(slot + 1, rem / power, next_lo, prod * power, chosen, leaf);
            chosen.pop();
            res?;
        }
        Ok(())
    }

    /// Number of canonical tuples with product `<= bound`.
    pub fn count(&self, bound: u128) -> Result<u64> {
        let table = self.table;
        let mut total = 0u64;
        self.run(bound, &mut |leaf| {
            let b = leaf.top();
            if b <= leaf.lo {
                return Ok(());
            }
            ensure_capacity(table, b, "prime counting")?;
            let hits = table.pi_unchecked(b) - table.pi_unchecked(leaf.lo);
            let skipped = leaf.collisions(b).count() as u64;
            total += hits - skipped;
            Ok(())
        })?;
        Ok(total)
    }

    /// Calls `visit` with every member value `<= bound`, in no particular order.
    pub fn for_each_value<V>(&self, bound: u128, visit: &mut V) -> Result<()>
    where
        V: FnMut(u128),
    {
        let table = self.table;
        self.run(bound, &mut |leaf| {
            let b = leaf.top();
            if b <= leaf.lo {
                return Ok(());
            }
            ensure_capacity(table, b, "prime enumeration")?;
            let mut idx = table.pi_unchecked(leaf.lo) as usize;
            while let Some(q) = table.nth(idx) {
                if q > b {
                    break;
                }
                idx += 1;
                if !leaf.chosen.contains(&q) {
                    visit(leaf.prod * (q as u128).pow(leaf.exp));
                }
            }
            Ok(())
        })
    }
}

/// `|{n <= x : Omega(n) = k}|` over nondecreasing prime tuples.
pub fn count_sigma_k(x: u64, k: u32, table: &PrimeTable) -> Result<u64> {
    count_almost_primes(x, k, table, false)
}

/// `|{n <= x : n squarefree, omega(n) = k}|` over strictly increasing prime tuples.
pub fn count_pi_k(x: u64, k: u32, table: &PrimeTable) -> Result<u64> {
    count_almost_primes(x, k, table, true)
}

fn count_almost_primes(x: u64, k: u32, table: &PrimeTable, distinct: bool) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if k >= 64 || x >> k == 0 {
        return Ok(0);
    }
    ensure_capacity(table, x >> (k - 1), "almost-prime counting")?;
    Ok(almost_rec(table, k, x, 0, distinct))
}

// primes before index `from` are excluded
fn almost_rec(table: &PrimeTable, left: u32, rem: u64, from: usize, distinct: bool) -> u64 {
    if left == 1 {
        let upto = table.pi_unchecked(rem) as usize;
        return upto.saturating_sub(from) as u64;
    }
    let mut total = 0;
    let mut idx = from;
    while let Some(p) = table.nth(idx) {
        if pow_exceeds(p as u128, left, rem as u128) {
            break;
        }
        let next = if distinct { idx + 1 } else { idx };
        total += almost_rec(table, left - 1, rem / p, next, distinct);
        idx += 1;
    }
    total
}

/// Exact number of distinct integers `n <= x` of the given shape.
pub fn count_shape(x: u64, shape: &Shape, mode: Mode, table: &PrimeTable) -> Result<CountResult> {
    let count = count_values(x as u128, shape.exponents(), mode, table)?;
    Ok(CountResult {
        x,
        shape: shape.clone(),
        mode,
        count,
    })
}

pub(crate) fn count_values(
    bound: u128,
    exponents: &[u32],
    mode: Mode,
    table: &PrimeTable,
) -> Result<u64> {
    ensure_capacity(
        table,
        required_prime_bound(bound, exponents),
        "shape counting",
    )?;
    match mode {
        Mode::Pi => DistinctWalk::new(table, exponents).count(bound),
        Mode::Sigma => merge_profiles(exponents, bound)
            .iter()
            .map(|profile| DistinctWalk::new(table, profile).count(bound))
            .sum(),
    }
}

/// All distinct members `m <= limit` of the shape `beta`, ascending.
pub fn enumerate_beta(
    limit: u64,
    beta: &[u32],
    mode: Mode,
    table: &PrimeTable,
) -> Result<Vec<u64>> {
    if beta.is_empty() || beta.contains(&0) {
        return Err(Error::InvalidShape(
            "beta must be nonempty with entries >= 1".into(),
        ));
    }
    let bound = limit as u128;
    ensure_capacity(table, required_prime_bound(bound, beta), "beta enumeration")?;
    let profiles = match mode {
        Mode::Pi => vec![beta.to_vec()],
        Mode::Sigma => merge_profiles(beta, bound),
    };
    let mut values = BTreeSet::new();
    for profile in &profiles {
        DistinctWalk::new(table, profile).for_each_value(bound, &mut |v| {
            values.insert(v as u64);
        })?;
    }
    Ok(values.into_iter().collect())
}

/// Hyperbola-method sandwich for the Sigma count of `shape`:
/// `sum_m pi_k((x/m)^(1/alpha)) <= sigma_shape(x) <= sum_m sigma_k((x/m)^(1/alpha))`,
/// with `m` over the Sigma members of `beta` up to `x`.
pub fn hyperbola_bounds(x: u64, shape: &Shape, table: &PrimeTable) -> Result<BoundsPair> {
    let sig = shape.normalize();
    if sig.beta.is_empty() {
        return Err(Error::Domain(
            "hyperbola bounds need a shape with two distinct exponents".into(),
        ));
    }
    let mut lower = 0;
    let mut upper = 0;
    for m in enumerate_beta(x, &sig.beta, Mode::Sigma, table)? {
        let y = iroot((x / m) as u128, sig.alpha) as u64;
        lower += count_pi_k(y, sig.k, table)?;
        upper += count_sigma_k(y, sig.k, table)?;
    }
    Ok(BoundsPair { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn shape(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn table() -> PrimeTable {
        PrimeTable::build(200_000).unwrap()
    }

    /// Ordered prime tuples with product <= x, collected as a value set.
    fn tuple_values(x: u64, exps: &[u32], distinct: bool, primes: &[u32]) -> HashSet<u64> {
        fn go(
            x: u64,
            exps: &[u32],
            distinct: bool,
            primes: &[u32],
            acc: u64,
            used: &mut Vec<u64>,
            out: &mut HashSet<u64>,
        ) {
            let Some((&e, rest)) = exps.split_first() else {
                out.insert(acc);
                return;
            };
            for &p in primes {
                let p = p as u64;
                let Some(v) = p.checked_pow(e).and_then(|pe| acc.checked_mul(pe)) else {
                    break;
                };
                if v > x {
                    break;
                }
                if distinct && used.contains(&p) {
                    continue;
                }
                used.push(p);
                go(x, rest, distinct, primes, v, used, out);
                used.pop();
            }
        }
        let mut out = HashSet::new();
        go(x, exps, distinct, primes, 1, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn almost_prime_examples() {
        let t = table();
        assert_eq!(count_sigma_k(10, 2, &t).unwrap(), 4);
        assert_eq!(count_sigma_k(10, 1, &t).unwrap(), 4);
        assert_eq!(count_sigma_k(1, 1, &t).unwrap(), 0);
        assert_eq!(count_pi_k(10, 2, &t).unwrap(), 2);
        assert_eq!(count_pi_k(29, 3, &t).unwrap(), 0);
        assert_eq!(count_pi_k(30, 3, &t).unwrap(), 1);
        assert!(count_pi_k(10, 0, &t).is_err());
    }

    #[test]
    fn count_shape_examples() {
        let t = table();
        let c = |x, s: &str, m| count_shape(x, &shape(s), m, &t).unwrap().count;
        assert_eq!(c(100, "1,3", Mode::Sigma), 7);
        assert_eq!(c(100, "1,3", Mode::Pi), 5);
        assert_eq!(c(15, "1,3", Mode::Sigma), 0);
        assert_eq!(c(16, "1,3", Mode::Sigma), 1);
        assert_eq!(c(10, "1,1", Mode::Sigma), 4);
        assert_eq!(c(1, "1", Mode::Sigma), 0);
    }

    #[test]
    fn enumerate_beta_examples() {
        let t = table();
        assert_eq!(
            enumerate_beta(100, &[3], Mode::Sigma, &t).unwrap(),
            vec![8, 27]
        );
        assert_eq!(
            enumerate_beta(100, &[3], Mode::Pi, &t).unwrap(),
            vec![8, 27]
        );
        assert_eq!(
            enumerate_beta(500, &[2, 2], Mode::Sigma, &t).unwrap(),
            vec![16, 36, 81, 100, 196, 225, 441, 484]
        );
        assert_eq!(
            enumerate_beta(500, &[2, 2], Mode::Pi, &t).unwrap(),
            vec![36, 100, 196, 225, 441, 484]
        );
        assert!(enumerate_beta(100, &[], Mode::Pi, &t).is_err());
    }

    #[test]
    fn hyperbola_examples() {
        let t = table();
        let b = hyperbola_bounds(100, &shape("1,3"), &t).unwrap();
        assert_eq!(b, BoundsPair { lower: 7, upper: 7 });
        let b = hyperbola_bounds(15, &shape("1,3"), &t).unwrap();
        assert_eq!(b, BoundsPair { lower: 0, upper: 0 });
        assert!(hyperbola_bounds(100, &shape("2,2"), &t).is_err());
    }

    #[test]
    fn capacity_error_names_needed_limit() {
        let t = PrimeTable::build(100).unwrap();
        let err = count_shape(10_000, &shape("1,3"), Mode::Pi, &t).unwrap_err();
        assert_eq!(err.needed_limit(), Some(1250));
    }

    #[test]
    fn agrees_with_tuple_enumeration() {
        let t = table();
        let x = 20_000;
        for s in [
            "1", "2", "1,1", "1,2", "1,3", "2,2", "1,1,2", "1,2,3", "2,3", "1,1,1,1", "4,1,1",
        ] {
            let sh = shape(s);
            for (mode, distinct) in [(Mode::Sigma, false), (Mode::Pi, true)] {
                let expected = tuple_values(x, sh.exponents(), distinct, t.primes());
                let got = count_shape(x, &sh, mode, &t).unwrap().count;
                assert_eq!(got, expected.len() as u64, "shape {s} {mode}");
                if sh.len() <= 3 {
                    let listed = enumerate_beta(x, sh.exponents(), mode, &t).unwrap();
                    let mut want: Vec<u64> = expected.into_iter().collect();
                    want.sort_unstable();
                    assert_eq!(listed, want, "shape {s} {mode}");
                }
            }
        }
    }

    #[test]
    fn huge_exponents_count_zero() {
        let t = table();
        assert_eq!(
            count_shape(u64::MAX, &shape("64"), Mode::Sigma, &t)
                .unwrap()
                .count,
            0
        );
        assert_eq!(
            count_shape(1 << 40, &shape("40"), Mode::Pi, &t)
                .unwrap()
                .count,
            1
        );
        assert_eq!(
            count_shape(u64::MAX, &shape("1,200"), Mode::Sigma, &t)
                .unwrap()
                .count,
            0
        );
    }
}
