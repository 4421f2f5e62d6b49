//! Series constants `sum_{m in P_beta} m^(-1/alpha)`.
//!
//! Members `m <= T` are summed exactly. Everything above `T` is bounded by the
//! same sum over canonical prime tuples (nondecreasing within each group of
//! equal exponents) whose product exceeds `T`. Every member has at least one
//! canonical tuple, so this overcounts the true remainder. The tuple tail is
//! evaluated slot by slot: small outer primes recurse, and once the outer
//! prime alone forces the product past `T` the inner slots contribute their
//! full prime zeta products.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{required_prime_bound, DistinctWalk};
use crate::primes::{iroot, PrimeTable};
use crate::shapes::{merge_profiles, min_distinct_value, Mode, ShapeSignature};

use super::zeta::{check_tolerance, Compensated, PrimePowerSums};
use super::SeriesConstant;

// give up once the threshold would leave u128
const MAX_THRESHOLD: u128 = 1 << 120;

struct Weights<'t> {
    alpha: u32,
    sums: BTreeMap<u32, PrimePowerSums<'t>>,
}

impl<'t> Weights<'t> {
    fn new(table: &'t PrimeTable, alpha: u32, exps: impl IntoIterator<Item = u32>) -> Self {
        let mut sums = BTreeMap::new();
        for e in exps {
            sums.entry(e)
                .or_insert_with(|| PrimePowerSums::new(table, f64::from(e) / f64::from(alpha)));
        }
        Weights { alpha, sums }
    }

    fn get(&self, e: u32) -> &PrimePowerSums<'t> {
        &self.sums[&e]
    }
}

/// Upper bound on the canonical-tuple tail above `threshold`.
struct TupleTail<'a, 't> {
    table: &'t PrimeTable,
    weights: &'a Weights<'t>,
    exps: Vec<u32>,
    // upper bound on the full sum over all tuples of slots i.., per i
    full_from: Vec<f64>,
    // sum of exponents strictly after slot i
    rest: Vec<u32>,
}

impl<'a, 't> TupleTail<'a, 't> {
    fn new(table: &'t PrimeTable, weights: &'a Weights<'t>, exps: &[u32]) -> Self {
        let r = exps.len();
        let mut full_from = vec![1.0; r + 1];
        for i in (0..r).rev() {
            full_from[i] = full_from[i + 1] * weights.get(exps[i]).total().hi;
        }
        let rest = (0..r).map(|i| exps[i + 1..].iter().sum()).collect();
        TupleTail {
            table,
            weights,
            exps: exps.to_vec(),
            full_from,
            rest,
        }
    }

    fn bound(&self, threshold: u128) -> f64 {
        self.slot(0, threshold, 0)
    }

    // canonical tuples over slots `i..` with product > rem, primes >= lo
    fn slot(&self, i: usize, rem: u128, lo: u64) -> f64 {
        let e = self.exps[i];
        let sums = self.weights.get(e);
        let floor_lo = lo.saturating_sub(1) as f64;
        if i + 1 == self.exps.len() {
            let y = iroot(rem, e) as f64;
            return sums.tail(y.max(floor_lo)).hi;
        }
        // beyond `cut` the outer prime alone pushes the product past rem
        let rest = self.rest[i];
        let cut = if rest >= 128 {
            0
        } else {
            iroot(rem >> rest, e).min(u64::MAX as u128) as u64
        };
        let mut acc = Compensated::default();
        acc.add(sums.tail((cut as f64).max(floor_lo)).hi * self.full_from[i + 1]);
        let same_group = self.exps[i + 1] == e;
        let mut idx = self.table.pi_unchecked(lo.saturating_sub(1)) as usize;
        while let Some(p) = self.table.nth(idx) {
            if p > cut {
                break;
            }
            idx += 1;
            let w = (p as f64).powf(-sums.s());
            let next_lo = if same_group { p } else { 0 };
            acc.add(w * self.slot(i + 1, rem / (p as u128).pow(e), next_lo));
        }
        acc.value()
    }
}

/// Exact sum of `m^(-1/alpha)` over distinct-prime members `m <= bound` of a
/// profile, with the innermost slot taken from prefix sums.
fn weighted_sum(
    table: &PrimeTable,
    weights: &Weights<'_>,
    profile: &[u32],
    bound: u128,
) -> Result<f64> {
    let walk = DistinctWalk::new(table, profile);
    let inv_alpha = -1.0 / f64::from(weights.alpha);
    let mut acc = Compensated::default();
    walk.run(bound, &mut |leaf| {
        let b = leaf.top();
        if b <= leaf.lo {
            return Ok(());
        }
        if b > table.limit() {
            return Err(Error::Capacity {
                what: "series enumeration",
                needed: b,
                limit: table.limit(),
            });
        }
        let sums = weights.get(leaf.exp);
        let mut inner = sums.partial(b) - sums.partial(leaf.lo);
        for c in leaf.collisions(b) {
            inner -= (c as f64).powf(-sums.s());
        }
        acc.add((leaf.prod as f64).powf(inv_alpha) * inner);
        Ok(())
    })?;
    Ok(acc.value())
}

/// `sum_{m in P_beta^mode} m^(-1/alpha)` to within `tolerance`.
///
/// Returns the exact partial sum over members `m <= T` as `value` and the
/// tuple-tail bound as `tail_bound`, where `T` is the first power of two
/// (starting from the smallest member) whose tail bound meets the tolerance.
pub fn series_constant(
    signature: &ShapeSignature,
    mode: Mode,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<SeriesConstant> {
    check_tolerance(tolerance)?;
    if signature.beta.is_empty() {
        return Ok(SeriesConstant::one());
    }
    if signature.alpha == 0 || signature.beta.iter().any(|&b| b <= signature.alpha) {
        return Err(Error::InvalidShape(
            "beta entries must exceed alpha for the series to converge".into(),
        ));
    }
    let mut exps = signature.beta.clone();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    let profiles = match mode {
        Mode::Pi => vec![exps.clone()],
        Mode::Sigma => merge_profiles(&exps, u128::MAX),
    };
    let weights = Weights::new(
        table,
        signature.alpha,
        profiles
            .iter()
            .flatten()
            .copied()
            .chain(exps.iter().copied()),
    );
    let tail = TupleTail::new(table, &weights, &exps);

    let mut threshold = min_distinct_value(&[exps.iter().sum()]).unwrap_or(MAX_THRESHOLD);
    let mut best = f64::INFINITY;
    loop {
        let needed = required_prime_bound(threshold, &exps);
        if needed > table.limit() || threshold >= MAX_THRESHOLD {
            return Err(Error::Tolerance {
                requested: tolerance,
                achievable: best,
                limit: table.limit(),
                needed: needed.max(table.limit().saturating_mul(2)),
            });
        }
        let bound = tail.bound(threshold);
        best = bound;
        if bound <= tolerance {
            break;
        }
        threshold *= 2;
    }

    let mut value = Compensated::default();
    for profile in &profiles {
        value.add(weighted_sum(table, &weights, profile, threshold)?);
    }
    Ok(SeriesConstant {
        value: value.value(),
        tail_bound: best,
        truncation_threshold: threshold,
    })
}
