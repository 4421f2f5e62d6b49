//! Prime infrastructure: a segmented sieve, a least-prime-factor table for
//! factorization, and exact prime counting by binary search.
//!
//! Memory: the primes list costs 4 bytes per prime (about `0.2 * limit /
//! ln(limit)` bytes in total), the least-prime-factor table 2 bytes per integer
//! up to the factorization limit. The sieve limit is capped at
//! [`MAX_SIEVE_LIMIT`] so that every prime fits in a `u32`.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`PrimeTable::build`].
pub const MAX_SIEVE_LIMIT: u64 = u32::MAX as u64;

/// Default upper end of the least-prime-factor table.
pub const DEFAULT_FACTOR_LIMIT: u64 = 10_000_000;

/// Numbers per sieve segment (odd-only storage halves the byte count).
const SEGMENT_SPAN: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs. Primality of the
    /// bases is not checked; ordering and exponents are.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Inconsistent(
                "primes must be strictly ascending".into(),
            ));
        }
        if pairs.iter().any(|&(p, e)| p < 2 || e == 0) {
            return Err(Error::Inconsistent(
                "primes must be >= 2 and exponents >= 1".into(),
            ));
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().map(|&(_, e)| e)
    }

    /// Product of the prime powers, `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        self.pairs
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    /// Total number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.exponents().sum()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    pub(crate) fn check_value(&self, n: u64) -> Result<()> {
        match self.value() {
            Some(v) if v == n => Ok(()),
            other => Err(Error::Inconsistent(format!(
                "factorization multiplies to {other:?}, expected {n}"
            ))),
        }
    }
}

/// Primes up to `limit` and least prime factors up to `factor_limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
    factor_limit: u64,
    // least prime factor of composite n; 0 marks primes (and 0, 1). Composite
    // n <= 2^32 always has a factor below 2^16.
    lpf: Vec<u16>,
}

impl PrimeTable {
    /// Sieves primes up to `limit`, with a least-prime-factor table up to
    /// `min(limit, DEFAULT_FACTOR_LIMIT)`.
    pub fn build(limit: u64) -> Result<Self> {
        Self::with_factor_limit(limit, DEFAULT_FACTOR_LIMIT)
    }

    pub fn with_factor_limit(limit: u64, factor_limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Budget {
                requested: limit,
                max: MAX_SIEVE_LIMIT,
            });
        }
        let factor_limit = factor_limit.min(limit);
        Ok(PrimeTable {
            limit,
            primes: segmented_sieve(limit),
            factor_limit,
            lpf: lpf_table(factor_limit),
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn factor_limit(&self) -> u64 {
        self.factor_limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Least prime factor of `2 <= n <= factor_limit`.
    pub fn lpf(&self, n: u64) -> Result<u64> {
        if n < 2 || n > self.factor_limit {
            return Err(Error::OutOfRange {
                n,
                max: self.factor_limit,
            });
        }
        Ok(match self.lpf[n as usize] {
            0 => n,
            p => u64::from(p),
        })
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n < 2 || n > self.factor_limit {
            return Err(Error::OutOfRange {
                n,
                max: self.factor_limit,
            });
        }
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = match self.lpf[m as usize] {
                0 => m,
                p => u64::from(p),
            };
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        Ok(Factorization { pairs })
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n > self.limit {
            return Err(Error::OutOfRange { n, max: self.limit });
        }
        Ok(n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok())
    }

    /// Number of primes `p <= y`.
    pub fn pi(&self, y: u64) -> Result<u64> {
        if y > self.limit {
            return Err(Error::Capacity {
                what: "prime counting",
                needed: y,
                limit: self.limit,
            });
        }
        Ok(self.pi_unchecked(y))
    }

    /// `pi(min(y, limit))`; callers must ensure `y <= limit` when exactness matters.
    pub(crate) fn pi_unchecked(&self, y: u64) -> u64 {
        let y = y.min(u32::MAX as u64) as u32;
        self.primes.partition_point(|&p| p <= y) as u64
    }

    /// Number of primes `p <= y` for real `y >= 0`.
    pub fn prime_count(&self, y: f64) -> Result<u64> {
        if y.is_nan() || y < 0.0 {
            return Err(Error::Domain(format!("prime_count needs y >= 0, got {y}")));
        }
        if y > self.limit as f64 {
            return Err(Error::Capacity {
                what: "prime counting",
                needed: y.ceil() as u64,
                limit: self.limit,
            });
        }
        self.pi(y.floor() as u64)
    }

    /// The `i`-th prime (0-based), if the table holds it.
    pub(crate) fn nth(&self, i: usize) -> Option<u64> {
        self.primes.get(i).map(|&p| u64::from(p))
    }
}

pub fn build_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::build(limit)
}

pub fn factorize(n: u64, table: &PrimeTable) -> Result<Factorization> {
    table.factorize(n)
}

pub fn prime_count(y: f64, table: &PrimeTable) -> Result<u64> {
    table.prime_count(y)
}

/// Plain sieve of Eratosthenes over `0..=n`, used for the base primes.
fn small_primes(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes up to `limit`, sieving odd numbers segment by segment in parallel.
fn segmented_sieve(limit: u64) -> Vec<u32> {
    let root = isqrt(limit);
    let base = small_primes(root);
    let segments: Vec<u64> = (0..=limit / SEGMENT_SPAN)
        .map(|i| i * SEGMENT_SPAN)
        .collect();
    let chunks: Vec<Vec<u32>> = segments
        .par_iter()
        .map(|&lo| sieve_segment(lo, (lo + SEGMENT_SPAN).min(limit + 1), &base))
        .collect();
    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum());
    for c in chunks {
        primes.extend(c);
    }
    primes
}

/// Primes in `[lo, hi)`, given all primes up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    if lo <= 2 && hi > 2 {
        out.push(2);
    }
    // odd candidates: index i stands for first_odd + 2i
    let first_odd = (lo.max(3)) | 1;
    if first_odd >= hi {
        return out;
    }
    let len = (hi - first_odd).div_ceil(2) as usize;
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        let p = u64::from(p);
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first_odd.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = ((start - first_odd) / 2) as usize;
        let step = p as usize;
        while idx < len {
            composite[idx] = true;
            idx += step;
        }
    }
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (first_odd + 2 * i as u64) as u32),
    );
    out
}

fn lpf_table(n: u64) -> Vec<u16> {
    let n = n as usize;
    let mut lpf = vec![0u16; n + 1];
    let root = isqrt(n as u64) as usize;
    for p in 2..=root {
        if lpf[p] != 0 {
            continue;
        }
        let mut m = p * p;
        while m <= n {
            if lpf[m] == 0 {
                lpf[m] = p as u16;
            }
            m += p;
        }
    }
    lpf
}

/// Largest `r` with `r^2 <= n`.
pub(crate) fn isqrt(n: u64) -> u64 {
    iroot(n as u128, 2) as u64
}

/// Largest `r` with `r^k <= n`, for `k >= 1`. The floating-point estimate is
/// corrected by exact integer power checks.
pub fn iroot(n: u128, k: u32) -> u128 {
    assert!(k >= 1, "iroot needs k >= 1");
    if k == 1 || n < 2 {
        return n;
    }
    if k >= 128 {
        return 1;
    }
    let mut r = (n as f64).powf(1.0 / f64::from(k)) as u128;
    while r > 0 && pow_exceeds(r, k, n) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, k, n) {
        r += 1;
    }
    r
}

/// Is `base^k > n`?
pub(crate) fn pow_exceeds(base: u128, k: u32, n: u128) -> bool {
    match base.checked_pow(k) {
        Some(v) => v > n,
        None => true,
    }
}
