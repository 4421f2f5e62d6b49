//! Factorization shapes.
//!
//! A [`Shape`] is a list of exponents `(a_1, ..., a_k)` describing integers
//! of the form `p_1^a_1 * ... * p_k^a_k`. In [`Mode::Pi`] the primes must be
//! pairwise distinct, so an integer belongs to the shape exactly when its own
//! exponent multiset equals the shape's. In [`Mode::Sigma`] primes may repeat,
//! and a repeated prime merges the exponents of its slots by addition: the
//! integer belongs to the shape when the shape's exponents can be split into
//! blocks whose sums are the integer's exponents.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::Factorization;

/// A nonempty vector of positive exponents, stored in the order given.
/// Serializes as its text form, e.g. `"1,3"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Shape {
    exponents: Vec<u32>,
}

impl Shape {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidShape(
                "a shape needs at least one exponent".into(),
            ));
        }
        if exponents.contains(&0) {
            return Err(Error::InvalidShape("exponents must be at least 1".into()));
        }
        Ok(Shape { exponents })
    }

    /// The shape `(1, ..., 1)` of length `k`, whose members are the k-almost-primes.
    pub fn ones(k: usize) -> Result<Self> {
        Shape::new(vec![1; k])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of all exponents; the smallest member is `2^total()`.
    pub fn total(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    /// Exponents sorted largest first.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.exponents.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Splits the shape into its smallest exponent, that exponent's
    /// multiplicity, and the remaining larger exponents.
    pub fn normalize(&self) -> ShapeSignature {
        let mut v = self.exponents.clone();
        v.sort_unstable();
        let alpha = v[0];
        let k = v.iter().take_while(|&&e| e == alpha).count();
        ShapeSignature {
            alpha,
            k: k as u32,
            beta: v[k..].to_vec(),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// Parses comma-separated positive integers such as `"1, 1, 3"`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::InvalidShape("empty shape".into()));
        }
        let exponents = cleaned
            .split(',')
            .map(|tok| {
                if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::InvalidShape(format!("bad exponent {tok:?}")));
                }
                tok.parse::<u32>()
                    .map_err(|_| Error::InvalidShape(format!("exponent {tok:?} out of range")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Shape::new(exponents)
    }
}

impl TryFrom<String> for Shape {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Shape> for String {
    fn from(shape: Shape) -> String {
        shape.to_string()
    }
}

/// `(alpha, k, beta)`: smallest exponent, its multiplicity, and the strictly
/// larger exponents in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShapeSignature {
    pub alpha: u32,
    pub k: u32,
    pub beta: Vec<u32>,
}

impl ShapeSignature {
    /// Rebuilds the exponent multiset `{alpha x k} + beta` as a shape.
    pub fn to_shape(&self) -> Shape {
        let mut v = vec![self.alpha; self.k as usize];
        v.extend_from_slice(&self.beta);
        Shape { exponents: v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Primes may repeat across slots.
    Sigma,
    /// All primes pairwise distinct.
    Pi,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sigma => "sigma",
            Mode::Pi => "pi",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sigma" => Ok(Mode::Sigma),
            "pi" => Ok(Mode::Pi),
            other => Err(Error::InvalidShape(format!(
                "unknown mode {other:?} (expected sigma or pi)"
            ))),
        }
    }
}

pub fn normalize(shape: &Shape) -> ShapeSignature {
    shape.normalize()
}

/// Decides whether `n` (with the given exact factorization) is of the given shape.
pub fn member(n: u64, shape: &Shape, mode: Mode, factorization: &Factorization) -> Result<bool> {
    factorization.check_value(n)?;
    let mut target: Vec<u32> = factorization.exponents().collect();
    if target.is_empty() {
        return Ok(false);
    }
    target.sort_unstable_by(|a, b| b.cmp(a));
    let parts = shape.sorted_desc();
    Ok(match mode {
        Mode::Pi => target == parts,
        Mode::Sigma => can_merge_into(&parts, &target),
    })
}

/// Can `parts` be split into blocks whose sums are exactly `targets`
/// (one block per target)? Both slices must be sorted descending.
///
/// Backtracking places the largest parts first; bins with equal remaining
/// capacity are interchangeable, so only the first of them is tried.
pub fn can_merge_into(parts: &[u32], targets: &[u32]) -> bool {
    let part_sum: u64 = parts.iter().map(|&e| u64::from(e)).sum();
    let target_sum: u64 = targets.iter().map(|&e| u64::from(e)).sum();
    if part_sum != target_sum || parts.len() < targets.len() {
        return false;
    }
    let mut remaining: Vec<u32> = targets.to_vec();
    place(parts, &mut remaining)
}

fn place(parts: &[u32], remaining: &mut [u32]) -> bool {
    let Some((&part, rest)) = parts.split_first() else {
        return remaining.iter().all(|&r| r == 0);
    };
    // every open bin must still be reachable by the remaining parts
    let open = remaining.iter().filter(|&&r| r > 0).count();
    if open > parts.len() {
        return false;
    }
    let mut tried: Vec<u32> = Vec::with_capacity(remaining.len());
    for i in 0..remaining.len() {
        let cap = remaining[i];
        if cap < part || tried.contains(&cap) {
            continue;
        }
        tried.push(cap);
        remaining[i] -= part;
        if place(rest, remaining) {
            remaining[i] += part;
            return true;
        }
        remaining[i] += part;
    }
    false
}

/// All exponent multisets (sorted descending) that a Sigma-mode member of the
/// shape can have, i.e. the block-sum multisets over every way of merging
/// slots. Profiles whose smallest possible value exceeds `bound` are dropped.
pub fn merge_profiles(exponents: &[u32], bound: u128) -> Vec<Vec<u32>> {
    let mut parts = exponents.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let mut states: BTreeSet<Vec<u32>> = BTreeSet::new();
    states.insert(Vec::new());
    for &part in &parts {
        let mut next = BTreeSet::new();
        for state in &states {
            let mut candidates = Vec::with_capacity(state.len() + 1);
            let mut fresh = state.clone();
            fresh.push(part);
            candidates.push(fresh);
            let mut seen: Vec<u32> = Vec::new();
            for (i, &block) in state.iter().enumerate() {
                if seen.contains(&block) {
                    continue;
                }
                seen.push(block);
                let mut merged = state.clone();
                merged[i] += part;
                candidates.push(merged);
            }
            for mut c in candidates {
                c.sort_unstable_by(|a, b| b.cmp(a));
                if min_distinct_value(&c).is_some_and(|v| v <= bound) {
                    next.insert(c);
                }
            }
        }
        states = next;
    }
    states.into_iter().collect()
}

// the product of these exceeds u128::MAX, so longer profiles never fit
const SMALL_PRIMES: [u64; 30] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113,
];

/// Smallest integer with exactly this exponent multiset (descending input),
/// or `None` if it does not fit in a `u128`.
pub(crate) fn min_distinct_value(desc: &[u32]) -> Option<u128> {
    let mut acc: u128 = 1;
    for (i, &e) in desc.iter().enumerate() {
        let p = *SMALL_PRIMES.get(i)? as u128;
        acc = acc.checked_mul(p.checked_pow(e)?)?;
    }
    Some(acc)
}
