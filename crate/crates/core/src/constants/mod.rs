//! Convergent constants: the prime zeta function, the series
//! `sum_{m in P_beta} m^(-1/alpha)`, and its product form when the exponents
//! of `beta` have no vanishing signed sum.

mod series;
mod unique;
pub mod zeta;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::shapes::{Mode, ShapeSignature};

pub use series::series_constant;
pub use unique::{annihilating_split, uniqueness_condition};
pub use zeta::{prime_zeta, MIN_TOLERANCE};

use zeta::{check_tolerance, prime_zeta_inner};

/// A truncated series with a rigorous bound on what was left out: the true
/// value lies in `[value, value + tail_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConstant {
    pub value: f64,
    pub tail_bound: f64,
    /// Terms beyond this point were bounded rather than summed.
    pub truncation_threshold: u128,
}

impl SeriesConstant {
    /// The empty product.
    pub fn one() -> Self {
        SeriesConstant {
            value: 1.0,
            tail_bound: 0.0,
            truncation_threshold: 1,
        }
    }
}

/// How a shape constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantMethod {
    Product,
    Enumeration,
}

impl std::fmt::Display for ConstantMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstantMethod::Product => "product",
            ConstantMethod::Enumeration => "enumeration",
        })
    }
}

/// `prod_i P(beta_i / alpha)`, valid when `beta` satisfies the uniqueness
/// condition.
pub fn constant_as_product(
    signature: &ShapeSignature,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<SeriesConstant> {
    check_tolerance(tolerance)?;
    let beta = &signature.beta;
    if beta.is_empty() {
        return Ok(SeriesConstant::one());
    }
    if !uniqueness_condition(beta) {
        return Err(Error::Precondition(format!(
            "beta {beta:?} has a vanishing signed sum; use series_constant instead"
        )));
    }
    let alpha = f64::from(signature.alpha);
    let exps: Vec<f64> = beta.iter().map(|&b| f64::from(b) / alpha).collect();
    if let Some(&s) = exps.iter().find(|&&s| s <= 1.0) {
        return Err(Error::Divergent(s));
    }
    // crude upper bounds on each factor: 2^-s + int_2^inf t^-s dt
    let upper: Vec<f64> = exps
        .iter()
        .map(|&s| 2f64.powf(-s) + 2f64.powf(1.0 - s) / (s - 1.0))
        .collect();
    let r = exps.len() as f64;
    let mut scale = 1.0;
    loop {
        let mut cache: BTreeMap<u64, SeriesConstant> = BTreeMap::new();
        let mut lo = 1.0;
        let mut hi = 1.0;
        let mut threshold = 0u128;
        for (i, &s) in exps.iter().enumerate() {
            let others: f64 = upper
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &u)| u)
                .product();
            let tol_i = (scale * tolerance / (r * others.max(1.0))).max(MIN_TOLERANCE);
            let factor = match cache.get(&s.to_bits()) {
                Some(&c) if c.tail_bound <= tol_i => c,
                _ => {
                    let c = prime_zeta_inner(s, tol_i, table)?;
                    cache.insert(s.to_bits(), c);
                    c
                }
            };
            lo *= factor.value;
            hi *= factor.value + factor.tail_bound;
            threshold = threshold.max(factor.truncation_threshold);
        }
        let width = hi - lo;
        if width <= tolerance {
            return Ok(SeriesConstant {
                value: lo,
                tail_bound: width,
                truncation_threshold: threshold,
            });
        }
        if scale * tolerance / r < MIN_TOLERANCE {
            return Err(Error::Tolerance {
                requested: tolerance,
                achievable: width,
                limit: table.limit(),
                needed: table.limit().saturating_mul(2),
            });
        }
        scale /= 2.0;
    }
}

/// The constant multiplying the main term for `signature` in `mode`: the
/// product form for Sigma shapes meeting the uniqueness condition, otherwise
/// the enumerated series.
pub fn shape_constant(
    signature: &ShapeSignature,
    mode: Mode,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<(SeriesConstant, ConstantMethod)> {
    check_tolerance(tolerance)?;
    if signature.beta.is_empty() {
        return Ok((SeriesConstant::one(), ConstantMethod::Product));
    }
    if mode == Mode::Sigma && uniqueness_condition(&signature.beta) {
        let c = constant_as_product(signature, tolerance, table)?;
        return Ok((c, ConstantMethod::Product));
    }
    let c = series_constant(signature, mode, tolerance, table)?;
    Ok((c, ConstantMethod::Enumeration))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(alpha: u32, beta: &[u32]) -> ShapeSignature {
        ShapeSignature {
            alpha,
            k: 1,
            beta: beta.to_vec(),
        }
    }

    #[test]
    fn product_rejects_non_unique() {
        let t = PrimeTable::build(1000).unwrap();
        let err = constant_as_product(&sig(1, &[2, 3, 5]), 1e-6, &t).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn product_matches_series_for_single_exponent() {
        let t = PrimeTable::build(2_000_000).unwrap();
        let p = constant_as_product(&sig(1, &[3]), 1e-9, &t).unwrap();
        let s = series_constant(&sig(1, &[3]), Mode::Sigma, 1e-9, &t).unwrap();
        assert!(p.tail_bound <= 1e-9);
        assert!((p.value - s.value).abs() <= 2e-9);
        assert!((p.value - 0.174_762_639_299_443_5).abs() < 2e-9);
    }

    #[test]
    fn methods() {
        let t = PrimeTable::build(2_000_000).unwrap();
        let (c, m) = shape_constant(&sig(2, &[]), Mode::Sigma, 1e-9, &t).unwrap();
        assert_eq!((c.value, m), (1.0, ConstantMethod::Product));
        let (_, m) = shape_constant(&sig(1, &[3]), Mode::Sigma, 1e-9, &t).unwrap();
        assert_eq!(m, ConstantMethod::Product);
        let (_, m) = shape_constant(&sig(1, &[3]), Mode::Pi, 1e-9, &t).unwrap();
        assert_eq!(m, ConstantMethod::Enumeration);
        assert_eq!(m.to_string(), "enumeration");
    }
}
