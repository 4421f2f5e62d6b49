//! Main terms and composed asymptotic estimates.

use serde::{Deserialize, Serialize};

use crate::constants::{shape_constant, SeriesConstant};
use crate::error::{Error, Result};
use crate::exact::{count_pi_k, count_sigma_k};
use crate::primes::{iroot, PrimeTable};
use crate::shapes::{Mode, Shape, ShapeSignature};

/// Smallest `x` for which the main terms are evaluated.
pub const DOMAIN_FLOOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateBreakdown {
    pub main_term: f64,
    pub constant: SeriesConstant,
    /// `main_term * constant.value`.
    pub estimate: f64,
    pub error_order: String,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

// (ln ln x)^(k-1) / ((k-1)! ln x)
fn log_factor(x: f64, k: u32) -> f64 {
    let l = x.ln();
    l.ln().powi(k as i32 - 1) / (factorial(k - 1) * l)
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(())
}

/// `x (ln ln x)^(k-1) / ((k-1)! ln x)`, for `x >= 100`.
pub fn landau_main_term(x: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    if x.is_nan() || x < DOMAIN_FLOOR {
        return Err(Error::Domain(format!(
            "x = {x} is below the floor {DOMAIN_FLOOR}"
        )));
    }
    Ok(x * log_factor(x, k))
}

/// `alpha x^(1/alpha) (ln ln x)^(k-1) / ((k-1)! ln x)` times the shape constant.
pub fn estimate_count(
    x: f64,
    shape: &Shape,
    mode: Mode,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<EstimateBreakdown> {
    let sig = shape.normalize();
    let main_term = shape_main_term(x, &sig)?;
    let (constant, _) = shape_constant(&sig, mode, tolerance, table)?;
    Ok(compose(main_term, &sig, constant))
}

pub(crate) fn compose(
    main_term: f64,
    sig: &ShapeSignature,
    constant: SeriesConstant,
) -> EstimateBreakdown {
    EstimateBreakdown {
        main_term,
        constant,
        estimate: main_term * constant.value,
        error_order: error_order(sig.alpha, sig.k),
    }
}

pub(crate) fn shape_main_term(x: f64, sig: &ShapeSignature) -> Result<f64> {
    check_k(sig.k)?;
    let floor = DOMAIN_FLOOR.powi(sig.alpha as i32);
    if x.is_nan() || x < floor {
        return Err(Error::Domain(format!(
            "x = {x} is below the floor 100^{} = {floor}",
            sig.alpha
        )));
    }
    let alpha = f64::from(sig.alpha);
    let root = if sig.alpha == 1 {
        x
    } else {
        x.powf(1.0 / alpha)
    };
    Ok(alpha * root * log_factor(x, sig.k))
}

fn error_order(alpha: u32, k: u32) -> String {
    let root = if alpha == 1 {
        "x".to_string()
    } else {
        format!("x^(1/{alpha})")
    };
    match k {
        1 => format!("O({root}/log^2 x)"),
        2 => format!("O({root}/log x)"),
        _ => format!("O({root}(log log x)^{}/log x)", k - 2),
    }
}

/// `floor(x^(1/alpha))` with exact correction for integral `x`.
pub(crate) fn root_floor(x: f64, alpha: u32) -> Result<u64> {
    if x.is_nan() || x < 1.0 || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must be at least 1")));
    }
    if x.fract() == 0.0 && x < 2f64.powi(64) {
        return Ok(iroot(x as u128, alpha) as u64);
    }
    // rounding for non-integral x only matters at exact powers, which are integral
    Ok(x.powf(1.0 / f64::from(alpha)).floor() as u64)
}

/// Semi-exact estimator: the exact `sigma_k` (or `pi_k`) count at
/// `x^(1/alpha)` times the shape constant.
pub fn equivalent_form(
    x: f64,
    shape: &Shape,
    mode: Mode,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<f64> {
    let sig = shape.normalize();
    let count = root_count(x, &sig, mode, table)?;
    let (constant, _) = shape_constant(&sig, mode, tolerance, table)?;
    Ok(count as f64 * constant.value)
}

/// `sigma_k` or `pi_k` at `floor(x^(1/alpha))`.
pub(crate) fn root_count(
    x: f64,
    sig: &ShapeSignature,
    mode: Mode,
    table: &PrimeTable,
) -> Result<u64> {
    let y = root_floor(x, sig.alpha)?;
    match mode {
        Mode::Sigma => count_sigma_k(y, sig.k, table),
        Mode::Pi => count_pi_k(y, sig.k, table),
    }
}
