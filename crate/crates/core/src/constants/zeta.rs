//! The prime zeta function `P(s) = sum_p p^-s` and rigorous brackets for its
//! tails `sum_{p > y} p^-s`.
//!
//! A tail is written as a Stieltjes integral against the prime counting
//! function,
//!
//! ```text
//! sum_{p > y} p^-s = -pi(y) y^-s + s * int_y^inf pi(t) t^(-s-1) dt,
//! ```
//!
//! and `pi(t)` is replaced by explicit lower and upper bounds of the form
//! `sum_j c_j t / ln^j t`. Each resulting integral `int_{ln y}^inf e^(-cu)
//! u^-j du` (with `c = s - 1`) is bracketed by partial sums of its alternating
//! asymptotic expansion.

use crate::error::{Error, Result};
use crate::primes::{PrimeTable, MAX_SIEVE_LIMIT};

use super::SeriesConstant;

/// pi(t) <= t/ln t (1 + 1/ln t + 2.51/ln^2 t) for t >= this (Dusart).
const DUSART_UPPER_FROM: f64 = 355_991.0;
const DUSART_UPPER_C: f64 = 2.51;
/// pi(t) >= t/ln t (1 + 1/ln t) for t >= this (Dusart).
const DUSART_LOWER_FROM: f64 = 599.0;
/// pi(t) < 1.25506 t/ln t for t > 1 (Rosser and Schoenfeld).
const ROSSER_UPPER_C: f64 = 1.25506;
/// pi(t) > t/ln t for t >= this (Rosser and Schoenfeld).
const ROSSER_LOWER_FROM: f64 = 17.0;

/// Smallest tolerance accepted by the public constant routines.
pub const MIN_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= MIN_TOLERANCE {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn shift(self, by: f64) -> Bracket {
        Bracket {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }
}

/// Bounds on `int_a^inf e^(-cu) u^-j du` for `a, c > 0`, `j >= 1`.
///
/// Integrating by parts gives `I_j = e^(-ca)/(c a^j) - (j/c) I_{j+1}`, so the
/// expansion alternates and its partial sums with an odd (even) number of
/// terms are upper (lower) bounds.
fn exp_log_integral(c: f64, a: f64, j: u32) -> Bracket {
    let ca = c * a;
    let mut term = (-ca).exp() / (c * a.powi(j as i32));
    let mut partial = 0.0;
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for m in 0..60u32 {
        if m % 2 == 0 {
            partial += term;
            hi = hi.min(partial);
        } else {
            partial -= term;
            lo = lo.max(partial);
        }
        let next = term * f64::from(j + m) / ca;
        if m >= 1 && next >= term {
            break;
        }
        term = next;
    }
    Bracket { lo, hi: hi.max(lo) }
}

/// `sum_j coeff_j * int_{ln y}^inf e^(-(s-1)u) u^-j du`, bracketed.
fn weighted_integral(s: f64, y: f64, coeffs: &[f64]) -> Bracket {
    let (c, a) = (s - 1.0, y.ln());
    coeffs.iter().enumerate().filter(|(_, &w)| w != 0.0).fold(
        Bracket { lo: 0.0, hi: 0.0 },
        |acc, (i, &w)| {
            let b = exp_log_integral(c, a, i as u32 + 1);
            Bracket {
                lo: acc.lo + w * b.lo,
                hi: acc.hi + w * b.hi,
            }
        },
    )
}

fn pi_lower_coeffs(y: f64) -> &'static [f64] {
    if y >= DUSART_LOWER_FROM {
        &[1.0, 1.0]
    } else if y >= ROSSER_LOWER_FROM {
        &[1.0]
    } else {
        &[]
    }
}

fn pi_upper_coeffs(y: f64) -> &'static [f64] {
    if y >= DUSART_UPPER_FROM {
        &[1.0, 1.0, DUSART_UPPER_C]
    } else {
        &[ROSSER_UPPER_C]
    }
}

fn eval_coeffs(t: f64, coeffs: &[f64]) -> f64 {
    let l = t.ln();
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &w)| w * t / l.powi(i as i32 + 1))
        .sum()
}

/// Rigorous bracket for `sum_{p > y} p^-s`, `s > 1`. Pass the exact `pi(y)`
/// when known; otherwise it is replaced by its explicit bounds.
pub(crate) fn prime_tail(s: f64, y: f64, pi_y: Option<u64>) -> Bracket {
    if y < 2.0 {
        return prime_tail(s, 2.0, Some(1)).shift(2f64.powf(-s));
    }
    let lower_c = pi_lower_coeffs(y);
    let upper_c = pi_upper_coeffs(y);
    let low_int = weighted_integral(s, y, lower_c).lo * s;
    let high_int = weighted_integral(s, y, upper_c).hi * s;
    let y_s = y.powf(-s);
    let (pi_hi, pi_lo) = match pi_y {
        Some(p) => (p as f64, p as f64),
        None => (eval_coeffs(y, upper_c), eval_coeffs(y, lower_c)),
    };
    let mut lo = (low_int - pi_hi * y_s).max(0.0);
    let mut hi = high_int - pi_lo * y_s;
    // every prime above y is an integer >= floor(y) + 1
    let trivial = y.floor().powf(1.0 - s) / (s - 1.0);
    hi = hi.min(trivial);
    if hi < lo {
        // only reachable through rounding when both are ~0
        lo = lo.min(hi.max(0.0));
        hi = hi.max(lo);
    }
    Bracket { lo, hi }
}

/// Prefix sums of `p^-s` over the primes of a table, for fast range sums and
/// tail brackets at arbitrary cut points.
pub(crate) struct PrimePowerSums<'t> {
    s: f64,
    table: &'t PrimeTable,
    prefix: Vec<f64>,
}

impl<'t> PrimePowerSums<'t> {
    pub fn new(table: &'t PrimeTable, s: f64) -> Self {
        let mut acc = Compensated::default();
        let mut prefix = Vec::with_capacity(table.primes().len() + 1);
        prefix.push(0.0);
        for &p in table.primes() {
            acc.add(f64::from(p).powf(-s));
            prefix.push(acc.value());
        }
        PrimePowerSums { s, table, prefix }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `sum_{p <= y} p^-s`, with `y` clamped to the table limit.
    pub fn partial(&self, y: u64) -> f64 {
        self.prefix[self.table.pi_unchecked(y) as usize]
    }

    /// Bracket for `sum_{p > y} p^-s`. Primes from the table are summed
    /// directly up to the point where the sharper explicit bounds apply.
    pub fn tail(&self, y: f64) -> Bracket {
        if y < 2.0 {
            return self.tail(2.0).shift(2f64.powf(-self.s));
        }
        let limit = self.table.limit();
        let floor = y.floor();
        if floor > limit as f64 {
            return prime_tail(self.s, y, None);
        }
        let yi = floor as u64;
        let z = yi.max((DUSART_UPPER_FROM as u64).min(limit));
        let direct = self.partial(z) - self.partial(yi);
        prime_tail(self.s, z as f64, Some(self.table.pi_unchecked(z))).shift(direct)
    }

    /// Bracket for the full sum `P(s)`.
    pub fn total(&self) -> Bracket {
        self.tail(1.0)
    }
}

/// `P(s)` as a partial sum over `p <= N` plus a bracketed tail, with `N` the
/// smallest cut (found by bisection) whose tail bracket is within `tolerance`.
pub fn prime_zeta(s: f64, tolerance: f64, table: &PrimeTable) -> Result<SeriesConstant> {
    check_tolerance(tolerance)?;
    prime_zeta_inner(s, tolerance, table)
}

pub(crate) fn prime_zeta_inner(
    s: f64,
    tolerance: f64,
    table: &PrimeTable,
) -> Result<SeriesConstant> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::Divergent(s));
    }
    let limit = table.limit();
    let width = |n: u64| prime_tail(s, n as f64, Some(table.pi_unchecked(n))).width();
    if width(limit) > tolerance {
        return Err(Error::Tolerance {
            requested: tolerance,
            achievable: width(limit),
            limit,
            needed: estimate_cut(s, tolerance).max(limit.saturating_mul(2)),
        });
    }
    let mut lo = 1u64;
    let mut hi = 2u64.min(limit);
    while width(hi) > tolerance {
        lo = hi;
        hi = hi.saturating_mul(2).min(limit);
    }
    // width(hi) fits; width(lo) does not (or lo is below the first prime)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if width(mid) <= tolerance {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let cut = hi;
    let mut sum = Compensated::default();
    for &p in table.primes().iter().take_while(|&&p| u64::from(p) <= cut) {
        sum.add(f64::from(p).powf(-s));
    }
    let tail = prime_tail(s, cut as f64, Some(table.pi_unchecked(cut)));
    Ok(SeriesConstant {
        value: sum.value() + tail.lo,
        tail_bound: tail.width(),
        truncation_threshold: u128::from(cut),
    })
}

/// A sieve limit that reaches `tolerance`, estimated without a table.
fn estimate_cut(s: f64, tolerance: f64) -> u64 {
    let mut n = 2u64;
    while n < MAX_SIEVE_LIMIT {
        if prime_tail(s, n as f64, None).width() <= tolerance {
            return n;
        }
        n = n.saturating_mul(2);
    }
    MAX_SIEVE_LIMIT.saturating_add(1)
}
