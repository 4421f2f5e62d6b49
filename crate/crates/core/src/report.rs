//! Exact-versus-asymptotic comparison rows and their CSV and JSON encodings.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{compose, root_count, shape_main_term};
use crate::constants::{shape_constant, SeriesConstant};
use crate::error::Result;
use crate::exact::count_shape;
use crate::primes::PrimeTable;
use crate::shapes::{Mode, Shape};

pub const CSV_HEADER: [&str; 8] = [
    "x",
    "exact",
    "estimate",
    "semi_exact",
    "ratio",
    "constant",
    "mode",
    "shape",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub x: u64,
    pub exact: u64,
    pub estimate: f64,
    pub semi_exact: f64,
    #[serde(rename = "ratio")]
    pub ratio_exact_over_estimate: f64,
    #[serde(rename = "constant")]
    pub constant_value: f64,
    pub mode: Mode,
    pub shape: Shape,
}

/// One row per grid point, ordered by `x`. The shape constant is computed once.
pub fn compare_rows(
    shape: &Shape,
    mode: Mode,
    grid: &[u64],
    tolerance: f64,
    table: &PrimeTable,
) -> Result<Vec<ComparisonRow>> {
    let sig = shape.normalize();
    for &x in grid {
        shape_main_term(x as f64, &sig)?;
    }
    let (constant, _) = shape_constant(&sig, mode, tolerance, table)?;
    let mut rows = grid
        .par_iter()
        .map(|&x| row(x, shape, mode, constant, table))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.x);
    Ok(rows)
}

fn row(
    x: u64,
    shape: &Shape,
    mode: Mode,
    constant: SeriesConstant,
    table: &PrimeTable,
) -> Result<ComparisonRow> {
    let sig = shape.normalize();
    let exact = count_shape(x, shape, mode, table)?.count;
    let est = compose(shape_main_term(x as f64, &sig)?, &sig, constant);
    let semi = root_count(x as f64, &sig, mode, table)? as f64 * constant.value;
    let ratio = if est.estimate > 0.0 {
        exact as f64 / est.estimate
    } else {
        f64::NAN
    };
    Ok(ComparisonRow {
        x,
        exact,
        estimate: est.estimate,
        semi_exact: semi,
        ratio_exact_over_estimate: ratio,
        constant_value: constant.value,
        mode,
        shape: shape.clone(),
    })
}

/// C `printf("%.*g")` formatting.
pub fn format_g(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    let p = precision.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with the fixed header; reals as `%.10g`.
pub fn write_csv<W: Write>(rows: &[ComparisonRow], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.exact.to_string(),
            format_g(r.estimate, 10),
            format_g(r.semi_exact, 10),
            format_g(r.ratio_exact_over_estimate, 10),
            format_g(r.constant_value, 10),
            r.mode.to_string(),
            r.shape.to_string(),
        ])?;
    }
    w.flush()
}

/// JSON array of row objects; reals at full round-trip precision.
pub fn write_json<W: Write>(rows: &[ComparisonRow], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")
}
