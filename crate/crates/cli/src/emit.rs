//! Deterministic emission of value rows as CSV or JSON.
//!
//! CSV files open with a `# permulex <version>` header line; approximations
//! are fixed-width scientific notation with 17 significant digits. Nothing
//! in either format depends on time or environment, so identical inputs
//! produce byte-identical files.

use permulex_core::perm::permutation_from_values;
use permulex_core::Scalar;
use serde::Serialize;

use crate::fail::Failure;

#[derive(Debug, Serialize)]
pub struct Row {
    pub index: usize,
    pub exact: String,
    pub approx: f64,
    pub rank: usize,
}

/// Rows for a value sequence: exact string, approximation, and the rank of
/// each value within the emitted prefix.
pub fn rows_from_values<S: Scalar>(values: &[S]) -> Result<Vec<Row>, Failure> {
    let perm = permutation_from_values(values).map_err(Failure::from)?;
    Ok(values
        .iter()
        .enumerate()
        .map(|(index, v)| Row {
            index,
            exact: v.to_string(),
            approx: v.approx_f64(),
            rank: perm.rank(index),
        })
        .collect())
}

pub fn csv(rows: &[Row]) -> String {
    use std::fmt::Write;
    let mut out = format!("# permulex {}\n", env!("CARGO_PKG_VERSION"));
    out.push_str("index,exact,approx,rank\n");
    for r in rows {
        writeln!(out, "{},{},{:.16e},{}", r.index, r.exact, r.approx, r.rank)
            .expect("writing to a String cannot fail");
    }
    out
}

#[derive(Debug, Serialize)]
struct JsonDoc<'a> {
    tool: &'static str,
    version: &'static str,
    name: &'a str,
    n: usize,
    rows: &'a [Row],
}

pub fn json(name: &str, rows: &[Row]) -> String {
    let doc = JsonDoc {
        tool: "permulex",
        version: env!("CARGO_PKG_VERSION"),
        name,
        n: rows.len(),
        rows,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}
