//! Plain-text QUBO exchange format.
//!
//! ```text
//! <D> <offset>
//! <i> <j> <value>     one line per nonzero Q[i][j] with i <= j, row-major
//! ```
//!
//! Values are the symmetric matrix entries, so an off-diagonal line `i j v`
//! contributes `2·v·z_i·z_j` to the energy.

use std::fmt::Write as _;

use super::qubo::QuboModel;
use crate::error::{Error, Result};

pub fn export_qubo(model: &QuboModel) -> String {
    let d = model.dim();
    let mut out = String::new();
    writeln!(out, "{} {}", d, model.offset()).unwrap();
    for i in 0..d {
        let row = model.row(i);
        for (j, &v) in row.iter().enumerate().skip(i) {
            if v != 0.0 {
                writeln!(out, "{i} {j} {v}").unwrap();
            }
        }
    }
    out
}

pub fn parse_qubo(text: &str) -> Result<QuboModel> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::input("empty QUBO file"))?;
    let mut fields = header.split_whitespace();
    let dim: usize = parse_field(fields.next(), 1, "dimension")?;
    let offset: f64 = parse_field(fields.next(), 1, "offset")?;

    let mut entries = Vec::new();
    for (lineno, line) in lines {
        let mut f = line.split_whitespace();
        let i: usize = parse_field(f.next(), lineno + 1, "row")?;
        let j: usize = parse_field(f.next(), lineno + 1, "column")?;
        let v: f64 = parse_field(f.next(), lineno + 1, "value")?;
        if i > j {
            return Err(Error::input(format!(
                "line {}: entry ({i}, {j}) is below the diagonal",
                lineno + 1
            )));
        }
        entries.push((i, j, v));
    }
    QuboModel::from_upper(dim, &entries, offset)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::input(format!("line {line}: missing or malformed {what}")))
}
