//! Text format: `N K label` on the first line, then K rows of `0`/`1`.
//! Lines starting with `#` before the header are ignored.

use super::{
    bch_code, ebch_code, extended_qr_code, qr_code, repetition_code, rm_code,
    single_parity_check_code, CodeFamily, LinearCode,
};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

pub fn write_code_file(code: &LinearCode) -> String {
    let mut out = format!("{} {} {}\n", code.n(), code.k(), code.label());
    for r in code.generator().row_vecs() {
        out.push_str(&r.to_string01());
        out.push('\n');
    }
    out
}

/// Rebuilds the family tag when the label names a known construction whose
/// generator spans the same code.
fn family_from_label(label: &str, g: &BitMatrix) -> Option<LinearCode> {
    let (name, args) = label.split_once('(')?;
    let args = args.strip_suffix(')')?;
    let nums: Vec<usize> = args
        .split(',')
        .map(|a| a.trim().parse().ok())
        .collect::<Option<_>>()?;
    let candidate = match (name, nums.as_slice()) {
        ("RM", [v, n]) if *n <= 12 => rm_code(*v, *n).ok()?,
        ("BCH", [v, n]) if *n <= 12 => bch_code(*v, *n).ok()?,
        ("eBCH", [v, n]) if *n <= 12 => ebch_code(*v, *n).ok()?,
        ("QR", [p]) => qr_code(*p).ok()?,
        ("eQR", [p]) => extended_qr_code(*p).ok()?,
        ("REP", [n]) => repetition_code(*n).ok()?,
        ("SPC", [n]) => single_parity_check_code(*n).ok()?,
        _ => return None,
    };
    (candidate.n() == g.cols() && candidate.generator().same_row_space(g)).then_some(candidate)
}

pub fn parse_code_file(text: &str) -> Result<LinearCode> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut parts = header.splitn(3, char::is_whitespace);
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line: {header}")))?;
    let k: usize = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line: {header}")))?;
    let label = parts.next().map(str::trim).unwrap_or("").to_string();
    let mut rows = Vec::with_capacity(k);
    for (i, line) in lines.enumerate() {
        if i >= k {
            return Err(Error::Parse(format!("more than {k} generator rows")));
        }
        let row = BitVec::parse01(line)
            .ok_or_else(|| Error::Parse(format!("row {} is not a 0/1 string", i + 1)))?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has length {}, expected {n}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::Parse(format!(
            "expected {k} generator rows, found {}",
            rows.len()
        )));
    }
    let g = BitMatrix::from_rows(n, rows);
    if let Some(known) = family_from_label(&label, &g) {
        return Ok(known);
    }
    let label = if label.is_empty() {
        format!("code[{n},{k}]")
    } else {
        label
    };
    let code = LinearCode::new(g, label, CodeFamily::Generic, None)?;
    if code.k() != k {
        return Err(Error::Parse(format!(
            "header says K = {k} but the rows have rank {}",
            code.k()
        )));
    }
    Ok(code)
}
