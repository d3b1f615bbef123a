//! RINGCSV: one row per ring sample.
//!
//! ```text
//! #format=RINGCSV1
//! k,gamma_deg,u,v,re,im,baseline_lambda
//! 0,0.0000000000000000e0,...
//! ```

use std::path::Path;

use num_complex::Complex64;

use super::{f17, parse_f64, read_text};
use crate::dynarray::{RingSample, RingSampleSet};
use crate::error::{Error, Result};

pub const TAG: &str = "#format=RINGCSV1";
pub const COLUMNS: [&str; 7] = ["k", "gamma_deg", "u", "v", "re", "im", "baseline_lambda"];

pub fn encode(set: &RingSampleSet) -> String {
    let mut out = String::with_capacity(64 + set.len() * 180);
    out.push_str(TAG);
    out.push('\n');
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for s in set.entries() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.k,
            f17(s.gamma.to_degrees()),
            f17(s.u),
            f17(s.v),
            f17(s.value.re),
            f17(s.value.im),
            f17(s.baseline)
        ));
    }
    out
}

pub fn decode(text: &str, context: &str) -> Result<RingSampleSet> {
    let mut lines = text.lines();
    let tag = lines.next().unwrap_or("");
    if tag != TAG {
        return Err(Error::schema(context, format!("unknown format tag `{tag}`, expected `{TAG}`")));
    }
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    for (i, want) in COLUMNS.iter().enumerate() {
        match header.get(i) {
            Some(got) if got.trim() == *want => {}
            Some(got) => {
                return Err(Error::schema(context, format!("column {i} is `{got}`, expected `{want}`")))
            }
            None => return Err(Error::schema(context, format!("missing column `{want}`"))),
        }
    }
    if header.len() > COLUMNS.len() {
        return Err(Error::schema(context, format!("unexpected column `{}`", header[COLUMNS.len()])));
    }
    let mut entries = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row_ctx = format!("{context} row {}", n + 1);
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != COLUMNS.len() {
            return Err(Error::schema(
                row_ctx,
                format!("expected {} fields, got {}", COLUMNS.len(), f.len()),
            ));
        }
        let k = f[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::schema(&row_ctx, format!("column `k`: `{}` is not an index", f[0])))?;
        let num = |i: usize| parse_f64(f[i], &row_ctx, COLUMNS[i]);
        entries.push(RingSample {
            k,
            gamma: num(1)?.to_radians(),
            u: num(2)?,
            v: num(3)?,
            value: Complex64::new(num(4)?, num(5)?),
            baseline: num(6)?,
        });
    }
    RingSampleSet::from_entries(entries).map_err(|e| Error::schema(context, e.to_string()))
}

pub fn read(path: &Path) -> Result<RingSampleSet> {
    decode(&read_text(path)?, &path.display().to_string())
}

pub fn write(path: &Path, set: &RingSampleSet) -> Result<()> {
    Ok(std::fs::write(path, encode(set))?)
}
