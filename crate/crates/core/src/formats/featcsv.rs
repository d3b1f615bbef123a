//! FEATCSV: labeled feature rows.
//!
//! ```text
//! #format=FEATCSV1
//! mean,median,max,std,var,max_minus_min,...,median_minus_mean,magnitude,label,source_id
//! ```
//!
//! `magnitude` is empty for raw, unnormalized features.

use std::path::Path;

use super::{f17, parse_f64, read_text};
use crate::classify::{Label, LabeledDataset, LabeledRow};
use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_NAMES, N_FEATURES};

pub const TAG: &str = "#format=FEATCSV1";

pub fn columns() -> Vec<&'static str> {
    let mut c: Vec<&str> = FEATURE_NAMES.to_vec();
    c.extend(["magnitude", "label", "source_id"]);
    c
}

pub fn encode(data: &LabeledDataset) -> Result<String> {
    let mut out = String::new();
    out.push_str(TAG);
    out.push('\n');
    out.push_str(&columns().join(","));
    out.push('\n');
    for row in &data.rows {
        if row.source_id.contains([',', '\n', '\r']) {
            return Err(Error::Precondition(format!(
                "source id `{}` contains a separator",
                row.source_id
            )));
        }
        for v in row.features.to_array() {
            out.push_str(&f17(v));
            out.push(',');
        }
        if let Some(m) = row.features.magnitude {
            out.push_str(&f17(m));
        }
        out.push(',');
        out.push_str(row.label.as_str());
        out.push(',');
        out.push_str(&row.source_id);
        out.push('\n');
    }
    Ok(out)
}

pub fn decode(text: &str, context: &str) -> Result<LabeledDataset> {
    let mut lines = text.lines();
    let tag = lines.next().unwrap_or("");
    if tag != TAG {
        return Err(Error::schema(context, format!("unknown format tag `{tag}`, expected `{TAG}`")));
    }
    let cols = columns();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    for (i, want) in cols.iter().enumerate() {
        match header.get(i) {
            Some(got) if got.trim() == *want => {}
            Some(got) => {
                return Err(Error::schema(context, format!("column {i} is `{got}`, expected `{want}`")))
            }
            None => return Err(Error::schema(context, format!("missing column `{want}`"))),
        }
    }
    if header.len() > cols.len() {
        return Err(Error::schema(context, format!("unexpected column `{}`", header[cols.len()])));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row_ctx = format!("{context} row {}", n + 1);
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != cols.len() {
            return Err(Error::schema(row_ctx, format!("expected {} fields, got {}", cols.len(), f.len())));
        }
        let mut a = [0.0; N_FEATURES];
        for i in 0..N_FEATURES {
            a[i] = parse_f64(f[i], &row_ctx, cols[i])?;
        }
        let magnitude = match f[N_FEATURES].trim() {
            "" => None,
            s => Some(parse_f64(s, &row_ctx, "magnitude")?),
        };
        let label = Label::parse(f[N_FEATURES + 1].trim()).ok_or_else(|| {
            Error::schema(&row_ctx, format!("column `label`: `{}` is not positive/negative", f[N_FEATURES + 1]))
        })?;
        rows.push(LabeledRow {
            features: FeatureVector::from_array(a, magnitude),
            label,
            source_id: f[N_FEATURES + 2].to_string(),
        });
    }
    Ok(LabeledDataset::new(rows))
}

pub fn read(path: &Path) -> Result<LabeledDataset> {
    decode(&read_text(path)?, &path.display().to_string())
}

pub fn write(path: &Path, data: &LabeledDataset) -> Result<()> {
    Ok(std::fs::write(path, encode(data)?)?)
}
