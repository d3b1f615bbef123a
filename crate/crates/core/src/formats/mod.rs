//! On-disk formats. Every file starts with a version tag and readers reject
//! tags they do not know.
//!
//! - MWGRID: real or complex 2D grid, ASCII header plus little-endian payload.
//! - RINGCSV: ring samples, one row per encoder step.
//! - FEATCSV: labeled feature vectors.
//! - JSON: configs, models and reports, floats written with 17 significant digits.

pub mod featcsv;
pub mod json;
pub mod mwgrid;
pub mod ringcsv;

use std::path::Path;

use crate::error::{Error, Result};

/// Read a whole input file; a missing file is reported as such.
pub fn read_input(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingInput {
                path: path.display().to_string(),
                source: e,
            }
        } else {
            Error::Io(e)
        }
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    let bytes = read_input(path)?;
    String::from_utf8(bytes).map_err(|_| Error::schema(path.display().to_string(), "file is not UTF-8 text"))
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any f64.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn parse_f64(s: &str, context: &str, column: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::schema(context, format!("column `{column}`: cannot parse `{s}` as a number")))
}
