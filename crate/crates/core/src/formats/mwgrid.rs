//! MWGRID: a tagged ASCII header followed by a raw row-major payload.
//!
//! ```text
//! MWGRID1
//! dtype=f64            (or c128: re, im interleaved)
//! rows=<n>
//! cols=<n>
//! axis0=<min> <max>    row coordinate (m or v)
//! axis1=<min> <max>    column coordinate (l or u)
//!
//! <rows * cols * 8 or 16 bytes, little-endian IEEE-754>
//! ```

use std::path::Path;

use num_complex::Complex64;

use super::{f17, parse_f64, read_input};
use crate::error::{Error, Result};
use crate::grid::{Axis, ComplexGrid, Grid, RealGrid};

pub const TAG: &str = "MWGRID1";

#[derive(Debug, Clone, PartialEq)]
pub enum GridData {
    Real(RealGrid),
    Complex(ComplexGrid),
}

impl GridData {
    pub fn into_real(self, context: &str) -> Result<RealGrid> {
        match self {
            GridData::Real(g) => Ok(g),
            GridData::Complex(_) => Err(Error::schema(context, "expected dtype=f64, found c128")),
        }
    }

    pub fn into_complex(self, context: &str) -> Result<ComplexGrid> {
        match self {
            GridData::Complex(g) => Ok(g),
            GridData::Real(_) => Err(Error::schema(context, "expected dtype=c128, found f64")),
        }
    }
}

fn header(dtype: &str, x: Axis, y: Axis) -> String {
    format!(
        "{TAG}\ndtype={dtype}\nrows={}\ncols={}\naxis0={} {}\naxis1={} {}\n\n",
        y.len,
        x.len,
        f17(y.min),
        f17(y.max()),
        f17(x.min),
        f17(x.max())
    )
}

pub fn encode_real(g: &RealGrid) -> Vec<u8> {
    let mut out = header("f64", g.x_axis, g.y_axis).into_bytes();
    out.reserve(g.values.len() * 8);
    for v in &g.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_complex(g: &ComplexGrid) -> Vec<u8> {
    let mut out = header("c128", g.x_axis, g.y_axis).into_bytes();
    out.reserve(g.values.len() * 16);
    for v in &g.values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

fn f64_at(b: &[u8], i: usize) -> f64 {
    f64::from_le_bytes(b[i * 8..i * 8 + 8].try_into().expect("8 bytes"))
}

pub fn decode(bytes: &[u8], context: &str) -> Result<GridData> {
    let mut pos = 0;
    let mut lines = Vec::new();
    loop {
        let Some(nl) = bytes[pos..].iter().position(|&b| b == b'\n') else {
            return Err(Error::schema(context, "header is not terminated by a blank line"));
        };
        let line = std::str::from_utf8(&bytes[pos..pos + nl])
            .map_err(|_| Error::schema(context, "header is not ASCII"))?;
        pos += nl + 1;
        if line.is_empty() {
            break;
        }
        lines.push(line);
        if lines.len() > 6 {
            return Err(Error::schema(context, "too many header lines"));
        }
    }
    if lines.first() != Some(&TAG) {
        return Err(Error::schema(
            context,
            format!("unknown format tag `{}`, expected {TAG}", lines.first().unwrap_or(&"")),
        ));
    }
    let field = |key: &str| -> Result<&str> {
        lines[1..]
            .iter()
            .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
            .ok_or_else(|| Error::schema(context, format!("missing header field `{key}`")))
    };
    let count = |key: &str| -> Result<usize> {
        field(key)?
            .parse()
            .map_err(|_| Error::schema(context, format!("header field `{key}` is not a count")))
    };
    let axis = |key: &str, len: usize| -> Result<Axis> {
        let v = field(key)?;
        let mut it = v.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::schema(context, format!("header field `{key}` needs `<min> <max>`")));
        };
        Axis::from_endpoints(parse_f64(a, context, key)?, parse_f64(b, context, key)?, len)
            .map_err(|e| Error::schema(context, format!("header field `{key}`: {e}")))
    };
    let dtype = field("dtype")?;
    let (rows, cols) = (count("rows")?, count("cols")?);
    let y_axis = axis("axis0", rows)?;
    let x_axis = axis("axis1", cols)?;
    let payload = &bytes[pos..];
    let width = match dtype {
        "f64" => 8,
        "c128" => 16,
        other => return Err(Error::schema(context, format!("unknown dtype `{other}`"))),
    };
    if payload.len() != rows * cols * width {
        return Err(Error::schema(
            context,
            format!("payload has {} bytes, expected {}", payload.len(), rows * cols * width),
        ));
    }
    Ok(match width {
        8 => GridData::Real(Grid {
            x_axis,
            y_axis,
            values: (0..rows * cols).map(|i| f64_at(payload, i)).collect(),
        }),
        _ => GridData::Complex(Grid {
            x_axis,
            y_axis,
            values: (0..rows * cols)
                .map(|i| Complex64::new(f64_at(payload, 2 * i), f64_at(payload, 2 * i + 1)))
                .collect(),
        }),
    })
}

pub fn read(path: &Path) -> Result<GridData> {
    decode(&read_input(path)?, &path.display().to_string())
}

pub fn write_real(path: &Path, g: &RealGrid) -> Result<()> {
    Ok(std::fs::write(path, encode_real(g))?)
}

pub fn write_complex(path: &Path, g: &ComplexGrid) -> Result<()> {
    Ok(std::fs::write(path, encode_complex(g))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_real() -> RealGrid {
        let mut g = Grid::filled(Axis::centered(4, 0.5), Axis::centered(3, 0.25), 0.0);
        for (i, v) in g.values.iter_mut().enumerate() {
            *v = i as f64 * 0.1 - 0.3;
        }
        g
    }

    #[test]
    fn real_round_trip_is_bit_exact() {
        let g = sample_real();
        let bytes = encode_real(&g);
        let back = decode(&bytes, "t").unwrap().into_real("t").unwrap();
        assert_eq!(back.values, g.values);
        assert_eq!((back.rows(), back.cols()), (3, 4));
        assert!((back.x_axis.step - 0.5).abs() < 1e-15);
        assert_eq!(encode_real(&back), bytes);
    }

    #[test]
    fn complex_round_trip() {
        let g = Grid::filled(Axis::centered(2, 1.0), Axis::centered(2, 1.0), Complex64::new(1.5, -2.0));
        let back = decode(&encode_complex(&g), "t").unwrap().into_complex("t").unwrap();
        assert_eq!(back.values, g.values);
    }

    #[test]
    fn rejects_unknown_tag_and_short_payload() {
        let mut bytes = encode_real(&sample_real());
        bytes[6] = b'9';
        assert!(matches!(decode(&bytes, "t"), Err(Error::Schema { .. })));
        let mut bytes = encode_real(&sample_real());
        bytes.pop();
        assert!(matches!(decode(&bytes, "t"), Err(Error::Schema { .. })));
    }
}
