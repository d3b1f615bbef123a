//! JSON output with fixed 17-significant-digit floats and stable layout.

use serde::Serialize;
use serde_json::Value;

use super::f17;
use crate::error::Result;

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&f17(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(indent + 2, out);
                write_value(x, indent + 2, out);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(indent + 2, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 2, out);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

/// Pretty JSON in which every float is printed as `{:.16e}`.
pub fn to_string_f17<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, serde::Deserialize, PartialEq, Debug)]
    struct S {
        a: f64,
        b: Vec<f64>,
        n: u32,
        s: String,
    }

    #[test]
    fn round_trips_exactly() {
        let s = S {
            a: 0.1 + 0.2,
            b: vec![1.0 / 3.0, -2.5e-300, 0.0],
            n: 7,
            s: "x\"y".into(),
        };
        let text = to_string_f17(&s).unwrap();
        assert!(text.contains("3.0000000000000004e-1"));
        assert!(text.contains("\"n\": 7"));
        let back: S = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
