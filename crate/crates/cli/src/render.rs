//! JSON encoding of exact values and plain-text tables.

use k3walls::diophantine::Point;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

/// Integers are written as decimal strings so that no precision is lost.
pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rat(x: &BigRational) -> Value {
    json!({"num": x.numer().to_string(), "den": x.denom().to_string()})
}

pub fn ivec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn qvec(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn point(p: &Point) -> Value {
    json!([p.0.to_string(), p.1.to_string()])
}

pub fn fmt_rat(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vec<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

pub fn fmt_qvec(v: &[BigRational]) -> String {
    format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

pub fn fmt_point(p: &Point) -> String {
    format!("({}, {})", p.0, p.1)
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.iter().map(|h| h.to_string()).collect())];
    out.push(line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    out.extend(rows.iter().map(|r| line(r.clone())));
    out.join("\n") + "\n"
}

/// `key: value` lines.
pub fn fields(items: &[(&str, String)]) -> String {
    let w = items.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    items
        .iter()
        .map(|(k, v)| format!("{k}{}  {v}\n", " ".repeat(w - k.chars().count())))
        .collect()
}
