//! Parsing of lattice files and command-line vectors.

use std::fs;
use std::str::FromStr;

use k3walls::arith::{IVec, QVec};
use k3walls::Lattice;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

/// A parse or validation failure, reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<k3walls::Error> for InputError {
    fn from(e: k3walls::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type Parsed<T> = Result<T, InputError>;

fn err<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(InputError(msg.into()))
}

/// Reads a lattice from inline JSON (anything starting with `{`) or from a file.
pub fn load_lattice(src: &str) -> Parsed<Lattice> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        fs::read_to_string(src).map_err(|e| InputError(format!("lattice: cannot read {src}: {e}")))?
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| InputError(format!("lattice: invalid JSON: {e}")))?;
    lattice_from_json(&value)
}

pub fn lattice_from_json(value: &Value) -> Parsed<Lattice> {
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or("gram");
    match kind {
        "gram" => {
            let gram = matrix(value.get("gram"), "gram")?;
            if let Some(rank) = value.get("rank") {
                let r = rank.as_u64().ok_or_else(|| InputError("lattice: rank must be a number".into()))?;
                if r as usize != gram.len() {
                    return err(format!("lattice: rank {r} does not match a {}-row gram matrix", gram.len()));
                }
            }
            let labels = match value.get("labels") {
                None | Some(Value::Null) => None,
                Some(Value::Array(items)) => Some(
                    items
                        .iter()
                        .map(|x| x.as_str().map(str::to_string))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| InputError("lattice: labels must be strings".into()))?,
                ),
                Some(_) => return err("lattice: labels must be an array"),
            };
            if let Some(l) = &labels {
                if l.len() != gram.len() {
                    return err("lattice: one label per basis vector is required");
                }
            }
            Ok(Lattice::new(gram, labels, true)?)
        }
        "mukai_from_ns" => Ok(Lattice::mukai_from_ns(&matrix(value.get("ns_gram"), "ns_gram")?)?),
        other => err(format!("lattice: unknown kind {other:?} (expected \"gram\" or \"mukai_from_ns\")")),
    }
}

fn matrix(v: Option<&Value>, name: &str) -> Parsed<Vec<IVec>> {
    let rows = v
        .and_then(Value::as_array)
        .ok_or_else(|| InputError(format!("lattice: {name} must be an array of rows")))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| InputError(format!("lattice: {name} rows must be arrays")))?
                .iter()
                .map(|x| json_int(x, name))
                .collect()
        })
        .collect()
}

/// Integers may be JSON numbers or decimal strings.
fn json_int(x: &Value, name: &str) -> Parsed<BigInt> {
    match x {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| InputError(format!("{name}: {s:?} is not an integer"))),
        _ => err(format!("{name}: entries must be integers")),
    }
}

pub fn int(s: &str, name: &str) -> Parsed<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| InputError(format!("{name}: {s:?} is not an integer")))
}

/// `p` or `p/q`.
pub fn rational(s: &str, name: &str) -> Parsed<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s, name)?)),
        Some((p, q)) => {
            let q = int(q, name)?;
            if q == BigInt::from(0) {
                return err(format!("{name}: zero denominator in {s:?}"));
            }
            Ok(BigRational::new(int(p, name)?, q))
        }
    }
}

/// Comma-separated integers.
pub fn ivec(s: &str, name: &str) -> Parsed<IVec> {
    s.split(',').map(|x| int(x, name)).collect()
}

/// Comma-separated rationals.
pub fn qvec(s: &str, name: &str) -> Parsed<QVec> {
    s.split(',').map(|x| rational(x, name)).collect()
}

/// Semicolon-separated rational vectors.
pub fn qvecs(s: &str, name: &str) -> Parsed<Vec<QVec>> {
    s.split(';').filter(|x| !x.trim().is_empty()).map(|x| qvec(x, name)).collect()
}

/// Checks that a vector has the lattice rank.
pub fn check_rank<T>(l: &Lattice, v: &[T], name: &str) -> Parsed<()> {
    if v.len() != l.rank() {
        return err(format!("{name}: expected {} entries for a rank-{} lattice, got {}", l.rank(), l.rank(), v.len()));
    }
    Ok(())
}

/// A pair `x,y`.
pub fn pair(s: &str, name: &str) -> Parsed<(BigInt, BigInt)> {
    let v = ivec(s, name)?;
    if v.len() != 2 {
        return err(format!("{name}: expected two entries"));
    }
    Ok((v[0].clone(), v[1].clone()))
}
