//! JSON persistence for [`AlgebraSystem`].
//!
//! Layout:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "basis": ["1", "t"],
//!   "product": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]],
//!   "brackets": {"b1": {"arity": 2, "entries": [{"indices": [0, 1], "value": ["0", "1"]}]}},
//!   "derivations": {"euler": [["0", "0"], ["0", "1"]]}
//! }
//! ```
//!
//! `product[i][j][k]` is the coefficient of `e_k` in `e_i e_j` and
//! `derivations[name][k][j]` the coefficient of `e_k` in `D(e_j)`. Bracket
//! keys are strictly increasing and 0-based. Scalars are written as canonical
//! `"p"` or `"p/q"` strings; plain JSON integers are accepted on input.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{Map, Value};

use tpn_core::{AlgebraSystem, DerivationMatrix, ElementVector, ProductTensor, Rational, SkewBracket};

use crate::error::CliError;

struct Scalar(Rational);

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string such as \"-3/4\" or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Scalar, E> {
                s.parse().map(Scalar).map_err(|e| E::custom(format!("invalid rational {s:?}: {e}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar(Rational::from_integer(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                self.visit_str(&v.to_string())
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    indices: Vec<usize>,
    value: Vec<Scalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBracket {
    arity: usize,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    dimension: usize,
    #[serde(default)]
    basis: Option<Vec<String>>,
    product: Vec<Vec<Vec<Scalar>>>,
    #[serde(default)]
    brackets: BTreeMap<String, RawBracket>,
    #[serde(default)]
    derivations: BTreeMap<String, Vec<Vec<Scalar>>>,
}

fn expect_len(field: &str, found: usize, expected: usize) -> Result<(), String> {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{field}: expected {expected} items, found {found}"))
    }
}

fn scalars(v: Vec<Scalar>) -> Vec<Rational> {
    v.into_iter().map(|s| s.0).collect()
}

fn matrix(field: &str, rows: Vec<Vec<Scalar>>, d: usize) -> Result<Vec<Vec<Rational>>, String> {
    expect_len(field, rows.len(), d)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            expect_len(&format!("{field}[{i}]"), row.len(), d)?;
            Ok(scalars(row))
        })
        .collect()
}

fn build(raw: RawSystem) -> Result<AlgebraSystem, String> {
    let d = raw.dimension;
    if d == 0 {
        return Err("dimension: must be positive".into());
    }
    let product = raw
        .product
        .into_iter()
        .enumerate()
        .map(|(i, plane)| matrix(&format!("product[{i}]"), plane, d))
        .collect::<Result<Vec<_>, _>>()?;
    expect_len("product", product.len(), d)?;
    let product = ProductTensor::from_nested(d, product).map_err(|e| format!("product: {e}"))?;
    let mut sys = AlgebraSystem::new(product);

    if let Some(labels) = raw.basis {
        expect_len("basis", labels.len(), d)?;
        sys = sys.with_basis_labels(labels).map_err(|e| format!("basis: {e}"))?;
    }

    for (name, rb) in raw.brackets {
        let at = format!("brackets.{name}");
        if rb.arity < 2 {
            return Err(format!("{at}.arity: must be at least 2, found {}", rb.arity));
        }
        let mut entries = Vec::with_capacity(rb.entries.len());
        for (e, entry) in rb.entries.into_iter().enumerate() {
            let here = format!("{at}.entries[{e}]");
            expect_len(&format!("{here}.indices"), entry.indices.len(), rb.arity)?;
            if let Some(&bad) = entry.indices.iter().find(|&&i| i >= d) {
                return Err(format!("{here}.indices: index {bad} out of range for dimension {d}"));
            }
            if entry.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("{here}.indices: indices not strictly increasing: {:?}", entry.indices));
            }
            expect_len(&format!("{here}.value"), entry.value.len(), d)?;
            entries.push((entry.indices, ElementVector::from_coords(scalars(entry.value))));
        }
        let bracket = SkewBracket::from_entries(d, rb.arity, entries).map_err(|e| format!("{at}: {e}"))?;
        sys = sys.with_bracket(name, bracket).map_err(|e| format!("{at}: {e}"))?;
    }

    for (name, rows) in raw.derivations {
        let at = format!("derivations.{name}");
        let m = DerivationMatrix::from_rows(matrix(&at, rows, d)?).map_err(|e| format!("{at}: {e}"))?;
        sys = sys.with_derivation(name, m).map_err(|e| format!("{at}: {e}"))?;
    }
    Ok(sys)
}

/// Parses and validates a system document. The error message names the
/// offending field and, for syntax errors, the line and column.
pub fn parse_system(text: &str) -> Result<AlgebraSystem, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawSystem = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("{path}: {}", e.inner())
        }
    })?;
    de.end().map_err(|e| e.to_string())?;
    build(raw)
}

pub fn load_system(path: &Path) -> Result<AlgebraSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_system(&text).map_err(|message| CliError::Format { path: path.to_path_buf(), message })
}

fn rational_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn row_value(row: &[Rational]) -> Value {
    Value::Array(row.iter().map(rational_value).collect())
}

/// The document tree for a system, with keys in schema order.
pub fn system_to_value(sys: &AlgebraSystem) -> Value {
    let mut doc = Map::new();
    doc.insert("dimension".into(), sys.dim().into());
    if let Some(labels) = sys.basis_labels() {
        doc.insert("basis".into(), labels.iter().map(|l| Value::String(l.clone())).collect());
    }
    let product = sys.product().to_nested();
    doc.insert(
        "product".into(),
        Value::Array(product.iter().map(|plane| Value::Array(plane.iter().map(|r| row_value(r)).collect())).collect()),
    );
    let mut brackets = Map::new();
    for (name, b) in sys.brackets() {
        let entries: Vec<Value> = b
            .entries()
            .iter()
            .map(|(key, value)| {
                let mut e = Map::new();
                e.insert("indices".into(), key.iter().map(|&i| Value::from(i)).collect());
                e.insert("value".into(), row_value(value.coords()));
                Value::Object(e)
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("arity".into(), b.arity().into());
        obj.insert("entries".into(), Value::Array(entries));
        brackets.insert(name.clone(), Value::Object(obj));
    }
    doc.insert("brackets".into(), Value::Object(brackets));
    let mut derivations = Map::new();
    for (name, d) in sys.derivations() {
        derivations.insert(name.clone(), Value::Array(d.rows().iter().map(|r| row_value(r)).collect()));
    }
    doc.insert("derivations".into(), Value::Object(derivations));
    Value::Object(doc)
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(map) => map.values().all(|i| match i {
            Value::Array(_) => is_flat(i),
            Value::Object(_) => false,
            _ => true,
        }),
        _ => true,
    }
}

fn write_compact(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_compact(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_compact(item, out);
            }
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Deterministic JSON text: two-space indentation, arrays of scalars on one
/// line, flat objects inside arrays on one line, trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                if item.is_object() && is_flat(item) {
                    write_compact(item, out);
                } else {
                    write_value(item, depth + 1, out);
                }
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push('}');
        }
        other => write_compact(other, out),
    }
}

pub fn render_system(sys: &AlgebraSystem) -> String {
    to_json_text(&system_to_value(sys))
}

pub fn save_system(sys: &AlgebraSystem, path: &Path) -> Result<(), CliError> {
    write_text(path, &render_system(sys))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
