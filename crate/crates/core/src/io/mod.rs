//! File formats: JSON for spaces, structures and reports; DOT and SVG exports.

mod dot;
mod json;
mod plot;

pub use dot::{space_to_dot, structure_to_dot};
pub use json::{
    load_document, parse_space, parse_structure, space_to_json, structure_to_json, Document,
};
pub use plot::coordinate_scatter_svg;

use serde_json::{Map, Value};

use crate::Rational;

/// A length as a JSON number: an integer when exact, otherwise the nearest
/// double.
pub fn length_json(r: Rational) -> Value {
    if r.is_integer() {
        Value::from(*r.numer())
    } else {
        Value::from(*r.numer() as f64 / *r.denom() as f64)
    }
}

/// Exact text form: `"7"` or `"7/2"`.
pub fn length_exact(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rebuilds every object with its keys in sorted order.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, canonicalize(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

/// Pretty, key-sorted JSON text with a trailing newline.
pub fn to_stable_string(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&canonicalize(value)).expect("JSON values always serialize");
    text.push('\n');
    text
}
