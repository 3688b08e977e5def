//! Report envelope and the canonical JSON writer.

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "cm-glue-report/1";
pub const TOOL_VERSION: &str = concat!("cm-glue ", env!("CARGO_PKG_VERSION"));

/// Significant digits kept for every float in a report.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub tool: String,
    pub schema: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            tool: TOOL_VERSION.into(),
            schema: SCHEMA_VERSION.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub status: Status,
    pub versions: Versions,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, status: Status) -> Self {
        Report {
            command: command.into(),
            inputs,
            results,
            status,
            versions: Versions::default(),
        }
    }

    pub fn to_canonical(&self) -> String {
        to_canonical(&serde_json::to_value(self).expect("reports serialize"))
    }
}

/// Rounds to [`FLOAT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_float(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn write_number(n: &serde_json::Number, out: &mut String) {
    if n.is_i64() || n.is_u64() {
        out.push_str(&n.to_string());
        return;
    }
    match n.as_f64().map(round_float) {
        Some(x) if x.is_finite() => {
            // integral floats keep a fractional part so that the type is stable
            if x.fract() == 0.0 && x.abs() < 1e15 {
                out.push_str(&format!("{x:.1}"));
            } else {
                out.push_str(&serde_json::Number::from_f64(x).expect("finite").to_string());
            }
        }
        _ => out.push_str("null"),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(n, out),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(&map[k.as_str()], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Pretty JSON with sorted keys, floats at [`FLOAT_DIGITS`] significant digits and
/// non-finite floats as `null`, followed by a newline.
pub fn to_canonical(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

/// Builds a JSON object from `(key, value)` pairs.
pub fn object<I, K>(pairs: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .collect::<Map<_, _>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_form() {
        let v = json!({"b": [1, 2.5, null], "a": {"y": 1.0 / 3.0, "x": -0.0}, "c": []});
        let s = to_canonical(&v);
        assert_eq!(
            s,
            "{\n  \"a\": {\n    \"x\": 0.0,\n    \"y\": 0.333333333333\n  },\n  \"b\": [1, 2.5, null],\n  \"c\": []\n}\n"
        );
        assert_eq!(
            round_float(std::f64::consts::PI).to_string(),
            "3.14159265359"
        );
        assert_eq!(round_float(1.0e-17), 1.0e-17);
        assert!(to_canonical(&json!(f64::NAN)).starts_with("null"));
    }
}
