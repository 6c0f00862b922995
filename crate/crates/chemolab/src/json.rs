//! Minimal JSON emitter. Floats print with 17 significant digits so reruns
//! are bit-comparable; keys are emitted in a fixed order.

use std::fmt::Write as _;

pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

pub fn float(x: f64) -> JsonValue {
    JsonValue::Float(x)
}

pub fn string(s: impl Into<String>) -> JsonValue {
    JsonValue::Str(s.into())
}

pub fn object(fields: Vec<(&str, JsonValue)>) -> JsonValue {
    JsonValue::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    )
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn render(value: &JsonValue, indent: usize, out: &mut String) {
    match value {
        JsonValue::Null => out.push_str("null"),
        JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        JsonValue::Int(i) => {
            let _ = write!(out, "{i}");
        }
        JsonValue::UInt(u) => {
            let _ = write!(out, "{u}");
        }
        JsonValue::Float(x) => {
            if x.is_finite() {
                // 17 significant digits: 1 leading + 16 after the point
                let _ = write!(out, "{x:.16e}");
            } else {
                out.push_str("null");
            }
        }
        JsonValue::Str(s) => escape(s, out),
        JsonValue::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                render(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        JsonValue::Object(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                escape(key, out);
                out.push_str(": ");
                render(val, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

pub fn to_string(value: &JsonValue) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out.push('\n');
    out
}

fn render_compact(value: &JsonValue, out: &mut String) {
    match value {
        JsonValue::Null => out.push_str("null"),
        JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        JsonValue::Int(i) => {
            let _ = write!(out, "{i}");
        }
        JsonValue::UInt(u) => {
            let _ = write!(out, "{u}");
        }
        JsonValue::Float(x) => {
            if x.is_finite() {
                let _ = write!(out, "{x:.16e}");
            } else {
                out.push_str("null");
            }
        }
        JsonValue::Str(s) => escape(s, out),
        JsonValue::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_compact(item, out);
            }
            out.push(']');
        }
        JsonValue::Object(fields) => {
            out.push('{');
            for (i, (key, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                escape(key, out);
                out.push(':');
                render_compact(val, out);
            }
            out.push('}');
        }
    }
}

/// Single-line rendering, used to embed configs in CSV comments.
pub fn to_line(value: &JsonValue) -> String {
    let mut out = String::new();
    render_compact(value, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_has_17_significant_digits_and_round_trips() {
        let x = std::f64::consts::PI;
        let rendered = to_string(&float(x));
        let digits: usize = rendered
            .chars()
            .take_while(|&c| c != 'e')
            .filter(|c| c.is_ascii_digit())
            .count();
        assert_eq!(digits, 17, "{rendered}");
        let parsed: f64 = rendered.trim().parse().unwrap();
        assert_eq!(parsed, x);
    }

    #[test]
    fn renders_nested_object() {
        let v = object(vec![
            ("verdict", string("bounded")),
            ("t_final", float(1.0)),
            ("flags", JsonValue::Array(vec![JsonValue::Bool(true)])),
        ]);
        let s = to_string(&v);
        assert!(s.contains("\"verdict\": \"bounded\""));
        assert!(s.contains("1.0000000000000000e0"));
    }

    #[test]
    fn escapes_strings() {
        let s = to_string(&string("a\"b\\c\nd"));
        assert_eq!(s.trim(), r#""a\"b\\c\nd""#);
    }
}
