//! Rendering of command results as JSON or as `key: value` lines.

use nil_cover::fmt::sig17;
use serde_json::Value;

pub fn render(value: &Value, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("values are always serializable");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    match value {
        Value::Object(_) | Value::Array(_) => lines(value, "", &mut out),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => sig17(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                lines(child, &key, out);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: {}\n", joined.join(", ")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                lines(child, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
    }
}
