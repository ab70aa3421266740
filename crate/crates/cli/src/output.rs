//! Report rendering. Every format is derived from the JSON value.

use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (k, v) in flatten(report) {
                out.push_str(&csv_field(&k));
                out.push(',');
                out.push_str(&csv_field(&v));
                out.push('\n');
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            human(report, 0, &mut out);
            out
        }
    }
}

/// Leaf values keyed by their dotted path.
fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, c) in m {
                walk(c, join(k), out);
            }
        }
        Value::Array(a) if a.iter().all(|c| !c.is_object() && !c.is_array()) => {
            out.push((path, Value::Array(a.clone()).to_string()));
        }
        Value::Array(a) => {
            for (i, c) in a.iter().enumerate() {
                walk(c, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn human(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, c) in m {
                match c {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        human(c, depth + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for e in a {
                            out.push_str(&format!("{pad}  -\n"));
                            human(e, depth + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(c))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattens_paths() {
        let v = json!({ "a": { "b": [1, 2] }, "c": "x,y", "d": [{ "e": null }] });
        let s = render(&v, Format::Csv);
        assert_eq!(s, "key,value\na.b,\"[1,2]\"\nc,\"x,y\"\nd.0.e,null\n");
    }

    #[test]
    fn human_nests() {
        let v = json!({ "a": { "b": 1 }, "c": null });
        assert_eq!(render(&v, Format::Human), "a:\n  b: 1\nc: -\n");
    }
}
