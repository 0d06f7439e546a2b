//! Report values: built once as JSON, rendered either as JSON or as
//! indented `key = value` text with matrices laid out row by row.

use serde_json::{Map, Value};
use sl2orbit::linalg::{ExactMatrix, Rational, Subspace, Vector};
use sl2orbit::mhs::{DecreasingFiltration, IncreasingFiltration};

pub fn mat(m: &ExactMatrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

pub fn vector(v: &Vector) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn basis(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(vector).collect())
}

pub fn q(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn increasing(w: &IncreasingFiltration) -> Value {
    let mut m = Map::new();
    for k in w.weights() {
        m.insert(k.to_string(), basis(&w.get(k)));
    }
    Value::Object(m)
}

pub fn decreasing(f: &DecreasingFiltration) -> Value {
    let mut m = Map::new();
    for p in f.indices() {
        m.insert(p.to_string(), basis(&f.get(p)));
    }
    Value::Object(m)
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn render(v: &Value, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(v).expect("json");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    match v {
        Value::Object(m) => render_object(m, 0, &mut out),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Rows of scalars of equal, nonzero length.
fn as_matrix(v: &Value) -> Option<Vec<Vec<String>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    for r in rows {
        let r = r.as_array()?;
        if r.is_empty() || !r.iter().all(is_scalar) {
            return None;
        }
        out.push(r.iter().map(scalar).collect::<Vec<_>>());
    }
    let n = out[0].len();
    out.iter().all(|r| r.len() == n).then_some(out)
}

fn render_object(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        render_entry(&format!("{}{}", pad, k), v, indent, out);
    }
}

fn render_entry(head: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent + 2);
    if is_scalar(v) {
        out.push_str(&format!("{} = {}\n", head, scalar(v)));
    } else if let Some(rows) = as_matrix(v) {
        out.push_str(&format!("{} =\n", head));
        let width = rows.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        for r in rows {
            let cells: Vec<String> = r.iter().map(|c| format!("{:>w$}", c, w = width)).collect();
            out.push_str(&format!("{}[{}]\n", pad, cells.join("  ")));
        }
    } else if let Value::Array(items) = v {
        if items.iter().all(is_scalar) {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{} = [{}]\n", head, cells.join(", ")));
        } else {
            out.push_str(&format!("{}:\n", head));
            for (i, item) in items.iter().enumerate() {
                render_entry(&format!("{}[{}]", pad, i), item, indent + 2, out);
            }
        }
    } else if let Value::Object(m) = v {
        out.push_str(&format!("{}:\n", head));
        render_object(m, indent + 2, out);
    }
}
