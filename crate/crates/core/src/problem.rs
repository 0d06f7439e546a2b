//! Problem files: a TOML encoding of graded-polarized mixed Hodge data.
//!
//! ```toml
//! name = "example"
//! dimension = 2
//! labels = ["e0", "e-2"]
//! type = "II"                       # optional: pure, I or II
//!
//! [weight]                          # graded pieces: weight -> vectors
//! "0" = [["1", "0"]]
//! "-2" = [["0", "1"]]
//!
//! [hodge]                           # F^p -> spanning vectors
//! "0" = [["1", "i"]]
//!
//! [polarization]                    # Q_k in the graded basis of weight k
//! "0" = [["1"]]
//! "-2" = [["1"]]
//!
//! [[nilpotent]]
//! name = "N"
//! matrix = [["0", "0"], ["1", "0"]]
//!
//! [height]                          # optional
//! gen_one = ["1", "0"]
//! gen_one_prime = ["0", "1"]
//! ```
//!
//! Entries are Gaussian rationals written `a/b+c/d*i` (strings) or integers.

use std::collections::BTreeMap;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Subspace, Vector, GR};
use crate::mhs::{DecreasingFiltration, HeightBlock, MixedHodgeData, Nilpotent, TypeTag};

fn entry(v: &Value, at: &str) -> Result<GR> {
    match v {
        Value::Integer(k) => Ok(GR::from_int(*k)),
        Value::String(s) => s.parse::<GR>().map_err(|e| Error::parse(at, format!("bad number '{}': {}", s, e))),
        other => Err(Error::parse(at, format!("expected a number or string, found {}", other.type_str()))),
    }
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(at, format!("expected an array, found {}", v.type_str())))
}

fn vector(v: &Value, dim: usize, at: &str) -> Result<Vector> {
    let a = array(v, at)?;
    if a.len() != dim {
        return Err(Error::parse(at, format!("expected {} entries, found {}", dim, a.len())));
    }
    a.iter().enumerate().map(|(i, x)| entry(x, &format!("{}[{}]", at, i))).collect()
}

fn vectors(v: &Value, dim: usize, at: &str) -> Result<Vec<Vector>> {
    array(v, at)?.iter().enumerate().map(|(i, x)| vector(x, dim, &format!("{}[{}]", at, i))).collect()
}

fn matrix(v: &Value, rows: usize, cols: usize, at: &str) -> Result<ExactMatrix> {
    let rs = array(v, at)?;
    if rs.len() != rows {
        return Err(Error::parse(at, format!("expected {} rows, found {}", rows, rs.len())));
    }
    let rows: Vec<Vector> = rs.iter().enumerate().map(|(i, r)| vector(r, cols, &format!("{}[{}]", at, i))).collect::<Result<_>>()?;
    Ok(if rows.is_empty() { ExactMatrix::zeros(0, cols) } else { ExactMatrix::from_rows(rows) })
}

fn index_table<'a>(root: &'a Table, key: &str, required: bool) -> Result<Vec<(i32, &'a Value)>> {
    let Some(v) = root.get(key) else {
        return if required { Err(Error::parse(key, "missing table")) } else { Ok(Vec::new()) };
    };
    let t = v.as_table().ok_or_else(|| Error::parse(key, "expected a table keyed by integers"))?;
    t.iter()
        .map(|(k, v)| {
            let i = k.trim().parse::<i32>().map_err(|_| Error::parse(format!("{}.{}", key, k), "key is not an integer"))?;
            Ok((i, v))
        })
        .collect()
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<MixedHodgeData> {
    let root: Table = text.parse::<Table>().map_err(|e| {
        let loc = e
            .span()
            .map(|s| format!("line {}", text[..s.start.min(text.len())].lines().count().max(1)))
            .unwrap_or_else(|| "document".into());
        Error::parse(loc, e.message().to_string())
    })?;
    let name = match root.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::parse("name", "expected a string")),
        None => "unnamed".into(),
    };
    let dim = match root.get("dimension") {
        Some(Value::Integer(d)) if *d > 0 => *d as usize,
        Some(_) => return Err(Error::parse("dimension", "expected a positive integer")),
        None => return Err(Error::parse("dimension", "missing")),
    };
    let labels = match root.get("labels") {
        None => (0..dim).map(|i| format!("v{}", i)).collect(),
        Some(v) => {
            let a = array(v, "labels")?;
            if a.len() != dim {
                return Err(Error::parse("labels", format!("expected {} labels", dim)));
            }
            a.iter()
                .enumerate()
                .map(|(i, x)| x.as_str().map(String::from).ok_or_else(|| Error::parse(format!("labels[{}]", i), "expected a string")))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let tag = match root.get("type") {
        None => None,
        Some(Value::String(s)) => Some(s.parse::<TypeTag>().map_err(|e| Error::parse("type", e.to_string()))?),
        Some(_) => return Err(Error::parse("type", "expected a string")),
    };

    let mut weight_basis = BTreeMap::new();
    for (k, v) in index_table(&root, "weight", true)? {
        weight_basis.insert(k, vectors(v, dim, &format!("weight.{}", k))?);
    }
    let total: usize = weight_basis.values().map(|v: &Vec<Vector>| v.len()).sum();
    if total != dim {
        return Err(Error::parse("weight", format!("graded pieces have {} vectors in total, expected {}", total, dim)));
    }

    let mut steps = BTreeMap::new();
    for (p, v) in index_table(&root, "hodge", true)? {
        steps.insert(p, Subspace::span(dim, vectors(v, dim, &format!("hodge.{}", p))?));
    }
    let f = DecreasingFiltration::new(dim, steps).map_err(|e| Error::parse("hodge", e.to_string()))?;

    let mut q = BTreeMap::new();
    for (k, v) in index_table(&root, "polarization", true)? {
        let d = weight_basis.get(&k).map_or(0, |b| b.len());
        q.insert(k, matrix(v, d, d, &format!("polarization.{}", k))?);
    }

    let mut nilpotents = Vec::new();
    if let Some(v) = root.get("nilpotent") {
        for (i, item) in array(v, "nilpotent")?.iter().enumerate() {
            let at = format!("nilpotent[{}]", i);
            let t = item.as_table().ok_or_else(|| Error::parse(&at, "expected a table"))?;
            let name = t.get("name").and_then(|n| n.as_str()).map(String::from).unwrap_or_else(|| format!("N{}", i + 1));
            let m = t.get("matrix").ok_or_else(|| Error::parse(format!("{}.matrix", at), "missing"))?;
            nilpotents.push(Nilpotent { name, matrix: matrix(m, dim, dim, &format!("{}.matrix", at))? });
        }
    }

    let height = match root.get("height") {
        None => None,
        Some(v) => {
            let t = v.as_table().ok_or_else(|| Error::parse("height", "expected a table"))?;
            let get = |k: &str| -> Result<Vector> {
                let at = format!("height.{}", k);
                vector(t.get(k).ok_or_else(|| Error::parse(&at, "missing"))?, dim, &at)
            };
            let tag = t.get("tag").and_then(|x| x.as_str()).map(String::from);
            Some(HeightBlock { gen_one: get("gen_one")?, gen_one_prime: get("gen_one_prime")?, tag })
        }
    };

    Ok(MixedHodgeData::new(name, weight_basis, f, q, nilpotents)?.with_labels(labels).with_type(tag).with_height(height))
}

fn gr_value(x: &GR) -> Value {
    Value::String(x.to_string())
}

fn vec_value(v: &[GR]) -> Value {
    Value::Array(v.iter().map(gr_value).collect())
}

fn mat_value(m: &ExactMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| vec_value(r)).collect())
}

/// Writes data back in the problem-file format; `parse_problem` inverts it.
pub fn dump_problem(data: &MixedHodgeData) -> String {
    let mut root = Table::new();
    root.insert("name".into(), Value::String(data.name.clone()));
    root.insert("dimension".into(), Value::Integer(data.dim as i64));
    root.insert("labels".into(), Value::Array(data.labels.iter().cloned().map(Value::String).collect()));
    if let Some(t) = data.type_tag {
        root.insert("type".into(), Value::String(t.to_string()));
    }
    let mut w = Table::new();
    for (k, vs) in &data.weight_basis {
        w.insert(k.to_string(), Value::Array(vs.iter().map(|v| vec_value(v)).collect()));
    }
    root.insert("weight".into(), Value::Table(w));
    let mut h = Table::new();
    for (p, s) in data.f.steps() {
        h.insert(p.to_string(), Value::Array(s.basis().iter().map(|v| vec_value(v)).collect()));
    }
    root.insert("hodge".into(), Value::Table(h));
    let mut q = Table::new();
    for (k, m) in &data.q.forms {
        q.insert(k.to_string(), mat_value(m));
    }
    root.insert("polarization".into(), Value::Table(q));
    if !data.nilpotents.is_empty() {
        let ns = data
            .nilpotents
            .iter()
            .map(|n| {
                let mut t = Table::new();
                t.insert("name".into(), Value::String(n.name.clone()));
                t.insert("matrix".into(), mat_value(&n.matrix));
                Value::Table(t)
            })
            .collect();
        root.insert("nilpotent".into(), Value::Array(ns));
    }
    if let Some(hb) = &data.height {
        let mut t = Table::new();
        t.insert("gen_one".into(), vec_value(&hb.gen_one));
        t.insert("gen_one_prime".into(), vec_value(&hb.gen_one_prime));
        if let Some(tag) = &hb.tag {
            t.insert("tag".into(), Value::String(tag.clone()));
        }
        root.insert("height".into(), Value::Table(t));
    }
    toml::to_string(&root).expect("problem tables always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
name = "ht"
dimension = 2
labels = ["e0", "e-2"]
[weight]
"0" = [["1", "0"]]
"-2" = [[0, 1]]
[hodge]
"0" = [["1", "i"]]
[polarization]
"0" = [["1"]]
"-2" = [["1"]]
"#;

    #[test]
    fn parses_and_round_trips() {
        let d = parse_problem(SMALL).unwrap();
        assert_eq!(d.dim, 2);
        assert_eq!(d.labels, vec!["e0", "e-2"]);
        assert_eq!(d.f.get(0), Subspace::span(2, vec![vec![GR::from_int(1), GR::i()]]));
        let again = parse_problem(&dump_problem(&d)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn malformed_rational_is_located() {
        let bad = SMALL.replace(r#""0" = [["1"]]"#, r#""0" = [["1//2"]]"#);
        match parse_problem(&bad).unwrap_err() {
            Error::Parse { location, .. } => assert_eq!(location, "polarization.0[0][0]"),
            e => panic!("unexpected {:?}", e),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let bad = "dimension = 2\nname = \n";
        match parse_problem(bad).unwrap_err() {
            Error::Parse { location, .. } => assert!(location.starts_with("line")),
            e => panic!("unexpected {:?}", e),
        }
    }

    #[test]
    fn wrong_lengths_rejected() {
        let bad = SMALL.replace(r#"[[0, 1]]"#, r#"[[0, 1, 2]]"#);
        assert!(matches!(parse_problem(&bad), Err(Error::Parse { .. })));
    }
}
