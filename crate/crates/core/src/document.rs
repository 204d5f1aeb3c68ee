//! JSON documents for representations, subspace systems and operators.
//!
//! Matrices are row-major arrays of rows; each entry is `[re, im]` (a bare
//! number is read as a real entry). Parse failures name the offending path,
//! e.g. `maps.a1[2][0]`.

use std::io::Read;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::quiver::{Arrow, Quiver};
use crate::rep::Representation;
use crate::settings::Settings;
use crate::subspace::SubspaceSystem;

/// Any of the three document kinds, recognized by its top-level keys.
#[derive(Clone, Debug)]
pub enum Document {
    Representation(Representation),
    System(SubspaceSystem),
    Operator(CMat),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Representation(_) => "representation",
            Document::System(_) => "system",
            Document::Operator(_) => "operator",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Document::Representation(r) => rep_to_json(r, None),
            Document::System(s) => system_to_json(s),
            Document::Operator(a) => json!({ "operator": matrix_to_json(a) }),
        }
    }
}

fn parse_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn number(v: &Value, path: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| parse_err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(parse_err(path, "entry is not finite"));
    }
    Ok(x)
}

fn entry(v: &Value, path: &str) -> Result<linalg::Complex64> {
    match v {
        Value::Array(pair) => {
            if pair.len() != 2 {
                return Err(parse_err(path, format!("expected [re, im], got {} values", pair.len())));
            }
            Ok(linalg::c(number(&pair[0], &format!("{path}[0]"))?, number(&pair[1], &format!("{path}[1]"))?))
        }
        Value::Number(_) => Ok(linalg::real(number(v, path)?)),
        _ => Err(parse_err(path, "expected [re, im] or a number")),
    }
}

/// Parses a matrix of known shape.
pub fn matrix_from_json(v: &Value, rows: usize, cols: usize, path: &str) -> Result<CMat> {
    let arr = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(parse_err(path, format!("has {} rows, expected {rows}", arr.len())));
    }
    let mut m = CMat::zeros(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let r = row.as_array().ok_or_else(|| parse_err(&rpath, "expected an array of entries"))?;
        if r.len() != cols {
            return Err(parse_err(&rpath, format!("has {} entries, expected {cols}", r.len())));
        }
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = entry(x, &format!("{rpath}[{j}]"))?;
        }
    }
    Ok(m)
}

/// Parses a matrix whose shape is read from the data; an empty array is
/// `0 x 0`.
pub fn matrix_from_json_any(v: &Value, path: &str) -> Result<CMat> {
    let arr = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    let cols = match arr.first() {
        Some(r) => r.as_array().ok_or_else(|| parse_err(&format!("{path}[0]"), "expected an array of entries"))?.len(),
        None => 0,
    };
    matrix_from_json(v, arr.len(), cols, path)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(path, format!("missing key `{key}`")))
}

fn string(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| parse_err(path, "expected a string"))
}

fn count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(path, "expected a nonnegative integer"))
}

pub fn quiver_to_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertices(),
        "arrows": q.arrows().iter().map(|a| json!({"name": a.name, "src": a.source, "dst": a.target})).collect::<Vec<_>>(),
    })
}

pub fn quiver_from_json(v: &Value) -> Result<Quiver> {
    let obj = object(v, "quiver")?;
    let vertices = field(obj, "vertices", "quiver")?
        .as_array()
        .ok_or_else(|| parse_err("quiver.vertices", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &format!("quiver.vertices[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let arrows = field(obj, "arrows", "quiver")?
        .as_array()
        .ok_or_else(|| parse_err("quiver.arrows", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let path = format!("quiver.arrows[{i}]");
            let o = object(a, &path)?;
            Ok(Arrow::new(
                string(field(o, "name", &path)?, &format!("{path}.name"))?,
                string(field(o, "src", &path)?, &format!("{path}.src"))?,
                string(field(o, "dst", &path)?, &format!("{path}.dst"))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Quiver::new(vertices, arrows).map_err(|e| parse_err("quiver", e))
}

/// Representation document; `meta` is copied verbatim when given.
pub fn rep_to_json(rep: &Representation, meta: Option<Value>) -> Value {
    let q = rep.quiver();
    let mut dims = Map::new();
    for (v, name) in q.vertices().iter().enumerate() {
        dims.insert(name.clone(), json!(rep.dims()[v]));
    }
    let mut maps = Map::new();
    for (k, a) in q.arrows().iter().enumerate() {
        maps.insert(a.name.clone(), matrix_to_json(&rep.maps()[k]));
    }
    let mut out = Map::new();
    out.insert("quiver".into(), quiver_to_json(q));
    out.insert("dims".into(), Value::Object(dims));
    out.insert("maps".into(), Value::Object(maps));
    if let Some(m) = meta {
        out.insert("meta".into(), m);
    }
    Value::Object(out)
}

pub fn rep_from_json(v: &Value) -> Result<Representation> {
    let obj = object(v, "document")?;
    let quiver = quiver_from_json(field(obj, "quiver", "document")?)?;
    let dims_obj = object(field(obj, "dims", "document")?, "dims")?;
    for key in dims_obj.keys() {
        if quiver.vertex_index(key).is_err() {
            return Err(parse_err(&format!("dims.{key}"), "not a vertex of the quiver"));
        }
    }
    let dims = quiver
        .vertices()
        .iter()
        .map(|name| {
            let path = format!("dims.{name}");
            count(dims_obj.get(name).ok_or_else(|| parse_err("dims", format!("missing vertex `{name}`")))?, &path)
        })
        .collect::<Result<Vec<_>>>()?;
    let maps_obj = object(field(obj, "maps", "document")?, "maps")?;
    for key in maps_obj.keys() {
        if quiver.arrow_index(key).is_none() {
            return Err(parse_err(&format!("maps.{key}"), "not an arrow of the quiver"));
        }
    }
    let maps = quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let (s, t) = quiver.ends(k);
            let path = format!("maps.{}", a.name);
            let m = maps_obj.get(&a.name).ok_or_else(|| parse_err("maps", format!("missing arrow `{}`", a.name)))?;
            matrix_from_json(m, dims[t], dims[s], &path)
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(quiver, dims, maps)
}

pub fn system_to_json(s: &SubspaceSystem) -> Value {
    json!({
        "ambient": s.ambient(),
        "subspaces": s.subspaces().iter().map(|e| json!({"name": e.name, "basis": matrix_to_json(&e.basis)})).collect::<Vec<_>>(),
    })
}

pub fn system_from_json(v: &Value, settings: &Settings) -> Result<SubspaceSystem> {
    let obj = object(v, "document")?;
    let d = count(field(obj, "ambient", "document")?, "ambient")?;
    let subs =
        field(obj, "subspaces", "document")?.as_array().ok_or_else(|| parse_err("subspaces", "expected an array"))?;
    let mut spanning = Vec::with_capacity(subs.len());
    for (i, e) in subs.iter().enumerate() {
        let path = format!("subspaces[{i}]");
        let o = object(e, &path)?;
        let name = match o.get("name") {
            Some(n) => string(n, &format!("{path}.name"))?,
            None => format!("E{}", i + 1),
        };
        let b = field(o, "basis", &path)?;
        let rows = b.as_array().map(|a| a.len()).unwrap_or(0);
        let cols = b.as_array().and_then(|a| a.first()).and_then(|r| r.as_array()).map(|r| r.len()).unwrap_or(0);
        if rows != d {
            return Err(parse_err(&format!("{path}.basis"), format!("has {rows} rows, expected {d}")));
        }
        spanning.push((name, matrix_from_json(b, d, cols, &format!("{path}.basis"))?));
    }
    SubspaceSystem::new(d, spanning, settings)
}

pub fn operator_from_json(v: &Value) -> Result<CMat> {
    let obj = object(v, "document")?;
    let m = matrix_from_json_any(field(obj, "operator", "document")?, "operator")?;
    if m.nrows() != m.ncols() {
        return Err(parse_err("operator", format!("is {}x{}, expected a square matrix", m.nrows(), m.ncols())));
    }
    Ok(m)
}

pub fn document_from_json(v: &Value, settings: &Settings) -> Result<Document> {
    let obj = object(v, "document")?;
    if obj.contains_key("quiver") {
        Ok(Document::Representation(rep_from_json(v)?))
    } else if obj.contains_key("subspaces") {
        Ok(Document::System(system_from_json(v, settings)?))
    } else if obj.contains_key("operator") {
        Ok(Document::Operator(operator_from_json(v)?))
    } else {
        Err(parse_err("document", "expected one of the keys `quiver`, `subspaces`, `operator`"))
    }
}

/// Reads JSON from a file, or from standard input when the path is `-`.
pub fn read_json(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn read_document(path: &str, settings: &Settings) -> Result<Document> {
    document_from_json(&read_json(path)?, settings).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        other => other,
    })
}

pub fn read_representation(path: &str, settings: &Settings) -> Result<Representation> {
    match read_document(path, settings)? {
        Document::Representation(r) => Ok(r),
        other => Err(Error::Parse(format!("{path}: expected a representation document, found a {}", other.kind()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{example, Example};
    use crate::subspace::from_operator;

    #[test]
    fn representation_round_trip() {
        let rep = example(Example::Ex8 { lambda: linalg::c(0.5, -1.0), n: 3 }).unwrap();
        let v = rep_to_json(&rep, Some(json!({"model": "ex8"})));
        assert_eq!(v["dims"]["1"], json!(3));
        assert_eq!(v["maps"]["a2"][0][0], json!([0.5, -1.0]));
        assert_eq!(rep_from_json(&v).unwrap(), rep);
    }

    #[test]
    fn zero_dimensional_spaces_round_trip() {
        let rep = crate::kronecker::build_family(crate::kronecker::KroneckerFamily::Wide { n: 0 }).unwrap();
        let v = rep_to_json(&rep, None);
        assert_eq!(v["maps"]["a1"], json!([]));
        assert_eq!(rep_from_json(&v).unwrap(), rep);
        let tall = crate::kronecker::build_family(crate::kronecker::KroneckerFamily::Tall { n: 0 }).unwrap();
        assert_eq!(rep_from_json(&rep_to_json(&tall, None)).unwrap(), tall);
    }

    #[test]
    fn shape_errors_are_positional() {
        let rep = example(Example::Ex6).unwrap();
        let mut v = rep_to_json(&rep, None);
        v["maps"]["a2"][1] = json!([[0.0, 0.0]]);
        let msg = rep_from_json(&v).unwrap_err().to_string();
        assert!(msg.contains("maps.a2[1]") && msg.contains("expected 2"), "{msg}");
        let mut v = rep_to_json(&rep, None);
        v["maps"]["a1"][0][1] = json!([1.0]);
        let msg = rep_from_json(&v).unwrap_err().to_string();
        assert!(msg.contains("maps.a1[0][1]"), "{msg}");
        let mut v = rep_to_json(&rep, None);
        v["dims"]["9"] = json!(1);
        assert!(rep_from_json(&v).unwrap_err().to_string().contains("dims.9"));
    }

    #[test]
    fn system_and_operator_documents() {
        let s = Settings::default();
        let sys = from_operator(&crate::kronecker::jordan_block(linalg::real(0.0), 2), &s).unwrap();
        let v = system_to_json(&sys);
        let back = system_from_json(&v, &s).unwrap();
        assert_eq!(back.len(), 4);
        assert!(linalg::max_abs(&(back.projection(2) - sys.projection(2))) < 1e-12);
        let op = json!({"operator": [[0, 1], [0, 0]]});
        match document_from_json(&op, &s).unwrap() {
            Document::Operator(a) => assert_eq!(a[(0, 1)], linalg::ONE),
            other => panic!("unexpected {other:?}"),
        }
        assert!(document_from_json(&json!({"operator": [[0, 1]]}), &s).is_err());
        assert!(document_from_json(&json!({"x": 1}), &s).is_err());
    }
}
