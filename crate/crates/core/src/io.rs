//! JSON documents for frameworks and linkages.
//!
//! A framework document has `"inner"`, `"pins"` and `"edges"`, and optionally
//! `"config"` (`{id: [x, y]}`) and `"crossings"` (pairs of edges drawn
//! crossing). A linkage document adds `"driver": {kind, vertices, rate}`.
//! Schema errors carry a `$`-rooted path to the offending value.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::mechanism::{Driver, DriverKind, Linkage};
use crate::model::{Configuration, Edge, PinnedGraph, Point, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub graph: PinnedGraph,
    pub config: Option<Configuration>,
    pub crossings: Vec<(Edge, Edge)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkageDocument {
    pub linkage: Linkage,
    pub config: Option<Configuration>,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn required<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing required key"))
}

fn id(v: &Value, path: &str) -> Result<VertexId> {
    v.as_str().map(VertexId::new).ok_or_else(|| schema(path, "expected a vertex id string"))
}

fn ids(v: &Value, path: &str) -> Result<BTreeSet<VertexId>> {
    let mut out = BTreeSet::new();
    for (i, x) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if !out.insert(id(x, &p)?) {
            return Err(schema(&p, "duplicate vertex id"));
        }
    }
    Ok(out)
}

fn edge(v: &Value, path: &str) -> Result<Edge> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return Err(schema(path, "an edge is a pair of vertex ids"));
    }
    Ok(Edge::new(id(&a[0], &format!("{path}[0]"))?, id(&a[1], &format!("{path}[1]"))?))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| schema(path, "expected a finite number"))
}

fn config(v: &Value, path: &str) -> Result<Configuration> {
    let mut c = Configuration::new();
    for (k, p) in object(v, path)? {
        let pp = format!("{path}.{k}");
        let xy = array(p, &pp)?;
        if xy.len() != 2 {
            return Err(schema(&pp, "a point is [x, y]"));
        }
        c.insert(k.as_str(), Point::new(number(&xy[0], &format!("{pp}[0]"))?, number(&xy[1], &format!("{pp}[1]"))?));
    }
    Ok(c)
}

fn document(root: &Value) -> Result<Document> {
    let m = object(root, "$")?;
    let inner = ids(required(m, "inner", "$")?, "$.inner")?;
    let pins = ids(required(m, "pins", "$")?, "$.pins")?;
    let mut edges = BTreeSet::new();
    for (i, e) in array(required(m, "edges", "$")?, "$.edges")?.iter().enumerate() {
        let p = format!("$.edges[{i}]");
        if !edges.insert(edge(e, &p)?) {
            return Err(schema(&p, "duplicate edge"));
        }
    }
    let graph = PinnedGraph::from_parts(inner, pins, edges)?;
    let config = match m.get("config") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let c = config(v, "$.config")?;
            for v in graph.vertices() {
                if !c.contains(&v) {
                    return Err(schema("$.config", format!("no point for vertex `{v}`")));
                }
            }
            if let Some(extra) = c.keys().find(|v| !graph.contains(v)) {
                return Err(Error::UnknownVertex(extra.clone()));
            }
            Some(c)
        }
    };
    let mut crossings = Vec::new();
    if let Some(v) = m.get("crossings") {
        for (i, pair) in array(v, "$.crossings")?.iter().enumerate() {
            let p = format!("$.crossings[{i}]");
            let a = array(pair, &p)?;
            if a.len() != 2 {
                return Err(schema(&p, "a crossing is a pair of edges"));
            }
            crossings.push((edge(&a[0], &format!("{p}[0]"))?, edge(&a[1], &format!("{p}[1]"))?));
        }
    }
    Ok(Document { graph, config, crossings })
}

/// Parses a framework document; the configuration is optional.
pub fn parse_framework(text: &str) -> Result<Document> {
    document(&parse_value(text)?)
}

fn driver(v: &Value) -> Result<Driver> {
    let m = object(v, "$.driver")?;
    let kind = required(m, "kind", "$.driver")?
        .as_str()
        .ok_or_else(|| schema("$.driver.kind", "expected a string"))?;
    let vs: Vec<VertexId> = array(required(m, "vertices", "$.driver")?, "$.driver.vertices")?
        .iter()
        .enumerate()
        .map(|(i, x)| id(x, &format!("$.driver.vertices[{i}]")))
        .collect::<Result<_>>()?;
    let rate = match m.get("rate") {
        Some(r) => number(r, "$.driver.rate")?,
        None => 1.0,
    };
    let arity = |n: usize| -> Result<()> {
        if vs.len() == n {
            Ok(())
        } else {
            Err(schema("$.driver.vertices", format!("`{kind}` takes {n} vertices")))
        }
    };
    let kind = match kind {
        "piston" => {
            arity(2)?;
            DriverKind::Piston { a: vs[0].clone(), b: vs[1].clone() }
        }
        "inner_angle" => {
            arity(3)?;
            DriverKind::InnerAngle { a: vs[0].clone(), b: vs[1].clone(), c: vs[2].clone() }
        }
        "pin_angle" => {
            arity(3)?;
            DriverKind::PinAngle { a: vs[0].clone(), pivot: vs[1].clone(), reference: vs[2].clone() }
        }
        other => {
            return Err(schema(
                "$.driver.kind",
                format!("unknown driver kind `{other}` (piston, inner_angle, pin_angle)"),
            ))
        }
    };
    Ok(Driver { kind, rate })
}

pub fn parse_linkage(text: &str) -> Result<LinkageDocument> {
    let root = parse_value(text)?;
    let doc = document(&root)?;
    let d = driver(required(object(&root, "$")?, "driver", "$")?)?;
    Ok(LinkageDocument { linkage: Linkage::new(doc.graph, d)?, config: doc.config })
}

/// Reads either a bare `{id: [x, y]}` map or a document with a `"config"` key.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let root = parse_value(text)?;
    match object(&root, "$")?.get("config") {
        Some(c) => config(c, "$.config"),
        None => config(&root, "$"),
    }
}

pub fn config_json(c: &Configuration) -> Value {
    serde_json::to_value(c).expect("configurations serialize")
}

pub fn framework_json(g: &PinnedGraph, c: Option<&Configuration>) -> Value {
    let mut v = json!({
        "inner": g.inner(),
        "pins": g.pins(),
        "edges": g.edges(),
    });
    if let Some(c) = c {
        v["config"] = config_json(c);
    }
    v
}

pub fn driver_json(d: &Driver) -> Value {
    let (kind, vs) = match &d.kind {
        DriverKind::Piston { a, b } => ("piston", vec![a, b]),
        DriverKind::InnerAngle { a, b, c } => ("inner_angle", vec![a, b, c]),
        DriverKind::PinAngle { a, pivot, reference } => ("pin_angle", vec![a, pivot, reference]),
    };
    json!({ "kind": kind, "vertices": vs, "rate": d.rate })
}

pub fn linkage_json(l: &Linkage, c: Option<&Configuration>) -> Value {
    let mut v = framework_json(l.graph(), c);
    v["driver"] = driver_json(l.driver());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{dyad, fourbar};

    const DYAD: &str = r#"{"inner": ["a"], "pins": ["p1", "p2"], "edges": [["a", "p1"], ["a", "p2"]]}"#;

    #[test]
    fn dyad_document() {
        let d = parse_framework(DYAD).unwrap();
        assert_eq!(d.graph, dyad());
        assert!(d.config.is_none());
        let back = framework_json(&d.graph, None).to_string();
        assert_eq!(parse_framework(&back).unwrap(), d);
    }

    #[test]
    fn schema_paths() {
        let e = parse_framework(r#"{"inner": ["a"], "edges": []}"#).unwrap_err();
        assert_eq!(e, Error::Schema { path: "$.pins".into(), message: "missing required key".into() });
        let e = parse_framework(r#"{"inner": ["a"], "pins": ["p"], "edges": [["a", 3]]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "$.edges[0][1]"));
        let e = parse_framework(r#"{"inner": ["a"], "pins": ["p"], "edges": [["a", "q"]]}"#).unwrap_err();
        assert_eq!(e, Error::UnknownVertex("q".into()));
        let e = parse_framework(r#"{"inner": ["a"], "pins": ["p"], "edges": [["a", "p"]], "config": {"a": [0, 0]}}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "$.config"));
    }

    #[test]
    fn linkage_roundtrip() {
        let text = r#"{"inner": ["a", "b"], "pins": ["p1", "p2"],
            "edges": [["p1", "a"], ["a", "b"], ["b", "p2"]],
            "config": {"a": [1, 0], "b": [2, 1], "p1": [0, 0], "p2": [3, 0]},
            "driver": {"kind": "pin_angle", "vertices": ["a", "p1", "p2"], "rate": 0.5}}"#;
        let d = parse_linkage(text).unwrap();
        assert_eq!(d.linkage.graph(), &fourbar());
        let again = parse_linkage(&linkage_json(&d.linkage, d.config.as_ref()).to_string()).unwrap();
        assert_eq!(again, d);
        let bad = text.replace("pin_angle", "crank");
        assert!(matches!(parse_linkage(&bad), Err(Error::Schema { ref path, .. }) if path == "$.driver.kind"));
    }

    #[test]
    fn bare_configuration() {
        let c = parse_configuration(r#"{"a": [1.5, -2]}"#).unwrap();
        assert_eq!(c.get(&"a".into()), Some(Point::new(1.5, -2.0)));
        assert_eq!(parse_configuration(r#"{"config": {"a": [1.5, -2]}}"#).unwrap(), c);
    }
}
