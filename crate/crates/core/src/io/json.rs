use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::ExampleConfig;
use crate::limits::Limits;
use crate::metric::{MetricSpace, Weight};
use crate::structure::{Complement, Domain, DomainId, HhsStructure, RhoPoint, StructureParts};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn weight_json(w: &Weight) -> Value {
    if *w.denom() == 1 {
        Value::from(*w.numer())
    } else {
        Value::from(format!("{}/{}", w.numer(), w.denom()))
    }
}

fn parse_weight(v: &Value) -> Result<Weight> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(Weight::from_integer)
            .ok_or_else(|| parse_err(format!("edge weight {n} must be a positive integer or a \"p/q\" string"))),
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let num: u64 = num.trim().parse().map_err(|_| parse_err(format!("bad weight `{s}`")))?;
            let den: u64 = den.trim().parse().map_err(|_| parse_err(format!("bad weight `{s}`")))?;
            if den == 0 {
                return Err(parse_err(format!("weight `{s}` has a zero denominator")));
            }
            Ok(Weight::new(num, den))
        }
        other => Err(parse_err(format!("bad edge weight {other}"))),
    }
}

pub fn space_to_json(space: &MetricSpace) -> Value {
    let edges: Vec<Value> = space
        .edges()
        .iter()
        .map(|e| {
            if *e.weight.numer() == 1 && *e.weight.denom() == 1 {
                json!([e.u, e.v])
            } else {
                json!([e.u, e.v, weight_json(&e.weight)])
            }
        })
        .collect();
    json!({
        "label": space.label().unwrap_or(""),
        "n": space.len(),
        "edges": edges,
    })
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer, got {v}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(format!("{what} must be a string, got {v}")))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn array<'a>(obj: &'a Value, key: &str) -> Result<&'a [Value]> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(items)) => Ok(items),
        Some(other) => Err(parse_err(format!("`{key}` must be an array, got {other}"))),
    }
}

/// Parses `{ "label", "n", "edges": [[u, v, w?], ...] }`.
pub fn parse_space(value: &Value, limits: &Limits) -> Result<MetricSpace> {
    let n = as_usize(field(value, "n")?, "n")?;
    let mut edges = Vec::new();
    for e in array(value, "edges")? {
        let items = e.as_array().ok_or_else(|| parse_err(format!("edge {e} must be an array")))?;
        let weight = match items.len() {
            2 => Weight::from_integer(1),
            3 => parse_weight(&items[2])?,
            _ => return Err(parse_err(format!("edge {e} must be [u, v] or [u, v, w]"))),
        };
        edges.push((as_usize(&items[0], "edge endpoint")?, as_usize(&items[1], "edge endpoint")?, weight));
    }
    let space = MetricSpace::with_limits(n, edges, limits)?;
    Ok(match value.get("label").and_then(Value::as_str) {
        Some(label) if !label.is_empty() => space.with_label(label),
        _ => space,
    })
}

pub fn structure_to_json(s: &HhsStructure) -> Value {
    let parts = s.parts();
    let name = |id: DomainId| s.name(id).to_string();
    json!({
        "total_space": space_to_json(&parts.total_space),
        "domains": parts.domains.iter().map(|d| json!({
            "name": d.name,
            "space": space_to_json(&d.space),
            "projection": d.projection,
        })).collect::<Vec<_>>(),
        "nesting": parts.nesting.iter().map(|&(c, p)| json!([name(c), name(p)])).collect::<Vec<_>>(),
        "orthogonal": parts.orthogonal.iter().map(|&(a, b)| json!([name(a), name(b)])).collect::<Vec<_>>(),
        "rho": parts.rho.iter().map(|r| json!({
            "of": name(r.of),
            "in": name(r.target),
            "vertex": r.vertex,
        })).collect::<Vec<_>>(),
        "complements": parts.complements.iter().map(|c| json!({
            "v": name(c.v),
            "w": name(c.w),
            "comp": name(c.comp),
        })).collect::<Vec<_>>(),
    })
}

fn space_or_ref(value: &Value, base: Option<&Path>, limits: &Limits) -> Result<MetricSpace> {
    match value {
        Value::String(file) => {
            let path = base.map_or_else(|| Path::new(file).to_path_buf(), |b| b.join(file));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
            parse_space(&serde_json::from_str(&text)?, limits)
        }
        other => parse_space(other, limits),
    }
}

/// Parses the structure format. Only referential integrity is checked; call
/// [`HhsStructure::validate_relation_axioms`] for the relation axioms.
///
/// `total_space` and each domain `space` may be inline objects or file names,
/// resolved against `base`.
pub fn parse_structure(value: &Value, base: Option<&Path>, limits: &Limits) -> Result<HhsStructure> {
    let total_space = space_or_ref(field(value, "total_space")?, base, limits)?;
    let mut domains = Vec::new();
    for d in array(value, "domains")? {
        let projection = array(d, "projection")?
            .iter()
            .map(|c| as_usize(c, "projection entry"))
            .collect::<Result<_>>()?;
        domains.push(Domain {
            name: as_str(field(d, "name")?, "domain name")?.to_string(),
            space: space_or_ref(field(d, "space")?, base, limits)?,
            projection,
        });
    }
    let lookup = |v: &Value| -> Result<DomainId> {
        let name = as_str(v, "domain reference")?;
        domains
            .iter()
            .position(|d| d.name == name)
            .map(DomainId)
            .ok_or_else(|| Error::UnknownDomain(name.to_string()))
    };
    let pair = |v: &Value| -> Result<(DomainId, DomainId)> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((lookup(a)?, lookup(b)?)),
            _ => Err(parse_err(format!("expected a pair of domain names, got {v}"))),
        }
    };
    let nesting = array(value, "nesting")?.iter().map(pair).collect::<Result<_>>()?;
    let orthogonal = array(value, "orthogonal")?.iter().map(pair).collect::<Result<_>>()?;
    let rho = array(value, "rho")?
        .iter()
        .map(|r| {
            Ok(RhoPoint {
                of: lookup(field(r, "of")?)?,
                target: lookup(field(r, "in")?)?,
                vertex: as_usize(field(r, "vertex")?, "rho vertex")?,
            })
        })
        .collect::<Result<_>>()?;
    let complements = array(value, "complements")?
        .iter()
        .map(|c| {
            Ok(Complement {
                v: lookup(field(c, "v")?)?,
                w: lookup(field(c, "w")?)?,
                comp: lookup(field(c, "comp")?)?,
            })
        })
        .collect::<Result<_>>()?;
    HhsStructure::from_parts(StructureParts {
        total_space,
        domains,
        nesting,
        orthogonal,
        rho,
        complements,
    })
}

/// Any file the tools accept.
#[derive(Debug, Clone)]
pub enum Document {
    Space(MetricSpace),
    Structure(HhsStructure),
    Example(ExampleConfig),
}

impl Document {
    /// Classifies and parses a JSON value: generator configs carry `"kind"`,
    /// structures carry `"total_space"`, spaces carry `"edges"`.
    pub fn from_value(value: &Value, base: Option<&Path>, limits: &Limits) -> Result<Self> {
        if value.get("kind").is_some() {
            Ok(Document::Example(serde_json::from_value(value.clone())?))
        } else if value.get("total_space").is_some() {
            Ok(Document::Structure(parse_structure(value, base, limits)?))
        } else if value.get("n").is_some() {
            Ok(Document::Space(parse_space(value, limits)?))
        } else {
            Err(parse_err("unrecognized document: expected a space, a structure or a generator config"))
        }
    }

    /// The structure described by the document, generating it if needed.
    /// Structures read from file are not validated here.
    pub fn into_structure(self, limits: &Limits) -> Result<HhsStructure> {
        match self {
            Document::Structure(s) => Ok(s),
            Document::Example(cfg) => cfg.build(limits),
            Document::Space(_) => Err(Error::InvalidArgument("expected a structure, got a bare space".into())),
        }
    }

    /// The space described by the document, or the total space of a structure.
    pub fn into_space(self, limits: &Limits) -> Result<MetricSpace> {
        match self {
            Document::Space(s) => Ok(s),
            other => Ok(other.into_structure(limits)?.total_space().clone()),
        }
    }
}

pub fn load_document(path: &Path, limits: &Limits) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    Document::from_value(&value, path.parent(), limits)
}
