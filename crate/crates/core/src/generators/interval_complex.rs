use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::{path_graph, MetricSpace, Weight};
use crate::structure::{Complement, Domain, DomainId, HhsStructure, RhoPoint, StructureParts};

/// A complex glued from axis-aligned grid boxes, with one interval domain per
/// declared coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalComplexConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub blocks: Vec<BlockDecl>,
    #[serde(default)]
    pub gluings: Vec<Gluing>,
    pub domains: Vec<DomainDecl>,
    #[serde(default)]
    pub nesting: Vec<(String, String)>,
    #[serde(default)]
    pub orthogonal: Vec<(String, String)>,
    #[serde(default)]
    pub rho: Vec<RhoDecl>,
    #[serde(default)]
    pub complements: Vec<ComplementDecl>,
}

/// A grid box `[0, dims[0]] × … × [0, dims[k-1]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecl {
    pub name: String,
    pub dims: Vec<usize>,
}

/// Identifies `a_at` with `b_at`, or, with `along`, the segments
/// `a_at + t·e_{a_axis}` and `b_at + t·e_{b_axis}` for `t = 0..=length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: String,
    pub a_at: Vec<usize>,
    pub b: String,
    pub b_at: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub along: Option<GlueSegment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSegment {
    pub a_axis: usize,
    pub b_axis: usize,
    pub length: usize,
}

/// A domain whose space is the interval `[0, length]`; `rules` gives its
/// coordinate on every block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDecl {
    pub name: String,
    pub length: usize,
    pub rules: BTreeMap<String, Rule>,
}

/// Coordinate of a block vertex in a domain interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rule {
    /// The same value on the whole block.
    Const {
        #[serde(rename = "const")]
        value: usize,
    },
    /// `offset + sign · coordinate[axis]`.
    Axis {
        axis: usize,
        #[serde(default)]
        offset: i64,
        #[serde(default = "positive")]
        sign: i64,
    },
}

fn positive() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoDecl {
    pub of: String,
    #[serde(rename = "in")]
    pub target: String,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementDecl {
    pub v: String,
    pub w: String,
    pub comp: String,
}

struct Block<'a> {
    decl: &'a BlockDecl,
    offset: usize,
    strides: Vec<usize>,
    size: usize,
}

impl Block<'_> {
    fn index(&self, at: &[usize]) -> Result<usize> {
        if at.len() != self.decl.dims.len() || at.iter().zip(&self.decl.dims).any(|(&c, &d)| c > d) {
            return Err(Error::ConfigValidation(format!(
                "point {at:?} is outside block `{}` with dims {:?}",
                self.decl.name, self.decl.dims
            )));
        }
        Ok(self.offset + at.iter().zip(&self.strides).map(|(c, s)| c * s).sum::<usize>())
    }

    fn coords(&self, local: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.decl.dims)
            .map(|(&s, &d)| (local / s) % (d + 1))
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn interval_complex(cfg: &IntervalComplexConfig, limits: &Limits) -> Result<HhsStructure> {
    let invalid = |msg: String| Error::ConfigValidation(msg);
    if cfg.blocks.is_empty() {
        return Err(invalid("at least one block is required".into()));
    }

    let mut blocks = Vec::with_capacity(cfg.blocks.len());
    let mut by_name = HashMap::new();
    let mut offset = 0usize;
    for decl in &cfg.blocks {
        let mut strides = vec![1; decl.dims.len()];
        for i in (0..decl.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (decl.dims[i + 1] + 1);
        }
        let size = decl.dims.iter().map(|d| d + 1).product::<usize>();
        if by_name.insert(decl.name.as_str(), blocks.len()).is_some() {
            return Err(invalid(format!("block `{}` declared twice", decl.name)));
        }
        blocks.push(Block { decl, offset, strides, size });
        offset += size;
        if offset > limits.max_vertices.saturating_mul(4) {
            return Err(Error::SizeLimitExceeded {
                what: "interval complex",
                size: offset,
                cap: limits.max_vertices,
            });
        }
    }
    let raw_len = offset;
    let block = |name: &str| {
        by_name
            .get(name)
            .map(|&i| &blocks[i])
            .ok_or_else(|| invalid(format!("unknown block `{name}`")))
    };

    // Glue.
    let mut parent: Vec<usize> = (0..raw_len).collect();
    for g in &cfg.gluings {
        let (a, b) = (block(&g.a)?, block(&g.b)?);
        let seg = g.along.unwrap_or(GlueSegment { a_axis: 0, b_axis: 0, length: 0 });
        for t in 0..=seg.length {
            let mut pa = g.a_at.clone();
            let mut pb = g.b_at.clone();
            if g.along.is_some() {
                *pa.get_mut(seg.a_axis).ok_or_else(|| invalid(format!("bad axis in gluing of `{}`", g.a)))? += t;
                *pb.get_mut(seg.b_axis).ok_or_else(|| invalid(format!("bad axis in gluing of `{}`", g.b)))? += t;
            }
            let (ra, rb) = (find(&mut parent, a.index(&pa)?), find(&mut parent, b.index(&pb)?));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
    }
    // Classes numbered by their smallest raw vertex.
    let mut class_id = vec![usize::MAX; raw_len];
    let mut vertex_of = vec![0; raw_len];
    let mut len = 0;
    for (raw, slot) in vertex_of.iter_mut().enumerate() {
        let root = find(&mut parent, raw);
        if class_id[root] == usize::MAX {
            class_id[root] = len;
            len += 1;
        }
        *slot = class_id[root];
    }
    if len > limits.max_vertices {
        return Err(Error::SizeLimitExceeded {
            what: "interval complex",
            size: len,
            cap: limits.max_vertices,
        });
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for b in &blocks {
        for local in 0..b.size {
            let coords = b.coords(local);
            for (axis, &stride) in b.strides.iter().enumerate() {
                if coords[axis] == b.decl.dims[axis] {
                    continue;
                }
                let (u, v) = (vertex_of[b.offset + local], vertex_of[b.offset + local + stride]);
                if u == v {
                    return Err(invalid(format!("gluing collapses an edge of block `{}`", b.decl.name)));
                }
                if seen.insert((u.min(v), u.max(v))) {
                    edges.push((u, v, Weight::one()));
                }
            }
        }
    }
    let total = MetricSpace::with_limits(len, edges, limits)?;
    let total = match &cfg.label {
        Some(label) => total.with_label(label.clone()),
        None => total,
    };

    let mut domains = Vec::with_capacity(cfg.domains.len());
    let mut ids = HashMap::new();
    for (i, decl) in cfg.domains.iter().enumerate() {
        ids.insert(decl.name.as_str(), DomainId(i));
        if let Some(extra) = decl.rules.keys().find(|k| !by_name.contains_key(k.as_str())) {
            return Err(invalid(format!("domain {} has a rule for unknown block `{extra}`", decl.name)));
        }
        let mut projection = vec![usize::MAX; len];
        for b in &blocks {
            let rule = decl.rules.get(&b.decl.name).ok_or_else(|| {
                invalid(format!("domain {} has no rule for block `{}`", decl.name, b.decl.name))
            })?;
            for local in 0..b.size {
                let value = match *rule {
                    Rule::Const { value } => value as i64,
                    Rule::Axis { axis, offset, sign } => {
                        let c = *b.coords(local).get(axis).ok_or_else(|| {
                            invalid(format!("domain {} reads missing axis {axis} of `{}`", decl.name, b.decl.name))
                        })?;
                        offset + sign * c as i64
                    }
                };
                if value < 0 || value > decl.length as i64 {
                    return Err(invalid(format!(
                        "domain {} maps a vertex of `{}` to {value}, outside [0, {}]",
                        decl.name, b.decl.name, decl.length
                    )));
                }
                let slot = &mut projection[vertex_of[b.offset + local]];
                if *slot != usize::MAX && *slot != value as usize {
                    return Err(invalid(format!(
                        "domain {} disagrees with itself on a glued vertex of `{}`",
                        decl.name, b.decl.name
                    )));
                }
                *slot = value as usize;
            }
        }
        domains.push(Domain {
            name: decl.name.clone(),
            space: path_graph(decl.length).with_label(format!("C{}", decl.name)),
            projection,
        });
    }
    if ids.len() != domains.len() {
        return Err(invalid("domain names must be unique".into()));
    }
    let id = |name: &str| ids.get(name).copied().ok_or_else(|| invalid(format!("unknown domain `{name}`")));

    let parts = StructureParts {
        total_space: total,
        domains,
        nesting: cfg
            .nesting
            .iter()
            .map(|(c, p)| Ok((id(c)?, id(p)?)))
            .collect::<Result<_>>()?,
        orthogonal: cfg
            .orthogonal
            .iter()
            .map(|(a, b)| Ok((id(a)?, id(b)?)))
            .collect::<Result<_>>()?,
        rho: cfg
            .rho
            .iter()
            .map(|r| {
                Ok(RhoPoint {
                    of: id(&r.of)?,
                    target: id(&r.target)?,
                    vertex: r.vertex,
                })
            })
            .collect::<Result<_>>()?,
        complements: cfg
            .complements
            .iter()
            .map(|c| {
                Ok(Complement {
                    v: id(&c.v)?,
                    w: id(&c.w)?,
                    comp: id(&c.comp)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    HhsStructure::new(parts).map_err(|err| match err {
        Error::AxiomViolation(v) => invalid(
            v.iter()
                .map(|x| format!("{:?}: {x}", x.family()))
                .collect::<Vec<_>>()
                .join("; "),
        ),
        Error::RelationConflict(msg) => invalid(format!("relation conflict: {msg}")),
        Error::MissingRho { of, target } => invalid(format!("missing rho point of {of} in {target}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bundled, ExampleConfig};
    use crate::Relation;

    fn toy2() -> HhsStructure {
        let cfg: ExampleConfig = serde_json::from_str(bundled::TOY2).unwrap();
        cfg.build(&Limits::default()).unwrap()
    }

    #[test]
    fn toy2_shape() {
        let s = toy2();
        assert_eq!(s.domain_count(), 7);
        // cube 27 + slab 6 + four arms of 2
        assert_eq!(s.total_space().len(), 41);
        assert_eq!(s.nesting_height(), 3);
        let names: Vec<_> = s.domain_ids().map(|d| s.name(d).to_string()).collect();
        assert_eq!(names, ["R", "G", "B", "O", "P", "Y", "N"]);
    }

    #[test]
    fn toy2_relations() {
        let s = toy2();
        let id = |n: &str| s.id(n).unwrap();
        assert_eq!(s.relation_of(id("G"), id("B")).unwrap(), Relation::Orthogonal);
        assert_eq!(
            s.relation_of(id("O"), id("B")).unwrap(),
            Relation::Nested { child: id("O"), parent: id("B") }
        );
        assert_eq!(s.relation_of(id("Y"), id("N")).unwrap(), Relation::Transverse);
        assert_eq!(s.maximal_domains(), vec![id("R")]);
        assert!(s.validate_relation_axioms().is_empty());
    }

    fn one_block() -> IntervalComplexConfig {
        IntervalComplexConfig {
            label: None,
            note: None,
            blocks: vec![BlockDecl { name: "a".into(), dims: vec![3] }],
            gluings: vec![],
            domains: vec![DomainDecl {
                name: "A".into(),
                length: 3,
                rules: BTreeMap::from([("a".to_string(), Rule::Axis { axis: 0, offset: 0, sign: 1 })]),
            }],
            nesting: vec![],
            orthogonal: vec![],
            rho: vec![],
            complements: vec![],
        }
    }

    #[test]
    fn single_block_single_domain() {
        let s = interval_complex(&one_block(), &Limits::default()).unwrap();
        assert_eq!(s.total_space().len(), 4);
        assert!(s.transverse_pairs().is_empty());
        assert_eq!(s.coordinates(2).unwrap().0, vec![2]);
    }

    #[test]
    fn inconsistent_gluing_is_rejected() {
        let mut cfg = one_block();
        cfg.blocks.push(BlockDecl { name: "b".into(), dims: vec![1] });
        cfg.gluings.push(Gluing {
            a: "a".into(),
            a_at: vec![3],
            b: "b".into(),
            b_at: vec![0],
            along: None,
        });
        cfg.domains[0].rules.insert("b".into(), Rule::Const { value: 0 });
        let err = interval_complex(&cfg, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::ConfigValidation(ref m) if m.contains("disagrees")), "{err}");
        cfg.domains[0].rules.insert("b".into(), Rule::Const { value: 3 });
        let s = interval_complex(&cfg, &Limits::default()).unwrap();
        assert_eq!(s.total_space().len(), 5);
    }

    #[test]
    fn failing_axioms_are_named() {
        let mut cfg = one_block();
        cfg.orthogonal.push(("A".into(), "A".into()));
        let err = interval_complex(&cfg, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::ConfigValidation(ref m) if m.contains("relation conflict")), "{err}");
    }
}
