//! The domain data model: projections, relations, ρ-points, complements.
//!
//! Construction happens in two layers. [`HhsStructure::from_parts`] checks only
//! that every table refers to things that exist; [`HhsStructure::new`] also
//! requires [`HhsStructure::validate_relation_axioms`] to come back empty.
//! Structures that fail the relation axioms can still be built through the
//! first layer so that violations can be reported as data.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainId(pub usize);

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A domain with its space and its coordinate map from the total space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub space: MetricSpace,
    /// `projection[x]` is the coordinate of total-space vertex `x`.
    pub projection: Vec<Vertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RhoPoint {
    pub of: DomainId,
    pub target: DomainId,
    pub vertex: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Complement {
    pub v: DomainId,
    pub w: DomainId,
    pub comp: DomainId,
}

/// Everything a structure is made of, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureParts {
    pub total_space: MetricSpace,
    pub domains: Vec<Domain>,
    /// `(child, parent)` pairs of the strict nesting order.
    pub nesting: Vec<(DomainId, DomainId)>,
    /// Unordered orthogonal pairs.
    pub orthogonal: Vec<(DomainId, DomainId)>,
    pub rho: Vec<RhoPoint>,
    pub complements: Vec<Complement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Nested { child: DomainId, parent: DomainId },
    Orthogonal,
    Transverse,
}

impl Relation {
    pub fn is_transverse(&self) -> bool {
        matches!(self, Relation::Transverse)
    }
}

/// The coordinates of one total-space vertex, indexed by domain id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateVector(pub Vec<Vertex>);

impl CoordinateVector {
    pub fn get(&self, domain: DomainId) -> Vertex {
        self.0[domain.0]
    }
}

/// Which relation axiom a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomFamily {
    PartialOrder,
    UniqueMaximal,
    OrthogonalityAntiReflexive,
    NestedOrthogonalConflict,
    Inheritance,
    Complement,
    RhoDomain,
}

/// One failed instance of a relation axiom, naming the domains involved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    NestingReflexive { domain: String },
    NestingAntisymmetry { a: String, b: String },
    NestingTransitivity { lower: String, middle: String, upper: String },
    NoUniqueMaximal { maximal: Vec<String> },
    NotBelowMaximal { domain: String, maximal: String },
    OrthogonalReflexive { domain: String },
    NestedAndOrthogonal { child: String, parent: String },
    /// `v ⊑ w` and `u ⊥ w` but not `u ⊥ v`.
    Inheritance { u: String, v: String, w: String },
    ComplementMissing { v: String, w: String },
    ComplementUnexpected { v: String, w: String, comp: String },
    ComplementNotNested { v: String, w: String, comp: String },
    ComplementNotContaining { v: String, w: String, comp: String, u: String },
    RhoMissing { of: String, target: String },
    RhoUnexpected { of: String, target: String },
}

impl Violation {
    pub fn family(&self) -> AxiomFamily {
        use Violation::*;
        match self {
            NestingReflexive { .. } | NestingAntisymmetry { .. } | NestingTransitivity { .. } => {
                AxiomFamily::PartialOrder
            }
            NoUniqueMaximal { .. } | NotBelowMaximal { .. } => AxiomFamily::UniqueMaximal,
            OrthogonalReflexive { .. } => AxiomFamily::OrthogonalityAntiReflexive,
            NestedAndOrthogonal { .. } => AxiomFamily::NestedOrthogonalConflict,
            Inheritance { .. } => AxiomFamily::Inheritance,
            ComplementMissing { .. }
            | ComplementUnexpected { .. }
            | ComplementNotNested { .. }
            | ComplementNotContaining { .. } => AxiomFamily::Complement,
            RhoMissing { .. } | RhoUnexpected { .. } => AxiomFamily::RhoDomain,
        }
    }

    /// Domain names mentioned by the violation, in the order they appear.
    pub fn domains(&self) -> Vec<&str> {
        use Violation::*;
        match self {
            NestingReflexive { domain } | OrthogonalReflexive { domain } => vec![domain],
            NestingAntisymmetry { a, b } => vec![a, b],
            NestingTransitivity { lower, middle, upper } => vec![lower, middle, upper],
            NoUniqueMaximal { maximal } => maximal.iter().map(String::as_str).collect(),
            NotBelowMaximal { domain, maximal } => vec![domain, maximal],
            NestedAndOrthogonal { child, parent } => vec![child, parent],
            Inheritance { u, v, w } => vec![u, v, w],
            ComplementMissing { v, w } => vec![v, w],
            ComplementUnexpected { v, w, comp } | ComplementNotNested { v, w, comp } => vec![v, w, comp],
            ComplementNotContaining { v, w, comp, u } => vec![v, w, comp, u],
            RhoMissing { of, target } | RhoUnexpected { of, target } => vec![of, target],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NestingReflexive { domain } => write!(f, "nesting is not irreflexive: {domain} ⊏ {domain}"),
            NestingAntisymmetry { a, b } => write!(f, "nesting is not antisymmetric: {a} ⊏ {b} and {b} ⊏ {a}"),
            NestingTransitivity { lower, middle, upper } => write!(
                f,
                "nesting is not transitive: {lower} ⊏ {middle} ⊏ {upper} but not {lower} ⊏ {upper}"
            ),
            NoUniqueMaximal { maximal } => {
                write!(f, "no unique maximal element (maximal: [{}])", maximal.join(", "))
            }
            NotBelowMaximal { domain, maximal } => {
                write!(f, "{domain} is not nested in the maximal element {maximal}")
            }
            OrthogonalReflexive { domain } => write!(f, "orthogonality is not anti-reflexive: {domain} ⊥ {domain}"),
            NestedAndOrthogonal { child, parent } => {
                write!(f, "{child} ⊏ {parent} and {child} ⊥ {parent}")
            }
            Inheritance { u, v, w } => write!(f, "{v} ⊑ {w} and {u} ⊥ {w} but not {u} ⊥ {v}"),
            ComplementMissing { v, w } => {
                write!(f, "{v} ⊏ {w} has domains orthogonal to {v} inside {w} but no complement")
            }
            ComplementUnexpected { v, w, comp } => {
                write!(f, "complement {comp} declared for ({v}, {w}) although {v} is not nested in {w}")
            }
            ComplementNotNested { v, w, comp } => {
                write!(f, "complement {comp} of {v} in {w} is not strictly nested in {w}")
            }
            ComplementNotContaining { v, w, comp, u } => write!(
                f,
                "{u} ⊑ {w} and {u} ⊥ {v} but {u} is not nested in the complement {comp}"
            ),
            RhoMissing { of, target } => write!(f, "missing rho point of {of} in {target}"),
            RhoUnexpected { of, target } => {
                write!(f, "rho point of {of} in {target} declared for a pair that is neither transverse nor nested")
            }
        }
    }
}

/// One row of the pair classification table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRow {
    pub a: DomainId,
    pub b: DomainId,
    pub relation: Relation,
    /// ρ of `a` in `b`.
    pub rho_ab: Option<Vertex>,
    /// ρ of `b` in `a`.
    pub rho_ba: Option<Vertex>,
}

#[derive(Debug, Clone)]
pub struct HhsStructure {
    parts: StructureParts,
    names: HashMap<String, DomainId>,
    nested: Vec<bool>,
    orthogonal: Vec<bool>,
    rho: Vec<Option<Vertex>>,
    complements: BTreeMap<(DomainId, DomainId), DomainId>,
}

impl PartialEq for HhsStructure {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for HhsStructure {}

impl HhsStructure {
    /// Builds a structure and requires every relation axiom to hold.
    pub fn new(parts: StructureParts) -> Result<Self> {
        let s = Self::from_parts(parts)?;
        let violations = s.validate_relation_axioms();
        if let Some(v) = violations.iter().find(|v| {
            matches!(
                v.family(),
                AxiomFamily::NestedOrthogonalConflict | AxiomFamily::OrthogonalityAntiReflexive
            )
        }) {
            return Err(Error::RelationConflict(v.to_string()));
        }
        if let Some(Violation::RhoMissing { of, target }) =
            violations.iter().find(|v| matches!(v, Violation::RhoMissing { .. }))
        {
            return Err(Error::MissingRho {
                of: of.clone(),
                target: target.clone(),
            });
        }
        if !violations.is_empty() {
            return Err(Error::AxiomViolation(violations));
        }
        Ok(s)
    }

    /// Builds a structure checking only referential integrity.
    pub fn from_parts(parts: StructureParts) -> Result<Self> {
        let n_total = parts.total_space.len();
        let n = parts.domains.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a structure needs at least one domain".into()));
        }
        let mut names = HashMap::new();
        for (i, d) in parts.domains.iter().enumerate() {
            if names.insert(d.name.clone(), DomainId(i)).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate domain name `{}`", d.name)));
            }
            if d.projection.len() != n_total {
                return Err(Error::DanglingReference(format!(
                    "projection of {} has {} entries for a total space of {} vertices",
                    d.name,
                    d.projection.len(),
                    n_total
                )));
            }
            if let Some(&bad) = d.projection.iter().find(|&&c| c >= d.space.len()) {
                return Err(Error::DanglingReference(format!(
                    "projection of {} reaches vertex {bad} outside its space of {} vertices",
                    d.name,
                    d.space.len()
                )));
            }
        }
        let check_id = |id: DomainId, what: &str| {
            if id.0 < n {
                Ok(())
            } else {
                Err(Error::DanglingReference(format!("{what} refers to unknown domain {id}")))
            }
        };

        let mut nested = vec![false; n * n];
        for &(child, parent) in &parts.nesting {
            check_id(child, "nesting")?;
            check_id(parent, "nesting")?;
            nested[child.0 * n + parent.0] = true;
        }
        let mut orthogonal = vec![false; n * n];
        for &(a, b) in &parts.orthogonal {
            check_id(a, "orthogonality")?;
            check_id(b, "orthogonality")?;
            orthogonal[a.0 * n + b.0] = true;
            orthogonal[b.0 * n + a.0] = true;
        }
        let mut rho = vec![None; n * n];
        for r in &parts.rho {
            check_id(r.of, "rho")?;
            check_id(r.target, "rho")?;
            let target = &parts.domains[r.target.0];
            if r.vertex >= target.space.len() {
                return Err(Error::DanglingReference(format!(
                    "rho of {} in {} is vertex {} outside a space of {} vertices",
                    parts.domains[r.of.0].name,
                    target.name,
                    r.vertex,
                    target.space.len()
                )));
            }
            if r.of == r.target {
                return Err(Error::InvalidArgument(format!("rho of {} in itself", target.name)));
            }
            let slot = &mut rho[r.of.0 * n + r.target.0];
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "rho of {} in {} declared twice",
                    parts.domains[r.of.0].name, target.name
                )));
            }
            *slot = Some(r.vertex);
        }
        let mut complements = BTreeMap::new();
        for c in &parts.complements {
            check_id(c.v, "complement")?;
            check_id(c.w, "complement")?;
            check_id(c.comp, "complement")?;
            if complements.insert((c.v, c.w), c.comp).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "complement of {} in {} declared twice",
                    parts.domains[c.v.0].name, parts.domains[c.w.0].name
                )));
            }
        }
        Ok(Self {
            parts,
            names,
            nested,
            orthogonal,
            rho,
            complements,
        })
    }

    pub fn parts(&self) -> &StructureParts {
        &self.parts
    }

    pub fn into_parts(self) -> StructureParts {
        self.parts
    }

    pub fn total_space(&self) -> &MetricSpace {
        &self.parts.total_space
    }

    pub fn domain_count(&self) -> usize {
        self.parts.domains.len()
    }

    pub fn domain_ids(&self) -> impl Iterator<Item = DomainId> + '_ {
        (0..self.parts.domains.len()).map(DomainId)
    }

    pub fn domain(&self, id: DomainId) -> &Domain {
        &self.parts.domains[id.0]
    }

    pub fn name(&self, id: DomainId) -> &str {
        &self.parts.domains[id.0].name
    }

    pub fn id(&self, name: &str) -> Result<DomainId> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownDomain(name.to_string()))
    }

    fn check_domain(&self, id: DomainId) -> Result<()> {
        if id.0 < self.domain_count() {
            Ok(())
        } else {
            Err(Error::UnknownDomain(id.to_string()))
        }
    }

    /// Strict nesting `child ⊏ parent` as declared.
    #[inline]
    pub fn is_nested(&self, child: DomainId, parent: DomainId) -> bool {
        self.nested[child.0 * self.domain_count() + parent.0]
    }

    /// `a ⊑ b`: equal or strictly nested.
    #[inline]
    pub fn is_nested_or_equal(&self, a: DomainId, b: DomainId) -> bool {
        a == b || self.is_nested(a, b)
    }

    #[inline]
    pub fn is_orthogonal(&self, a: DomainId, b: DomainId) -> bool {
        self.orthogonal[a.0 * self.domain_count() + b.0]
    }

    #[inline]
    pub fn is_transverse(&self, a: DomainId, b: DomainId) -> bool {
        a != b && !self.is_nested(a, b) && !self.is_nested(b, a) && !self.is_orthogonal(a, b)
    }

    /// Classifies a pair. Transversality is the default for pairs that are
    /// neither nested nor orthogonal.
    pub fn relation_of(&self, u: DomainId, v: DomainId) -> Result<Relation> {
        self.check_domain(u)?;
        self.check_domain(v)?;
        Ok(self.relation(u, v))
    }

    pub(crate) fn relation(&self, u: DomainId, v: DomainId) -> Relation {
        if u == v {
            Relation::Equal
        } else if self.is_nested(u, v) {
            Relation::Nested { child: u, parent: v }
        } else if self.is_nested(v, u) {
            Relation::Nested { child: v, parent: u }
        } else if self.is_orthogonal(u, v) {
            Relation::Orthogonal
        } else {
            Relation::Transverse
        }
    }

    /// `ρ^of_target`, or `None` where it is undefined.
    pub fn rho_point(&self, of: DomainId, target: DomainId) -> Result<Option<Vertex>> {
        self.check_domain(of)?;
        self.check_domain(target)?;
        Ok(self.rho(of, target))
    }

    #[inline]
    pub(crate) fn rho(&self, of: DomainId, target: DomainId) -> Option<Vertex> {
        self.rho[of.0 * self.domain_count() + target.0]
    }

    pub fn complement(&self, v: DomainId, w: DomainId) -> Option<DomainId> {
        self.complements.get(&(v, w)).copied()
    }

    /// Coordinate of `x` in domain `u`.
    #[inline]
    pub fn coordinate(&self, u: DomainId, x: Vertex) -> Vertex {
        self.parts.domains[u.0].projection[x]
    }

    pub fn coordinates(&self, x: Vertex) -> Result<CoordinateVector> {
        self.total_space().check_vertex(x)?;
        Ok(CoordinateVector(
            self.parts.domains.iter().map(|d| d.projection[x]).collect(),
        ))
    }

    /// All ordered `(child, parent)` pairs with `child ⊏ parent`.
    pub fn nested_pairs(&self) -> Vec<(DomainId, DomainId)> {
        let ids: Vec<_> = self.domain_ids().collect();
        let mut out = Vec::new();
        for &u in &ids {
            for &v in &ids {
                if u != v && self.is_nested(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Unordered transverse pairs `(u, v)` with `u < v`.
    pub fn transverse_pairs(&self) -> Vec<(DomainId, DomainId)> {
        let n = self.domain_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.is_transverse(DomainId(u), DomainId(v)) {
                    out.push((DomainId(u), DomainId(v)));
                }
            }
        }
        out
    }

    /// Domains with no declared parent.
    pub fn maximal_domains(&self) -> Vec<DomainId> {
        self.domain_ids()
            .filter(|&u| !self.domain_ids().any(|p| p != u && self.is_nested(u, p)))
            .collect()
    }

    /// Number of elements in the longest strict nesting chain.
    pub fn nesting_height(&self) -> usize {
        let n = self.domain_count();
        let mut memo = vec![None; n];
        fn depth(s: &HhsStructure, u: usize, memo: &mut Vec<Option<usize>>, guard: usize) -> usize {
            if let Some(d) = memo[u] {
                return d;
            }
            if guard > s.domain_count() {
                return 0;
            }
            let below = (0..s.domain_count())
                .filter(|&c| c != u && s.is_nested(DomainId(c), DomainId(u)))
                .map(|c| depth(s, c, memo, guard + 1))
                .max()
                .unwrap_or(0);
            memo[u] = Some(below + 1);
            below + 1
        }
        (0..n).map(|u| depth(self, u, &mut memo, 0)).max().unwrap_or(0)
    }

    /// Every unordered pair with its relation and ρ availability, ordered by id.
    pub fn classify_pairs(&self) -> Vec<PairRow> {
        let n = self.domain_count();
        let mut rows = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                let (a, b) = (DomainId(a), DomainId(b));
                rows.push(PairRow {
                    a,
                    b,
                    relation: self.relation(a, b),
                    rho_ab: self.rho(a, b),
                    rho_ba: self.rho(b, a),
                });
            }
        }
        rows
    }

    /// Exhaustive check of the relation axioms. An empty list means they all hold.
    pub fn validate_relation_axioms(&self) -> Vec<Violation> {
        let n = self.domain_count();
        let name = |u: usize| self.parts.domains[u].name.clone();
        let nested = |a: usize, b: usize| self.is_nested(DomainId(a), DomainId(b));
        let orth = |a: usize, b: usize| self.is_orthogonal(DomainId(a), DomainId(b));
        let mut out = Vec::new();

        // Strict partial order.
        for a in 0..n {
            if nested(a, a) {
                out.push(Violation::NestingReflexive { domain: name(a) });
            }
            for b in a + 1..n {
                if nested(a, b) && nested(b, a) {
                    out.push(Violation::NestingAntisymmetry { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b || !nested(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c != b && c != a && nested(b, c) && !nested(a, c) {
                        out.push(Violation::NestingTransitivity {
                            lower: name(a),
                            middle: name(b),
                            upper: name(c),
                        });
                    }
                }
            }
        }

        // Unique maximal element.
        let maximal = self.maximal_domains();
        match maximal.as_slice() {
            [top] => {
                for u in 0..n {
                    if u != top.0 && !nested(u, top.0) {
                        out.push(Violation::NotBelowMaximal {
                            domain: name(u),
                            maximal: name(top.0),
                        });
                    }
                }
            }
            _ => out.push(Violation::NoUniqueMaximal {
                maximal: maximal.iter().map(|m| name(m.0)).collect(),
            }),
        }

        // Orthogonality: anti-reflexive, and disjoint from nesting.
        for a in 0..n {
            if orth(a, a) {
                out.push(Violation::OrthogonalReflexive { domain: name(a) });
            }
            for b in 0..n {
                if a != b && nested(a, b) && orth(a, b) {
                    out.push(Violation::NestedAndOrthogonal {
                        child: name(a),
                        parent: name(b),
                    });
                }
            }
        }

        // Inheritance: v ⊏ w and u ⊥ w imply u ⊥ v.
        for v in 0..n {
            for w in 0..n {
                if v == w || !nested(v, w) {
                    continue;
                }
                for u in 0..n {
                    if u != v && orth(u, w) && !orth(u, v) {
                        out.push(Violation::Inheritance {
                            u: name(u),
                            v: name(v),
                            w: name(w),
                        });
                    }
                }
            }
        }

        // Orthogonal complements.
        for v in 0..n {
            for w in 0..n {
                if v == w || !nested(v, w) {
                    continue;
                }
                let inside: Vec<usize> = (0..n).filter(|&u| u != w && nested(u, w) && orth(u, v)).collect();
                match self.complement(DomainId(v), DomainId(w)) {
                    None if !inside.is_empty() => out.push(Violation::ComplementMissing { v: name(v), w: name(w) }),
                    None => {}
                    Some(comp) => {
                        let comp = comp.0;
                        if comp == w || !nested(comp, w) {
                            out.push(Violation::ComplementNotNested {
                                v: name(v),
                                w: name(w),
                                comp: name(comp),
                            });
                        }
                        for &u in &inside {
                            if u != comp && !nested(u, comp) {
                                out.push(Violation::ComplementNotContaining {
                                    v: name(v),
                                    w: name(w),
                                    comp: name(comp),
                                    u: name(u),
                                });
                            }
                        }
                    }
                }
            }
        }
        for (&(v, w), &comp) in &self.complements {
            if v == w || !nested(v.0, w.0) {
                out.push(Violation::ComplementUnexpected {
                    v: name(v.0),
                    w: name(w.0),
                    comp: name(comp.0),
                });
            }
        }

        // ρ is defined exactly for transverse and strictly nested pairs.
        for of in 0..n {
            for target in 0..n {
                if of == target {
                    continue;
                }
                let (u, v) = (DomainId(of), DomainId(target));
                let expected = self.is_transverse(u, v) || nested(of, target);
                match (expected, self.rho(u, v).is_some()) {
                    (true, false) => out.push(Violation::RhoMissing {
                        of: name(of),
                        target: name(target),
                    }),
                    (false, true) => out.push(Violation::RhoUnexpected {
                        of: name(of),
                        target: name(target),
                    }),
                    _ => {}
                }
            }
        }
        out
    }
}
