//! Exhaustive sweeps for the metric axioms.
//!
//! Each check returns the smallest constant for which its axiom holds on the
//! given finite instance, together with a witness attaining it. Witnesses are
//! the lexicographically smallest among all maximizers, so results do not
//! depend on thread scheduling.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{length_exact, length_json};
use crate::limits::Limits;
use crate::metric::Vertex;
use crate::par::{self, Best};
use crate::structure::{DomainId, HhsStructure};
use crate::Rational;

fn zero() -> Rational {
    Rational::from_integer(0)
}

#[inline]
fn coord_dist(s: &HhsStructure, u: DomainId, a: Vertex, b: Vertex) -> Rational {
    s.domain(u).space.dist(a, b)
}

fn check_pairs(pairs: u64, limits: &Limits) -> Result<()> {
    if pairs > limits.pair_budget {
        return Err(Error::PairBudgetExceeded {
            pairs,
            budget: limits.pair_budget,
        });
    }
    Ok(())
}

fn unordered_pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

// ---------------------------------------------------------------------------
// Coarse Lipschitz

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainLipschitz {
    pub domain: DomainId,
    pub k: Rational,
    pub c: Rational,
    /// Edge `(x, y)` of the total space attaining the stretch.
    pub witness: Option<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzReport {
    pub per_domain: Vec<DomainLipschitz>,
    pub k: Rational,
    pub c: Rational,
    pub witness: Option<(DomainId, Vertex, Vertex)>,
}

/// Largest edge-wise stretch `d_U(x_U, y_U) / w(x, y)` per domain. On a
/// geodesic graph this bounds the stretch over all pairs, so `C = 0`.
pub fn check_coarse_lipschitz(s: &HhsStructure) -> LipschitzReport {
    let edges = s.total_space().edges();
    let per_domain: Vec<DomainLipschitz> = par::map_collect(s.domain_count(), |u| {
        let u = DomainId(u);
        let mut best: Option<Best<Rational, (Vertex, Vertex)>> = None;
        for e in edges {
            let w = Rational::new(*e.weight.numer() as i64, *e.weight.denom() as i64);
            let stretch = coord_dist(s, u, s.coordinate(u, e.u), s.coordinate(u, e.v)) / w;
            Best::offer(&mut best, stretch, (e.u, e.v));
        }
        DomainLipschitz {
            domain: u,
            k: best.as_ref().map_or_else(zero, |b| b.value),
            c: zero(),
            witness: best.map(|b| b.witness),
        }
    });
    let mut global: Option<Best<Rational, (DomainId, Vertex, Vertex)>> = None;
    for d in &per_domain {
        if let Some((x, y)) = d.witness {
            Best::offer(&mut global, d.k, (d.domain, x, y));
        }
    }
    LipschitzReport {
        k: global.as_ref().map_or_else(zero, |b| b.value),
        c: zero(),
        witness: global.map(|b| b.witness),
        per_domain,
    }
}

// ---------------------------------------------------------------------------
// Transverse consistency

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consistency {
    pub kappa: Rational,
    /// `(U, V, x)` with `U < V` transverse.
    pub witness: Option<(DomainId, DomainId, Vertex)>,
}

/// `κ = max min(d_U(x_U, ρ^V_U), d_V(x_V, ρ^U_V))` over transverse `U, V`
/// and every `x`.
pub fn check_transverse_consistency(s: &HhsStructure) -> Consistency {
    let pairs = s.transverse_pairs();
    let n = s.total_space().len();
    let best = par::max_over(pairs.len(), |p| {
        let (u, v) = pairs[p];
        let (rho_vu, rho_uv) = (s.rho(v, u)?, s.rho(u, v)?);
        let mut best = None;
        for x in 0..n {
            let a = coord_dist(s, u, s.coordinate(u, x), rho_vu);
            let b = coord_dist(s, v, s.coordinate(v, x), rho_uv);
            Best::offer(&mut best, a.min(b), (u, v, x));
        }
        best
    });
    Consistency {
        kappa: best.as_ref().map_or_else(zero, |b| b.value),
        witness: best.map(|b| b.witness),
    }
}

// ---------------------------------------------------------------------------
// Bounded geodesic image

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedGeodesicImage {
    pub threshold: Rational,
    pub bound: Rational,
    /// `(U, V, x, y)` with `U ⊏ V`.
    pub witness: Option<(DomainId, DomainId, Vertex, Vertex)>,
    /// Set when geodesic enumeration was cut short; never set by the exact
    /// method used here, kept for report compatibility.
    pub truncated: bool,
}

/// `avoid[a·m + b]`: some geodesic of the space from `a` to `b` has every
/// vertex at distance at least `threshold` from `center`.
pub(crate) fn avoiding_geodesics(space: &crate::MetricSpace, center: Vertex, threshold: Rational) -> Vec<bool> {
    let m = space.len();
    let far: Vec<bool> = (0..m).map(|v| space.dist(v, center) >= threshold).collect();
    let columns: Vec<Vec<bool>> = par::map_collect(m, |b| {
        let mut good = vec![false; m];
        if !far[b] {
            return good;
        }
        let mut order: Vec<Vertex> = (0..m).collect();
        order.sort_by_key(|&a| space.ticks(a, b));
        for a in order {
            if !far[a] {
                continue;
            }
            let remaining = space.ticks(a, b);
            good[a] = a == b
                || space
                    .neighbors(a)
                    .iter()
                    .any(|&(w, len)| good[w] && len + space.ticks(w, b) == remaining);
        }
        good
    });
    let mut avoid = vec![false; m * m];
    for (b, col) in columns.iter().enumerate() {
        for (a, &g) in col.iter().enumerate() {
            avoid[a * m + b] = g;
        }
    }
    avoid
}

/// For every `U ⊏ V` and every pair `x, y`: when some geodesic of `𝒞V` from
/// `x_V` to `y_V` stays at distance `≥ threshold` from `ρ^U_V`, the value
/// `d_U(x_U, y_U)` is recorded. Returns the largest recorded value.
pub fn check_bounded_geodesic_image(
    s: &HhsStructure,
    threshold: Rational,
    limits: &Limits,
) -> Result<BoundedGeodesicImage> {
    if threshold < zero() {
        return Err(Error::InvalidArgument("the BGI threshold must be nonnegative".into()));
    }
    let n = s.total_space().len();
    let nested: Vec<(DomainId, DomainId)> =
        s.nested_pairs().into_iter().filter(|&(u, v)| s.rho(u, v).is_some()).collect();
    check_pairs(unordered_pairs(n).saturating_mul(nested.len() as u64), limits)?;

    let mut best: Option<Best<Rational, (DomainId, DomainId, Vertex, Vertex)>> = None;
    for &(u, v) in &nested {
        let space_v = &s.domain(v).space;
        let m = space_v.len();
        let avoid = avoiding_geodesics(space_v, s.rho(u, v).expect("filtered"), threshold);
        let found = par::max_over(n, |x| {
            let (xu, xv) = (s.coordinate(u, x), s.coordinate(v, x));
            let mut local = None;
            for y in x + 1..n {
                if avoid[xv * m + s.coordinate(v, y)] {
                    Best::offer(&mut local, coord_dist(s, u, xu, s.coordinate(u, y)), (u, v, x, y));
                }
            }
            local
        });
        best = Best::merge(best, found);
    }
    Ok(BoundedGeodesicImage {
        threshold,
        bound: best.as_ref().map_or_else(zero, |b| b.value),
        witness: best.map(|b| b.witness),
        truncated: false,
    })
}

/// [`check_bounded_geodesic_image`] at each threshold.
pub fn bgi_profile(
    s: &HhsStructure,
    thresholds: &[Rational],
    limits: &Limits,
) -> Result<Vec<BoundedGeodesicImage>> {
    thresholds.iter().map(|&e| check_bounded_geodesic_image(s, e, limits)).collect()
}

// ---------------------------------------------------------------------------
// Partial realization

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationWitness {
    pub family: Vec<DomainId>,
    /// Prescribed coordinate in each family member.
    pub tuple: Vec<Vertex>,
    /// The chosen realization point.
    pub point: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialRealization {
    pub eps: Rational,
    pub eps_witness: Option<RealizationWitness>,
    /// Distance of the chosen point's `W`-coordinates from `ρ^{V_j}_W`.
    pub rho_eps: Rational,
    pub rho_witness: Option<RealizationWitness>,
    pub families: usize,
    pub tuples: u64,
}

/// Nonempty pairwise-orthogonal families of size at most `cap`, each
/// increasing, in lexicographic order.
pub fn orthogonal_families(s: &HhsStructure, cap: usize) -> Vec<Vec<DomainId>> {
    fn extend(s: &HhsStructure, cap: usize, current: &mut Vec<DomainId>, out: &mut Vec<Vec<DomainId>>) {
        out.push(current.clone());
        if current.len() == cap {
            return;
        }
        let start = current.last().map_or(0, |d| d.0 + 1);
        for c in start..s.domain_count() {
            let c = DomainId(c);
            if current.iter().all(|&d| s.is_orthogonal(d, c)) {
                current.push(c);
                extend(s, cap, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    for d in s.domain_ids() {
        if cap > 0 {
            extend(s, cap, &mut vec![d], &mut out);
        }
    }
    out
}

/// For every pairwise-orthogonal family `{V_j}` and every tuple `p_j ∈ 𝒞V_j`,
/// finds the points minimizing `max_j d_{V_j}(x_{V_j}, p_j)`. `eps` is the
/// largest such minimum. Among minimizers the point with the smallest
/// ρ-defect (then the smallest id) is chosen; `rho_eps` is the largest
/// ρ-defect of a chosen point.
pub fn check_partial_realization(s: &HhsStructure, limits: &Limits) -> Result<PartialRealization> {
    let families = orthogonal_families(s, limits.family_cap);
    let sizes: Vec<u64> = families
        .iter()
        .map(|f| f.iter().fold(1u64, |acc, &d| acc.saturating_mul(s.domain(d).space.len() as u64)))
        .collect();
    let tuples = sizes.iter().fold(0u64, |acc, &t| acc.saturating_add(t));
    if tuples > limits.tuple_budget {
        return Err(Error::CombinatorialBlowup {
            tuples,
            budget: limits.tuple_budget,
        });
    }
    let n = s.total_space().len();

    type Key = (Vec<usize>, usize, Vec<Vertex>);
    let mut eps: Option<Best<Rational, Key>> = None;
    let mut rho_eps: Option<Best<Rational, Key>> = None;
    for (fi, family) in families.iter().enumerate() {
        let rho_defect: Vec<Rational> = par::map_collect(n, |x| rho_defect(s, family, x));
        let dims: Vec<usize> = family.iter().map(|&d| s.domain(d).space.len()).collect();
        let ids: Vec<usize> = family.iter().map(|d| d.0).collect();
        let per_tuple = |t: usize| {
            let tuple = unrank(t, &dims);
            let mut chosen: Option<(Rational, Rational, Vertex)> = None;
            for (x, &rd) in rho_defect.iter().enumerate() {
                let e = family
                    .iter()
                    .zip(&tuple)
                    .map(|(&d, &p)| coord_dist(s, d, s.coordinate(d, x), p))
                    .max()
                    .unwrap_or_else(zero);
                let cand = (e, rd, x);
                if chosen.as_ref().is_none_or(|c| cand < *c) {
                    chosen = Some(cand);
                }
            }
            let (e, r, x) = chosen.expect("the total space is nonempty");
            (e, r, x, tuple)
        };
        let results = par::map_collect(sizes[fi] as usize, per_tuple);
        for (e, r, x, tuple) in results {
            Best::offer(&mut eps, e, (ids.clone(), x, tuple.clone()));
            Best::offer(&mut rho_eps, r, (ids.clone(), x, tuple));
        }
    }
    let witness = |b: &Best<Rational, Key>| RealizationWitness {
        family: b.witness.0.iter().map(|&d| DomainId(d)).collect(),
        point: b.witness.1,
        tuple: b.witness.2.clone(),
    };
    Ok(PartialRealization {
        eps: eps.as_ref().map_or_else(zero, |b| b.value),
        eps_witness: eps.as_ref().map(witness),
        rho_eps: rho_eps.as_ref().map_or_else(zero, |b| b.value),
        rho_witness: rho_eps.as_ref().map(witness),
        families: families.len(),
        tuples,
    })
}

/// `max_j max_W d_W(x_W, ρ^{V_j}_W)` over every `W` where the ρ-point is defined.
fn rho_defect(s: &HhsStructure, family: &[DomainId], x: Vertex) -> Rational {
    let mut worst = zero();
    for &v in family {
        for w in s.domain_ids() {
            if let Some(r) = s.rho(v, w) {
                worst = worst.max(coord_dist(s, w, s.coordinate(w, x), r));
            }
        }
    }
    worst
}

fn unrank(mut t: usize, dims: &[usize]) -> Vec<Vertex> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = t % d;
        t /= d;
    }
    out
}

// ---------------------------------------------------------------------------
// Uniqueness

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessEntry {
    pub radius: Rational,
    pub theta: Rational,
    pub witness: Option<(Vertex, Vertex)>,
}

/// `θ(r) = max d_X(x, y)` over pairs whose coordinates all lie within `r`.
/// Radii are reported in increasing order.
pub fn check_uniqueness(s: &HhsStructure, radii: &[Rational], limits: &Limits) -> Result<Vec<UniquenessEntry>> {
    if radii.is_empty() || radii.iter().any(|r| *r < zero()) {
        return Err(Error::InvalidArgument("uniqueness radii must be nonempty and nonnegative".into()));
    }
    let mut radii = radii.to_vec();
    radii.sort();
    radii.dedup();
    let n = s.total_space().len();
    check_pairs(unordered_pairs(n), limits)?;
    let space = s.total_space();
    let rows = par::map_collect(n, |x| {
        let mut local: Vec<Option<Best<Rational, (Vertex, Vertex)>>> = vec![None; radii.len()];
        for y in x + 1..n {
            let gap = s
                .domain_ids()
                .map(|u| coord_dist(s, u, s.coordinate(u, x), s.coordinate(u, y)))
                .max()
                .unwrap_or_else(zero);
            let start = radii.partition_point(|r| *r < gap);
            let d = space.dist(x, y);
            for slot in &mut local[start..] {
                Best::offer(slot, d, (x, y));
            }
        }
        local
    });
    let mut merged: Vec<Option<Best<Rational, (Vertex, Vertex)>>> = vec![None; radii.len()];
    for row in rows {
        for (slot, b) in merged.iter_mut().zip(row) {
            *slot = Best::merge(slot.take(), b);
        }
    }
    Ok(radii
        .into_iter()
        .zip(merged)
        .map(|(radius, b)| UniquenessEntry {
            radius,
            theta: b.as_ref().map_or_else(zero, |b| b.value),
            witness: b.map(|b| b.witness),
        })
        .collect())
}

// ---------------------------------------------------------------------------
// ρ-coherence

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoCoherence {
    /// `max d_W(ρ^U_W, ρ^V_W)` over `U ⊏ V` with both points defined.
    pub bound: Rational,
    /// `(U, V, W)`.
    pub witness: Option<(DomainId, DomainId, DomainId)>,
    /// The same quantity over orthogonal `U, V` (`U < V`).
    pub orthogonal_bound: Rational,
    pub orthogonal_witness: Option<(DomainId, DomainId, DomainId)>,
}

pub fn check_rho_coherence(s: &HhsStructure) -> RhoCoherence {
    let mut nested = None;
    let mut orthogonal = None;
    for u in s.domain_ids() {
        for v in s.domain_ids() {
            let slot = if s.is_nested(u, v) {
                &mut nested
            } else if u < v && s.is_orthogonal(u, v) {
                &mut orthogonal
            } else {
                continue;
            };
            for w in s.domain_ids() {
                if let (Some(a), Some(b)) = (s.rho(u, w), s.rho(v, w)) {
                    Best::offer(slot, coord_dist(s, w, a, b), (u, v, w));
                }
            }
        }
    }
    RhoCoherence {
        bound: nested.as_ref().map_or_else(zero, |b: &Best<Rational, _>| b.value),
        witness: nested.map(|b| b.witness),
        orthogonal_bound: orthogonal.as_ref().map_or_else(zero, |b: &Best<Rational, _>| b.value),
        orthogonal_witness: orthogonal.map(|b| b.witness),
    }
}

// ---------------------------------------------------------------------------
// Full report

/// Caps and thresholds for [`full_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    pub limits: Limits,
    /// BGI thresholds; the first one is the headline value.
    pub bgi_thresholds: Vec<Rational>,
    pub uniqueness_radii: Vec<Rational>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        let ints = |xs: &[i64]| xs.iter().map(|&x| Rational::from_integer(x)).collect();
        Self {
            limits: Limits::from_env(),
            bgi_thresholds: ints(&[1, 2, 3]),
            uniqueness_radii: ints(&[0, 1, 2, 4]),
        }
    }
}

/// All checks. A check that hits a cap is recorded as an error entry; the
/// rest of the report is still produced.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub lipschitz: LipschitzReport,
    pub consistency: Consistency,
    pub bgi: Result<Vec<BoundedGeodesicImage>>,
    pub realization: Result<PartialRealization>,
    pub uniqueness: Result<Vec<UniquenessEntry>>,
    pub rho_coherence: RhoCoherence,
}

/// Runs every check. Refuses structures failing the relation axioms.
pub fn full_report(s: &HhsStructure, config: &ReportConfig) -> Result<AxiomReport> {
    let violations = s.validate_relation_axioms();
    if !violations.is_empty() {
        return Err(Error::ValidationFirst(violations.len()));
    }
    let limits = &config.limits;
    Ok(AxiomReport {
        lipschitz: check_coarse_lipschitz(s),
        consistency: check_transverse_consistency(s),
        bgi: bgi_profile(s, &config.bgi_thresholds, limits),
        realization: check_partial_realization(s, limits),
        uniqueness: check_uniqueness(s, &config.uniqueness_radii, limits),
        rho_coherence: check_rho_coherence(s),
    })
}

impl AxiomReport {
    /// Headline BGI constant (first threshold).
    pub fn bgi_bound(&self) -> Option<Rational> {
        self.bgi.as_ref().ok()?.first().map(|b| b.bound)
    }

    pub fn theta(&self, radius: Rational) -> Option<Rational> {
        self.uniqueness
            .as_ref()
            .ok()?
            .iter()
            .find(|e| e.radius == radius)
            .map(|e| e.theta)
    }

    pub fn to_json(&self, s: &HhsStructure) -> Value {
        let name = |d: DomainId| s.name(d).to_string();
        let entry = |c: Rational, witness: Value| {
            json!({"constant": length_json(c), "exact": length_exact(c), "witness": witness, "flags": []})
        };
        let failed = |e: &Error| {
            json!({"constant": null, "exact": null, "witness": null, "flags": ["error"], "error": e.to_string()})
        };

        let mut lipschitz = entry(
            self.lipschitz.k,
            self.lipschitz
                .witness
                .map_or(Value::Null, |(d, x, y)| json!({"domain": name(d), "edge": [x, y]})),
        );
        lipschitz["additive"] = length_json(self.lipschitz.c);
        lipschitz["per_domain"] = self
            .lipschitz
            .per_domain
            .iter()
            .map(|d| json!({"domain": name(d.domain), "K": length_json(d.k), "C": length_json(d.c)}))
            .collect();

        let consistency = entry(
            self.consistency.kappa,
            self.consistency
                .witness
                .map_or(Value::Null, |(u, v, x)| json!({"u": name(u), "v": name(v), "x": x})),
        );

        let bgi = match &self.bgi {
            Ok(profile) => {
                let head = profile.first();
                let mut e = entry(
                    head.map_or_else(zero, |b| b.bound),
                    head.and_then(|b| b.witness)
                        .map_or(Value::Null, |(u, v, x, y)| json!({"u": name(u), "v": name(v), "x": x, "y": y})),
                );
                e["threshold"] = head.map_or(Value::Null, |b| length_json(b.threshold));
                e["profile"] = profile
                    .iter()
                    .map(|b| json!({"threshold": length_json(b.threshold), "constant": length_json(b.bound)}))
                    .collect();
                if profile.iter().any(|b| b.truncated) {
                    e["flags"] = json!(["truncated"]);
                }
                e
            }
            Err(err) => failed(err),
        };

        let realization_witness = |w: &Option<RealizationWitness>| {
            w.as_ref().map_or(Value::Null, |w| {
                json!({
                    "family": w.family.iter().map(|&d| name(d)).collect::<Vec<_>>(),
                    "tuple": w.tuple,
                    "point": w.point,
                })
            })
        };
        let (realization, realization_rho) = match &self.realization {
            Ok(r) => {
                let mut a = entry(r.eps, realization_witness(&r.eps_witness));
                a["families"] = json!(r.families);
                a["tuples"] = json!(r.tuples);
                (a, entry(r.rho_eps, realization_witness(&r.rho_witness)))
            }
            Err(err) => (failed(err), failed(err)),
        };

        let uniqueness = match &self.uniqueness {
            Ok(profile) => {
                let head = &profile[0];
                let mut e = entry(head.theta, head.witness.map_or(Value::Null, |(x, y)| json!([x, y])));
                e["radius"] = length_json(head.radius);
                e["profile"] = profile
                    .iter()
                    .map(|u| {
                        json!({
                            "radius": length_json(u.radius),
                            "theta": length_json(u.theta),
                            "witness": u.witness,
                        })
                    })
                    .collect();
                e
            }
            Err(err) => failed(err),
        };

        let triple = |w: Option<(DomainId, DomainId, DomainId)>| {
            w.map_or(Value::Null, |(u, v, w)| json!({"u": name(u), "v": name(v), "w": name(w)}))
        };
        let mut rho = entry(self.rho_coherence.bound, triple(self.rho_coherence.witness));
        rho["orthogonal_agreement"] = entry(
            self.rho_coherence.orthogonal_bound,
            triple(self.rho_coherence.orthogonal_witness),
        );

        json!({
            "lipschitz": lipschitz,
            "consistency": consistency,
            "bounded_geodesic_image": bgi,
            "partial_realization": realization,
            "partial_realization_rho": realization_rho,
            "uniqueness": uniqueness,
            "rho_coherence": rho,
        })
    }
}
