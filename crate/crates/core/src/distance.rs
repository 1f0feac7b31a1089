//! Distance formula evaluation, quasi-isometry fitting and coarse hulls.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{length_exact, length_json};
use crate::limits::Limits;
use crate::metric::Vertex;
use crate::par::{self, Best};
use crate::structure::HhsStructure;
use crate::Rational;

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// `Σ_U d_U(x_U, y_U)` over every domain.
pub fn df_sum(s: &HhsStructure, x: Vertex, y: Vertex) -> Rational {
    df_thresholded(s, x, y, zero())
}

/// The sum restricted to terms `d_U(x_U, y_U) ≥ threshold`.
pub fn df_thresholded(s: &HhsStructure, x: Vertex, y: Vertex, threshold: Rational) -> Rational {
    s.domain_ids()
        .map(|u| s.domain(u).space.dist(s.coordinate(u, x), s.coordinate(u, y)))
        .filter(|&t| t >= threshold)
        .sum()
}

/// Which pairs a sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSet {
    /// Every unordered pair `x < y`.
    All,
    List(Vec<(Vertex, Vertex)>),
}

impl PairSet {
    fn resolve(&self, s: &HhsStructure, limits: &Limits) -> Result<Vec<(Vertex, Vertex)>> {
        let n = s.total_space().len();
        match self {
            PairSet::All => {
                let count = (n as u64) * (n as u64).saturating_sub(1) / 2;
                if count > limits.pair_budget {
                    return Err(Error::PairBudgetExceeded {
                        pairs: count,
                        budget: limits.pair_budget,
                    });
                }
                Ok((0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect())
            }
            PairSet::List(pairs) => {
                for &(x, y) in pairs {
                    s.total_space().check_vertex(x)?;
                    s.total_space().check_vertex(y)?;
                }
                Ok(pairs.clone())
            }
        }
    }
}

/// One evaluated pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfRow {
    pub x: Vertex,
    pub y: Vertex,
    pub distance: Rational,
    pub sum: Rational,
    pub thresholded: Rational,
}

impl DfRow {
    pub const HEADER: [&'static str; 5] = ["x", "y", "d_X", "sum", "thresholded_sum"];

    /// Fields in [`DfRow::HEADER`] order, exact.
    pub fn record(&self) -> [String; 5] {
        [
            self.x.to_string(),
            self.y.to_string(),
            length_exact(self.distance),
            length_exact(self.sum),
            length_exact(self.thresholded),
        ]
    }
}

pub fn df_rows(s: &HhsStructure, pairs: &PairSet, threshold: Rational, limits: &Limits) -> Result<Vec<DfRow>> {
    let pairs = pairs.resolve(s, limits)?;
    let space = s.total_space();
    Ok(par::map_collect(pairs.len(), |i| {
        let (x, y) = pairs[i];
        DfRow {
            x,
            y,
            distance: space.dist(x, y),
            sum: df_sum(s, x, y),
            thresholded: df_thresholded(s, x, y, threshold),
        }
    }))
}

/// Quasi-isometry constants with `(1/K)·Σ_s − C ≤ d_X ≤ K·Σ_s + C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiFit {
    pub k: Rational,
    pub c: Rational,
    pub threshold: Rational,
    /// `max(Σ_s/K − d_X)`, clamped at 0.
    pub max_lower_violation: Rational,
    /// `max(d_X − K·Σ_s)`, clamped at 0.
    pub max_upper_violation: Rational,
    /// Pair attaining `K`.
    pub witness: (Vertex, Vertex),
    pub pairs: usize,
}

impl QiFit {
    pub fn to_json(&self) -> Value {
        json!({
            "K": length_json(self.k),
            "C": length_json(self.c),
            "K_exact": length_exact(self.k),
            "C_exact": length_exact(self.c),
            "threshold_s": length_json(self.threshold),
            "max_lower_violation": length_json(self.max_lower_violation),
            "max_upper_violation": length_json(self.max_upper_violation),
            "witness": [self.witness.0, self.witness.1],
            "pairs": self.pairs,
        })
    }
}

/// `K` is the largest ratio `max(Σ_s/d_X, d_X/Σ_s)` over pairs where both are
/// positive; `C` is then the largest residual of the two inequalities at `K`.
pub fn fit_qi_constants(s: &HhsStructure, pairs: &PairSet, threshold: Rational, limits: &Limits) -> Result<QiFit> {
    let rows = df_rows(s, pairs, threshold, limits)?;
    fit_rows(&rows, threshold)
}

/// [`fit_qi_constants`] over rows already evaluated.
pub fn fit_rows(rows: &[DfRow], threshold: Rational) -> Result<QiFit> {
    let mut best: Option<Best<Rational, (Vertex, Vertex)>> = None;
    for r in rows {
        if r.distance > zero() && r.thresholded > zero() {
            let ratio = (r.thresholded / r.distance).max(r.distance / r.thresholded);
            Best::offer(&mut best, ratio, (r.x.min(r.y), r.x.max(r.y)));
        }
    }
    let best = best.ok_or(Error::DegeneratePairs)?;
    let k = best.value;
    let (mut lower, mut upper) = (zero(), zero());
    for r in rows {
        lower = lower.max(r.thresholded / k - r.distance);
        upper = upper.max(r.distance - r.thresholded * k);
    }
    Ok(QiFit {
        k,
        c: lower.max(upper),
        threshold,
        max_lower_violation: lower,
        max_upper_violation: upper,
        witness: best.witness,
        pairs: rows.len(),
    })
}

/// Points `z` whose every coordinate `z_U` lies within `slack` of a geodesic
/// of `𝒞U` from `x_U` to `y_U`. Increasing.
pub fn coarse_hull(s: &HhsStructure, x: Vertex, y: Vertex, slack: Rational) -> Result<Vec<Vertex>> {
    let space = s.total_space();
    space.check_vertex(x)?;
    space.check_vertex(y)?;
    if slack < zero() {
        return Err(Error::InvalidArgument("hull slack must be nonnegative".into()));
    }
    // For each domain, which of its vertices are close enough to the interval.
    let near: Vec<Vec<bool>> = par::map_collect(s.domain_count(), |u| {
        let u = crate::DomainId(u);
        let c = &s.domain(u).space;
        let (a, b) = (s.coordinate(u, x), s.coordinate(u, y));
        let interval: Vec<Vertex> = (0..c.len()).filter(|&w| c.in_interval(a, w, b)).collect();
        (0..c.len())
            .map(|v| interval.iter().any(|&w| c.dist(v, w) <= slack))
            .collect()
    });
    Ok((0..space.len())
        .filter(|&z| s.domain_ids().all(|u| near[u.0][s.coordinate(u, z)]))
        .collect())
}
