//! Hyperbolicity constants by exhaustive sweep.

use serde_json::{json, Value};

use super::{MetricSpace, Vertex};
use crate::error::{Error, Result};
use crate::io::length_json;
use crate::limits::Limits;
use crate::par::{self, Best};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPointDelta {
    pub delta: Rational,
    /// Lexicographically smallest increasing quadruple attaining `delta`;
    /// `None` when the space has fewer than four vertices.
    pub witness: Option<[Vertex; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinTriangleDelta {
    pub delta: Rational,
    /// Lexicographically smallest increasing triple attaining `delta`.
    pub witness: Option<[Vertex; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub four_point: FourPointDelta,
    pub thin_triangle: ThinTriangleDelta,
}

impl DeltaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "four_point_delta": length_json(self.four_point.delta),
            "witness_quadruple": self.four_point.witness,
            "thin_triangle_delta_canonical": length_json(self.thin_triangle.delta),
            "witness_triangle": self.thin_triangle.witness,
        })
    }
}

fn check_cap(space: &MetricSpace, limits: &Limits) -> Result<()> {
    if space.len() > limits.delta_cap {
        return Err(Error::SizeLimitExceeded {
            what: "hyperbolicity sweep",
            size: space.len(),
            cap: limits.delta_cap,
        });
    }
    Ok(())
}

/// Largest half-gap between the two largest of the three pairings
/// `d(x,y)+d(z,w)`, `d(x,z)+d(y,w)`, `d(x,w)+d(y,z)` over all quadruples.
pub fn four_point_delta(space: &MetricSpace, limits: &Limits) -> Result<FourPointDelta> {
    check_cap(space, limits)?;
    let n = space.len();
    let d = space.distances();
    let best = par::max_over(n, |i| {
        let row_i = &d[i * n..(i + 1) * n];
        let mut best: Option<Best<u64, [Vertex; 4]>> = None;
        for j in i + 1..n {
            let row_j = &d[j * n..(j + 1) * n];
            for k in j + 1..n {
                let row_k = &d[k * n..(k + 1) * n];
                let (dij, dik, djk) = (row_i[j], row_i[k], row_j[k]);
                for l in k + 1..n {
                    let s1 = dij + row_k[l];
                    let s2 = dik + row_j[l];
                    let s3 = row_i[l] + djk;
                    let (hi, mid) = top_two(s1, s2, s3);
                    let gap = hi - mid;
                    if best.as_ref().is_none_or(|b| gap > b.value) {
                        best = Some(Best::new(gap, [i, j, k, l]));
                    }
                }
            }
        }
        best
    });
    Ok(match best {
        Some(b) => FourPointDelta {
            delta: space.to_length(b.value) / 2,
            witness: Some(b.witness),
        },
        None => FourPointDelta {
            delta: Rational::from_integer(0),
            witness: None,
        },
    })
}

#[inline]
fn top_two(a: u64, b: u64, c: u64) -> (u64, u64) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if c >= hi {
        (c, hi)
    } else if c >= lo {
        (hi, c)
    } else {
        (hi, lo)
    }
}

/// Thin-triangle constant over canonical geodesics.
///
/// Every triple `a < b < c` is joined by the canonical geodesics
/// `γ(a,b)`, `γ(a,c)`, `γ(b,c)` (each taken from its smaller endpoint). The
/// triangle's constant is the largest distance from a vertex of one side to the
/// union of the other two. Since one geodesic is fixed per pair, this bounds the
/// thin-triangle constant over all geodesic choices from below.
pub fn thin_triangle_delta_canonical(space: &MetricSpace, limits: &Limits) -> Result<ThinTriangleDelta> {
    check_cap(space, limits)?;
    let n = space.len();
    if n < 3 {
        return Ok(ThinTriangleDelta {
            delta: Rational::from_integer(0),
            witness: None,
        });
    }
    let pair_index = |u: Vertex, v: Vertex| u * (2 * n - u - 1) / 2 + (v - u - 1);
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let sides: Vec<Vec<Vertex>> =
        par::map_collect(pairs.len(), |p| space.canonical_geodesic(pairs[p].0, pairs[p].1));

    let best = if space.diameter_ticks() <= u32::MAX as u64 {
        // Distance from each vertex to each side, precomputed.
        let table: Vec<Vec<u32>> = par::map_collect(sides.len(), |s| {
            (0..n)
                .map(|p| sides[s].iter().map(|&q| space.ticks(p, q)).min().unwrap() as u32)
                .collect()
        });
        triangle_sweep(n, &sides, pair_index, |side, p| table[side][p] as u64)
    } else {
        triangle_sweep(n, &sides, pair_index, |side, p| {
            sides[side].iter().map(|&q| space.ticks(p, q)).min().unwrap()
        })
    };
    Ok(match best {
        Some(b) => ThinTriangleDelta {
            delta: space.to_length(b.value),
            witness: Some(b.witness),
        },
        None => ThinTriangleDelta {
            delta: Rational::from_integer(0),
            witness: None,
        },
    })
}

fn triangle_sweep<I, D>(n: usize, sides: &[Vec<Vertex>], pair_index: I, to_side: D) -> Option<Best<u64, [Vertex; 3]>>
where
    I: Fn(Vertex, Vertex) -> usize + Sync + Send,
    D: Fn(usize, Vertex) -> u64 + Sync + Send,
{
    let side_gap = |side: usize, other_a: usize, other_b: usize| {
        sides[side]
            .iter()
            .map(|&p| to_side(other_a, p).min(to_side(other_b, p)))
            .max()
            .unwrap_or(0)
    };
    par::max_over(n, |a| {
        let mut best: Option<Best<u64, [Vertex; 3]>> = None;
        for b in a + 1..n {
            let ab = pair_index(a, b);
            for c in b + 1..n {
                let ac = pair_index(a, c);
                let bc = pair_index(b, c);
                let gap = side_gap(ab, ac, bc)
                    .max(side_gap(ac, ab, bc))
                    .max(side_gap(bc, ab, ac));
                if best.as_ref().is_none_or(|cur| gap > cur.value) {
                    best = Some(Best::new(gap, [a, b, c]));
                }
            }
        }
        best
    })
}

pub fn delta_report(space: &MetricSpace, limits: &Limits) -> Result<DeltaReport> {
    Ok(DeltaReport {
        four_point: four_point_delta(space, limits)?,
        thin_triangle: thin_triangle_delta_canonical(space, limits)?,
    })
}
