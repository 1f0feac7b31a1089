use num_traits::One;

use super::{MetricSpace, Weight};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Path graph with `len` unit edges (so `len + 1` vertices), labelled `P{len}`.
pub fn path_graph(len: usize) -> MetricSpace {
    let unbounded = Limits {
        max_vertices: usize::MAX,
        ..Limits::default()
    };
    MetricSpace::with_limits(len + 1, (0..len).map(|i| (i, i + 1, Weight::one())), &unbounded)
        .expect("paths are connected")
        .with_label(format!("P{len}"))
}

/// ℓ¹ product: vertex `(i, j)` has id `i * b.len() + j`, and its distance to
/// `(i', j')` is `d_a(i, i') + d_b(j, j')`.
pub fn l1_product(a: &MetricSpace, b: &MetricSpace, limits: &Limits) -> Result<MetricSpace> {
    let size = a
        .len()
        .checked_mul(b.len())
        .filter(|&s| s <= limits.max_vertices)
        .ok_or(Error::SizeLimitExceeded {
            what: "l1 product",
            size: a.len().saturating_mul(b.len()),
            cap: limits.max_vertices,
        })?;
    let nb = b.len();
    let mut edges = Vec::with_capacity(a.edges().len() * nb + b.edges().len() * a.len());
    for e in a.edges() {
        for j in 0..nb {
            edges.push((e.u * nb + j, e.v * nb + j, e.weight));
        }
    }
    for i in 0..a.len() {
        for e in b.edges() {
            edges.push((i * nb + e.u, i * nb + e.v, e.weight));
        }
    }
    let space = MetricSpace::with_limits(size, edges, limits)?;
    Ok(match (a.label(), b.label()) {
        (Some(la), Some(lb)) => space.with_label(format!("{la}x{lb}")),
        _ => space,
    })
}
