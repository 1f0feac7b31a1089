//! Finite geodesic metric spaces as connected weighted graphs.
//!
//! Edge weights are positive rationals. Internally every length is an integer
//! number of *ticks*, where one tick is `1 / scale` and `scale` is the least
//! common multiple of the weight denominators; unit-weight graphs therefore
//! have `scale == 1` and tick counts equal to hop counts.

mod delta;
mod geodesic;
mod product;

pub use delta::{
    delta_report, four_point_delta, thin_triangle_delta_canonical, DeltaReport, FourPointDelta,
    ThinTriangleDelta,
};
pub use geodesic::{Geodesics, Projection};
pub use product::{l1_product, path_graph};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::{par, Rational};

pub type Vertex = usize;

/// Positive rational edge weight.
pub type Weight = num_rational::Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: Weight,
}

/// A finite, connected, undirected weighted graph with its path metric.
///
/// Immutable after construction. The all-pairs distance matrix is computed on
/// first use and then shared by every reader.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    label: Option<String>,
    len: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(Vertex, u64)>>,
    scale: u64,
    unit: bool,
    dist: OnceLock<Vec<u64>>,
}

impl PartialEq for MetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.len == other.len && self.edges == other.edges
    }
}

impl Eq for MetricSpace {}

impl MetricSpace {
    /// Builds a space using [`Limits::from_env`].
    pub fn new<I>(len: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        Self::with_limits(len, edges, &Limits::from_env())
    }

    /// Unit-weight convenience constructor.
    pub fn unit(len: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        Self::new(len, edges.iter().map(|&(u, v)| (u, v, Weight::one())))
    }

    pub fn with_limits<I>(len: usize, edges: I, limits: &Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        if len == 0 {
            return Err(Error::EmptySpace);
        }
        if len > limits.max_vertices {
            return Err(Error::SizeLimitExceeded {
                what: "metric space",
                size: len,
                cap: limits.max_vertices,
            });
        }

        let mut stored = Vec::new();
        let mut seen = HashSet::new();
        for (u, v, weight) in edges {
            let invalid = |reason: &str| Error::InvalidEdge {
                u,
                v,
                reason: reason.to_string(),
            };
            if u >= len || v >= len {
                return Err(invalid("endpoint out of range"));
            }
            if u == v {
                return Err(invalid("self-loop"));
            }
            if weight.is_zero() {
                return Err(invalid("weight must be positive"));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(invalid("duplicate edge"));
            }
            stored.push(Edge { u: a, v: b, weight });
        }

        let scale = stored
            .iter()
            .fold(1u64, |acc, e| acc.lcm(e.weight.denom()));
        let mut adjacency = vec![Vec::new(); len];
        for e in &stored {
            let ticks = (scale / e.weight.denom())
                .checked_mul(*e.weight.numer())
                .ok_or_else(|| Error::InvalidEdge {
                    u: e.u,
                    v: e.v,
                    reason: "weight overflows the common denominator".into(),
                })?;
            adjacency[e.u].push((e.v, ticks));
            adjacency[e.v].push((e.u, ticks));
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let unit = adjacency.iter().flatten().all(|&(_, t)| t == 1);

        let space = Self {
            label: None,
            len,
            edges: stored,
            adjacency,
            scale,
            unit,
            dist: OnceLock::new(),
        };
        space.check_connected()?;
        Ok(space)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.len];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(unreachable) => Err(Error::DisconnectedGraph { unreachable }),
            None => Ok(()),
        }
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` in increasing id order, with edge lengths in ticks.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, u64)] {
        &self.adjacency[v]
    }

    /// Number of ticks per unit length.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// True when every edge has weight 1.
    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.len {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                len: self.len,
            })
        }
    }

    /// Row-major all-pairs distance matrix in ticks.
    pub fn distances(&self) -> &[u64] {
        self.dist.get_or_init(|| self.all_pairs())
    }

    /// Distance in ticks.
    #[inline]
    pub fn ticks(&self, u: Vertex, v: Vertex) -> u64 {
        self.distances()[u * self.len + v]
    }

    /// Exact distance.
    pub fn dist(&self, u: Vertex, v: Vertex) -> Rational {
        self.to_length(self.ticks(u, v))
    }

    /// Converts a tick count of this space to an exact length.
    pub fn to_length(&self, ticks: u64) -> Rational {
        Rational::new(ticks as i64, self.scale as i64)
    }

    pub fn diameter_ticks(&self) -> u64 {
        self.distances().iter().copied().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> Rational {
        self.to_length(self.diameter_ticks())
    }

    fn all_pairs(&self) -> Vec<u64> {
        let rows = par::map_collect(self.len, |s| {
            if self.unit {
                self.bfs(s)
            } else {
                self.dijkstra(s)
            }
        });
        rows.into_iter().flatten().collect()
    }

    fn bfs(&self, source: Vertex) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.len];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn dijkstra(&self, source: Vertex) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.len];
        let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
        dist[source] = 0;
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adjacency[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }
}
