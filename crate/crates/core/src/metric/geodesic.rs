use super::{MetricSpace, Vertex};
use crate::error::{Error, Result};

/// Shortest paths between two vertices, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geodesics {
    pub paths: Vec<Vec<Vertex>>,
    /// Set when more geodesics exist than the cap allowed to be listed.
    pub truncated: bool,
}

/// Closest-point projection onto a vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    /// Smallest-id member of `full_set`.
    pub canonical: Vertex,
    /// Every target vertex at minimal distance, increasing.
    pub full_set: Vec<Vertex>,
}

impl MetricSpace {
    /// True when `w` lies on some geodesic from `a` to `b`.
    #[inline]
    pub fn in_interval(&self, a: Vertex, w: Vertex, b: Vertex) -> bool {
        self.ticks(a, w) + self.ticks(w, b) == self.ticks(a, b)
    }

    /// The lexicographically first shortest path: from each vertex, step to the
    /// smallest-id neighbor that stays on a shortest path to `v`.
    pub fn canonical_geodesic(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            let remaining = self.ticks(cur, v);
            let next = self.adjacency[cur]
                .iter()
                .find(|&&(w, len)| len + self.ticks(w, v) == remaining)
                .map(|&(w, _)| w)
                .expect("connected graph always has a geodesic step");
            path.push(next);
            cur = next;
        }
        path
    }

    /// All shortest paths from `u` to `v` in lexicographic order, at most `cap`.
    pub fn geodesics(&self, u: Vertex, v: Vertex, cap: usize) -> Geodesics {
        let cap = cap.max(1);
        let mut out = Geodesics {
            paths: Vec::new(),
            truncated: false,
        };
        let mut path = vec![u];
        self.extend_geodesics(v, &mut path, cap, &mut out);
        out
    }

    fn extend_geodesics(&self, target: Vertex, path: &mut Vec<Vertex>, cap: usize, out: &mut Geodesics) {
        if out.truncated {
            return;
        }
        let cur = *path.last().unwrap();
        if cur == target {
            if out.paths.len() == cap {
                out.truncated = true;
            } else {
                out.paths.push(path.clone());
            }
            return;
        }
        let remaining = self.ticks(cur, target);
        for &(w, len) in &self.adjacency[cur] {
            if len + self.ticks(w, target) == remaining {
                path.push(w);
                self.extend_geodesics(target, path, cap, out);
                path.pop();
                if out.truncated {
                    return;
                }
            }
        }
    }

    /// Nearest points of `target` to `x`.
    pub fn closest_point_projection(&self, x: Vertex, target: &[Vertex]) -> Result<Projection> {
        if target.is_empty() {
            return Err(Error::EmptyTarget);
        }
        for &t in target {
            self.check_vertex(t)?;
        }
        let best = target.iter().map(|&t| self.ticks(x, t)).min().unwrap();
        let mut full_set: Vec<Vertex> = target
            .iter()
            .copied()
            .filter(|&t| self.ticks(x, t) == best)
            .collect();
        full_set.sort_unstable();
        full_set.dedup();
        Ok(Projection {
            canonical: full_set[0],
            full_set,
        })
    }
}
