use std::collections::VecDeque;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::{path_graph, MetricSpace, Vertex, Weight};
use crate::structure::{Complement, Domain, DomainId, HhsStructure, RhoPoint, StructureParts};

fn default_spawn_points() -> Vec<(i64, i64)> {
    vec![(1, 0), (0, 1), (-1, 0), (0, -1)]
}

/// A finite truncation of the tree of flats.
///
/// Each flat is a `(2N+1) × (2N+1)` unit grid with coordinates in `[-N, N]²`.
/// Every flat less than `depth` levels below the root carries one child flat
/// per spawn point, attached by a unit edge from the spawn point to the child's
/// origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeOfFlatsConfig {
    pub flat_radius: usize,
    pub depth: usize,
    #[serde(default = "default_spawn_points")]
    pub spawn_points: Vec<(i64, i64)>,
}

impl TreeOfFlatsConfig {
    pub fn new(flat_radius: usize, depth: usize) -> Self {
        Self {
            flat_radius,
            depth,
            spawn_points: default_spawn_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    pub parent: Option<usize>,
    /// Spawn point of the parent this flat hangs from.
    pub spawn: Option<(i64, i64)>,
    pub depth: usize,
}

/// Flat bookkeeping: which flat hangs where, and vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatLayout {
    pub flats: Vec<Flat>,
    pub radius: i64,
}

/// Generator output: the structure plus the layout used to build it.
#[derive(Debug, Clone)]
pub struct TreeOfFlats {
    pub structure: HhsStructure,
    pub layout: FlatLayout,
}

impl FlatLayout {
    pub fn side(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn flat_size(&self) -> usize {
        self.side() * self.side()
    }

    pub fn vertex(&self, flat: usize, x: i64, y: i64) -> Vertex {
        flat * self.flat_size() + ((x + self.radius) as usize) * self.side() + (y + self.radius) as usize
    }

    pub fn flat_of(&self, v: Vertex) -> usize {
        v / self.flat_size()
    }

    /// Lattice coordinates of `v` inside its own flat.
    pub fn local(&self, v: Vertex) -> (i64, i64) {
        let local = v % self.flat_size();
        (
            (local / self.side()) as i64 - self.radius,
            (local % self.side()) as i64 - self.radius,
        )
    }

    pub fn tree_domain(&self) -> DomainId {
        DomainId(0)
    }

    pub fn x_domain(&self, flat: usize) -> DomainId {
        DomainId(1 + 2 * flat)
    }

    pub fn y_domain(&self, flat: usize) -> DomainId {
        DomainId(2 + 2 * flat)
    }

    pub fn flat_vertices(&self, flat: usize) -> std::ops::Range<Vertex> {
        flat * self.flat_size()..(flat + 1) * self.flat_size()
    }
}

pub fn tree_of_flats(cfg: &TreeOfFlatsConfig, limits: &Limits) -> Result<TreeOfFlats> {
    if cfg.flat_radius == 0 {
        return Err(Error::ConfigValidation("flat_radius must be at least 1".into()));
    }
    let radius = cfg.flat_radius as i64;
    for (i, &(x, y)) in cfg.spawn_points.iter().enumerate() {
        if x.abs() > radius || y.abs() > radius {
            return Err(Error::ConfigValidation(format!("spawn point ({x}, {y}) lies outside the flat")));
        }
        if cfg.spawn_points[..i].contains(&(x, y)) {
            return Err(Error::ConfigValidation(format!("spawn point ({x}, {y}) listed twice")));
        }
    }

    let mut flats = vec![Flat {
        parent: None,
        spawn: None,
        depth: 0,
    }];
    let mut queue = VecDeque::from([0usize]);
    let side = (2 * radius + 1) as usize;
    let flat_size = side * side;
    while let Some(f) = queue.pop_front() {
        let depth = flats[f].depth;
        if depth >= cfg.depth {
            continue;
        }
        for &spawn in &cfg.spawn_points {
            flats.push(Flat {
                parent: Some(f),
                spawn: Some(spawn),
                depth: depth + 1,
            });
            queue.push_back(flats.len() - 1);
            if flats.len() * flat_size > limits.max_vertices {
                return Err(Error::SizeLimitExceeded {
                    what: "tree of flats",
                    size: flats.len() * flat_size,
                    cap: limits.max_vertices,
                });
            }
        }
    }

    let layout = FlatLayout { flats, radius };
    let n_flats = layout.flats.len();
    let total_len = n_flats * flat_size;

    let mut edges = Vec::new();
    for f in 0..n_flats {
        for x in -radius..=radius {
            for y in -radius..=radius {
                let v = layout.vertex(f, x, y);
                if x < radius {
                    edges.push((v, layout.vertex(f, x + 1, y), Weight::one()));
                }
                if y < radius {
                    edges.push((v, layout.vertex(f, x, y + 1), Weight::one()));
                }
            }
        }
    }
    for (f, flat) in layout.flats.iter().enumerate() {
        if let (Some(parent), Some((sx, sy))) = (flat.parent, flat.spawn) {
            edges.push((layout.vertex(parent, sx, sy), layout.vertex(f, 0, 0), Weight::one()));
        }
    }
    let total = MetricSpace::with_limits(total_len, edges, limits)?.with_label(format!(
        "tree-of-flats(N={}, D={})",
        cfg.flat_radius, cfg.depth
    ));

    // Gate of every vertex in every flat.
    let mut gates = vec![0; n_flats * total_len];
    for f in 0..n_flats {
        let target: Vec<Vertex> = layout.flat_vertices(f).collect();
        for x in 0..total_len {
            let proj = total.closest_point_projection(x, &target)?;
            if proj.full_set.len() != 1 {
                return Err(Error::ConfigValidation(format!(
                    "gate of vertex {x} in flat {f} is not a single point"
                )));
            }
            gates[f * total_len + x] = proj.canonical;
        }
    }
    let gate = |f: usize, x: Vertex| gates[f * total_len + x];
    let index = |c: i64| (c + radius) as usize;

    let tree_edges: Vec<_> = layout
        .flats
        .iter()
        .enumerate()
        .filter_map(|(f, flat)| flat.parent.map(|p| (p, f, Weight::one())))
        .collect();
    let tree = MetricSpace::with_limits(n_flats, tree_edges, limits)?.with_label("CT");

    let mut domains = vec![Domain {
        name: "T".into(),
        space: tree,
        projection: (0..total_len).map(|x| layout.flat_of(x)).collect(),
    }];
    for f in 0..n_flats {
        for (axis, suffix) in [(0, "x"), (1, "y")] {
            let name = format!("F{f}_{suffix}");
            let projection = (0..total_len)
                .map(|x| {
                    let (gx, gy) = layout.local(gate(f, x));
                    index(if axis == 0 { gx } else { gy })
                })
                .collect();
            domains.push(Domain {
                space: path_graph(2 * cfg.flat_radius).with_label(format!("C{name}")),
                name,
                projection,
            });
        }
    }

    let t = layout.tree_domain();
    let mut nesting = Vec::new();
    let mut orthogonal = Vec::new();
    let mut complements = Vec::new();
    let mut rho = Vec::new();
    for f in 0..n_flats {
        let (fx, fy) = (layout.x_domain(f), layout.y_domain(f));
        nesting.push((fx, t));
        nesting.push((fy, t));
        orthogonal.push((fx, fy));
        complements.push(Complement { v: fx, w: t, comp: fy });
        complements.push(Complement { v: fy, w: t, comp: fx });
        rho.push(RhoPoint { of: fx, target: t, vertex: f });
        rho.push(RhoPoint { of: fy, target: t, vertex: f });
    }
    for e in 0..n_flats {
        for f in 0..n_flats {
            if e == f {
                continue;
            }
            // Every vertex of E has the same gate in F; use E's origin.
            let (gx, gy) = layout.local(gate(f, layout.vertex(e, 0, 0)));
            for of in [layout.x_domain(e), layout.y_domain(e)] {
                rho.push(RhoPoint { of, target: layout.x_domain(f), vertex: index(gx) });
                rho.push(RhoPoint { of, target: layout.y_domain(f), vertex: index(gy) });
            }
        }
    }

    let structure = HhsStructure::new(StructureParts {
        total_space: total,
        domains,
        nesting,
        orthogonal,
        rho,
        complements,
    })?;
    Ok(TreeOfFlats { structure, layout })
}
