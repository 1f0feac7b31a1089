//! Naive reference implementations.
//!
//! Everything here works from raw edge lists and the declared relation
//! tables: distances come from Floyd–Warshall over exact rationals, geodesics
//! from explicit path enumeration, and every maximum from a plain loop. None of
//! it calls the crate's distance or sweep code.

#![allow(dead_code)]

use std::collections::HashMap;

use hhs_core::structure::DomainId;
use hhs_core::{HhsStructure, MetricSpace, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<Option<Rational>>>;

pub fn r(x: i64) -> Rational {
    Rational::from_integer(x)
}

pub fn floyd_warshall(space: &MetricSpace) -> Vec<Vec<Rational>> {
    let n = space.len();
    let mut d: Matrix = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(r(0));
    }
    for e in space.edges() {
        let w = Rational::new(*e.weight.numer() as i64, *e.weight.denom() as i64);
        d[e.u][e.v] = Some(w);
        d[e.v][e.u] = Some(w);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(dkj) = d[k][j] {
                    let via = dik + dkj;
                    if d[i][j].is_none_or(|cur| via < cur) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| x.expect("connected")).collect())
        .collect()
}

pub fn neighbours(space: &MetricSpace) -> Vec<Vec<(usize, Rational)>> {
    let mut adj = vec![Vec::new(); space.len()];
    for e in space.edges() {
        let w = Rational::new(*e.weight.numer() as i64, *e.weight.denom() as i64);
        adj[e.u].push((e.v, w));
        adj[e.v].push((e.u, w));
    }
    adj
}

/// Every shortest path from `a` to `b`, by exhaustive simple-path search.
pub fn all_geodesics(space: &MetricSpace, d: &[Vec<Rational>], a: usize, b: usize) -> Vec<Vec<usize>> {
    fn walk(
        adj: &[Vec<(usize, Rational)>],
        target: usize,
        goal: Rational,
        len: Rational,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let cur = *path.last().unwrap();
        if len > goal {
            return;
        }
        if cur == target {
            if len == goal {
                out.push(path.clone());
            }
            return;
        }
        for &(w, wt) in &adj[cur] {
            if !path.contains(&w) {
                path.push(w);
                walk(adj, target, goal, len + wt, path, out);
                path.pop();
            }
        }
    }
    let adj = neighbours(space);
    let mut out = Vec::new();
    walk(&adj, b, d[a][b], r(0), &mut vec![a], &mut out);
    out.sort();
    out
}

/// Distance matrices of the total space and of every domain.
pub struct Oracle<'a> {
    pub s: &'a HhsStructure,
    pub dx: Vec<Vec<Rational>>,
    pub du: Vec<Vec<Vec<Rational>>>,
}

impl<'a> Oracle<'a> {
    pub fn new(s: &'a HhsStructure) -> Self {
        Self {
            s,
            dx: floyd_warshall(s.total_space()),
            du: s.domain_ids().map(|u| floyd_warshall(&s.domain(u).space)).collect(),
        }
    }

    fn n(&self) -> usize {
        self.s.total_space().len()
    }

    fn ids(&self) -> Vec<DomainId> {
        self.s.domain_ids().collect()
    }

    fn c(&self, u: DomainId, x: usize) -> usize {
        self.s.domain(u).projection[x]
    }

    fn rho(&self, of: DomainId, target: DomainId) -> Option<usize> {
        self.s
            .parts()
            .rho
            .iter()
            .find(|p| p.of == of && p.target == target)
            .map(|p| p.vertex)
    }

    fn nested(&self, a: DomainId, b: DomainId) -> bool {
        self.s.parts().nesting.contains(&(a, b))
    }

    fn orthogonal(&self, a: DomainId, b: DomainId) -> bool {
        self.s.parts().orthogonal.iter().any(|&p| p == (a, b) || p == (b, a))
    }

    fn transverse(&self, a: DomainId, b: DomainId) -> bool {
        a != b && !self.nested(a, b) && !self.nested(b, a) && !self.orthogonal(a, b)
    }

    /// Global stretch over all pairs (not only edges).
    pub fn lipschitz(&self) -> Rational {
        let mut k = r(0);
        for u in self.ids() {
            for x in 0..self.n() {
                for y in 0..self.n() {
                    if x != y {
                        k = k.max(self.du[u.0][self.c(u, x)][self.c(u, y)] / self.dx[x][y]);
                    }
                }
            }
        }
        k
    }

    pub fn kappa(&self) -> Rational {
        let mut k = r(0);
        for u in self.ids() {
            for v in self.ids() {
                if !self.transverse(u, v) {
                    continue;
                }
                let (rvu, ruv) = (self.rho(v, u).unwrap(), self.rho(u, v).unwrap());
                for x in 0..self.n() {
                    let a = self.du[u.0][self.c(u, x)][rvu];
                    let b = self.du[v.0][self.c(v, x)][ruv];
                    k = k.max(a.min(b));
                }
            }
        }
        k
    }

    pub fn bgi(&self, threshold: Rational) -> Rational {
        let mut best = r(0);
        for u in self.ids() {
            for v in self.ids() {
                if !self.nested(u, v) {
                    continue;
                }
                let rho = self.rho(u, v).unwrap();
                let dv = &self.du[v.0];
                let space_v = &self.s.domain(v).space;
                let mut cache: HashMap<(usize, usize), bool> = HashMap::new();
                for x in 0..self.n() {
                    for y in 0..self.n() {
                        let (a, b) = (self.c(v, x), self.c(v, y));
                        let ok = *cache.entry((a, b)).or_insert_with(|| {
                            all_geodesics(space_v, dv, a, b)
                                .iter()
                                .any(|g| g.iter().all(|&w| dv[w][rho] >= threshold))
                        });
                        if ok {
                            best = best.max(self.du[u.0][self.c(u, x)][self.c(u, y)]);
                        }
                    }
                }
            }
        }
        best
    }

    fn families(&self, cap: usize) -> Vec<Vec<DomainId>> {
        fn grow(o: &Oracle, cap: usize, from: usize, fam: &mut Vec<DomainId>, out: &mut Vec<Vec<DomainId>>) {
            if !fam.is_empty() {
                out.push(fam.clone());
            }
            if fam.len() == cap {
                return;
            }
            for c in from..o.s.domain_count() {
                let c = DomainId(c);
                if fam.iter().all(|&a| o.orthogonal(a, c)) {
                    fam.push(c);
                    grow(o, cap, c.0 + 1, fam, out);
                    fam.pop();
                }
            }
        }
        let mut out = Vec::new();
        grow(self, cap, 0, &mut Vec::new(), &mut out);
        out
    }

    /// `(eps, rho_eps)`, choosing minimizers by (defect, ρ-defect, id).
    pub fn realization(&self, cap: usize) -> (Rational, Rational) {
        let (mut eps, mut rho_eps) = (r(0), r(0));
        for fam in self.families(cap) {
            let mut tuples: Vec<Vec<usize>> = vec![vec![]];
            for &v in &fam {
                let m = self.s.domain(v).space.len();
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        (0..m).map(move |p| {
                            let mut t = t.clone();
                            t.push(p);
                            t
                        })
                    })
                    .collect();
            }
            for t in tuples {
                let mut chosen: Option<(Rational, Rational, usize)> = None;
                for x in 0..self.n() {
                    let mut e = r(0);
                    for (j, &v) in fam.iter().enumerate() {
                        e = e.max(self.du[v.0][self.c(v, x)][t[j]]);
                    }
                    let mut rd = r(0);
                    for &v in &fam {
                        for w in self.ids() {
                            if let Some(p) = self.rho(v, w) {
                                rd = rd.max(self.du[w.0][self.c(w, x)][p]);
                            }
                        }
                    }
                    let cand = (e, rd, x);
                    if chosen.is_none_or(|c| cand < c) {
                        chosen = Some(cand);
                    }
                }
                let (e, rd, _) = chosen.unwrap();
                eps = eps.max(e);
                rho_eps = rho_eps.max(rd);
            }
        }
        (eps, rho_eps)
    }

    pub fn theta(&self, radius: Rational) -> Rational {
        let mut t = r(0);
        for x in 0..self.n() {
            for y in 0..self.n() {
                if self.ids().iter().all(|&u| self.du[u.0][self.c(u, x)][self.c(u, y)] <= radius) {
                    t = t.max(self.dx[x][y]);
                }
            }
        }
        t
    }

    pub fn rho_coherence(&self) -> Rational {
        let mut b = r(0);
        for u in self.ids() {
            for v in self.ids() {
                if !self.nested(u, v) {
                    continue;
                }
                for w in self.ids() {
                    if let (Some(p), Some(q)) = (self.rho(u, w), self.rho(v, w)) {
                        b = b.max(self.du[w.0][p][q]);
                    }
                }
            }
        }
        b
    }

    pub fn df_sum(&self, x: usize, y: usize) -> Rational {
        self.ids().iter().map(|&u| self.du[u.0][self.c(u, x)][self.c(u, y)]).sum()
    }

    /// Hull by enumerating the geodesics of every domain.
    pub fn hull(&self, x: usize, y: usize, slack: Rational) -> Vec<usize> {
        let near: Vec<Vec<bool>> = self
            .ids()
            .iter()
            .map(|&u| {
                let d = &self.du[u.0];
                let space = &self.s.domain(u).space;
                let on: Vec<usize> = all_geodesics(space, d, self.c(u, x), self.c(u, y)).concat();
                (0..space.len()).map(|p| on.iter().any(|&q| d[p][q] <= slack)).collect()
            })
            .collect();
        (0..self.n())
            .filter(|&z| self.ids().iter().all(|&u| near[u.0][self.c(u, z)]))
            .collect()
    }
}

/// Four-point δ over every quadruple, directly from the definition.
pub fn four_point_naive(d: &[Vec<Rational>]) -> Rational {
    let n = d.len();
    let mut best = r(0);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut s = [d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]];
                    s.sort();
                    best = best.max((s[2] - s[1]) / 2);
                }
            }
        }
    }
    best
}

/// Uniform random recursive tree on `n` vertices.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    MetricSpace::unit(n, &edges).unwrap()
}

/// One constant computed both ways.
pub struct Comparison {
    pub name: &'static str,
    pub fast: Rational,
    pub naive: Rational,
}

/// Every axiom-checker constant next to its naive counterpart.
pub fn compare_constants(s: &HhsStructure, limits: &hhs_core::Limits) -> Vec<Comparison> {
    use hhs_core::axioms::*;
    let o = Oracle::new(s);
    let mut out = Vec::new();
    let mut push = |name, fast, naive| out.push(Comparison { name, fast, naive });
    push("lipschitz K", check_coarse_lipschitz(s).k, o.lipschitz());
    push("consistency kappa", check_transverse_consistency(s).kappa, o.kappa());
    for e in [0, 1, 2, 3] {
        let fast = check_bounded_geodesic_image(s, r(e), limits).unwrap().bound;
        push(["bgi E=0", "bgi E=1", "bgi E=2", "bgi E=3"][e as usize], fast, o.bgi(r(e)));
    }
    let real = check_partial_realization(s, limits).unwrap();
    let (eps, rho_eps) = o.realization(limits.family_cap);
    push("realization eps", real.eps, eps);
    push("realization rho eps", real.rho_eps, rho_eps);
    let radii = [r(0), r(1), r(2), r(4)];
    let prof = check_uniqueness(s, &radii, limits).unwrap();
    for (i, entry) in prof.iter().enumerate() {
        push(["theta(0)", "theta(1)", "theta(2)", "theta(4)"][i], entry.theta, o.theta(radii[i]));
    }
    push("rho coherence", check_rho_coherence(s).bound, o.rho_coherence());
    out
}

fn random_path_or_tree(rng: &mut ChaCha8Rng) -> MetricSpace {
    let n = rng.gen_range(1..=6);
    if rng.gen_bool(0.5) {
        hhs_core::metric::path_graph(n - 1)
    } else {
        random_tree(rng, n)
    }
}

/// A valid structure with domains `R ⊐ A, B, C`, `A ⊥ B`, `C` transverse to
/// both, random domain spaces, random projections and random ρ-points.
pub fn random_structure(rng: &mut ChaCha8Rng, n: usize) -> HhsStructure {
    use hhs_core::structure::{Complement, Domain, RhoPoint, StructureParts};
    let total = random_tree(rng, n);
    let names = ["R", "A", "B", "C"];
    let domains: Vec<Domain> = names
        .iter()
        .map(|name| {
            let space = random_path_or_tree(rng);
            let m = space.len();
            Domain {
                name: name.to_string(),
                projection: (0..n).map(|_| rng.gen_range(0..m)).collect(),
                space,
            }
        })
        .collect();
    let sizes: Vec<usize> = domains.iter().map(|d| d.space.len()).collect();
    let (rr, a, b, c) = (DomainId(0), DomainId(1), DomainId(2), DomainId(3));
    let mut rho = Vec::new();
    for (of, target) in [(a, rr), (b, rr), (c, rr), (a, c), (c, a), (b, c), (c, b)] {
        rho.push(RhoPoint {
            of,
            target,
            vertex: rng.gen_range(0..sizes[target.0]),
        });
    }
    HhsStructure::new(StructureParts {
        total_space: total,
        domains,
        nesting: vec![(a, rr), (b, rr), (c, rr)],
        orthogonal: vec![(a, b)],
        rho,
        complements: vec![
            Complement { v: a, w: rr, comp: b },
            Complement { v: b, w: rr, comp: a },
        ],
    })
    .unwrap()
}
