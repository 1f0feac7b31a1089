//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{compare_constants, r, random_structure, random_tree};
use hhs_core::axioms::{full_report, ReportConfig};
use hhs_core::distance::{df_sum, fit_qi_constants, PairSet};
use hhs_core::generators::{bundled, flat_grid, tree_of_flats, ExampleConfig, TreeOfFlatsConfig};
use hhs_core::io::{parse_structure, structure_to_json, to_stable_string};
use hhs_core::metric::{four_point_delta, thin_triangle_delta_canonical};
use hhs_core::structure::{AxiomFamily, DomainId, StructureParts, Violation};
use hhs_core::{HhsStructure, Limits, Rational, Relation};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every comparison below is between exact rationals.
const TOLERANCE: i64 = 0;

const TREE_COUNT: usize = 50;
const TREE_MAX_VERTICES: usize = 200;
const TREE_SEED: u64 = 20_240_601;
const GRID_SIDES: [usize; 3] = [2, 4, 6];
const GRID_FULL_SWEEP_MAX: usize = 4;
const TOY1_CONFIGS: [(usize, usize); 3] = [(1, 1), (2, 1), (1, 2)];
const BGI_THRESHOLD: i64 = 1;
const ORACLE_MAX_VERTICES: usize = 200;
const ORACLE_RANDOM_INSTANCES: usize = 25;
const ORACLE_SEED: u64 = 77;
const MUTATION_FAMILIES_REQUIRED: usize = 6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn within(a: Rational, b: Rational) -> bool {
    (a - b).abs() <= Rational::from_integer(TOLERANCE)
}

fn toy1(n: usize, d: usize) -> HhsStructure {
    tree_of_flats(&TreeOfFlatsConfig::new(n, d), &Limits::default())
        .expect("tree of flats builds")
        .structure
}

fn bundled_structure(name: &str) -> HhsStructure {
    let cfg: ExampleConfig = serde_json::from_str(bundled::get(name).unwrap()).unwrap();
    cfg.build(&Limits::default()).unwrap()
}

fn tree_hyperbolicity() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(TREE_SEED);
    let mut largest = 0;
    for i in 0..TREE_COUNT {
        let n = rng.gen_range(1..=TREE_MAX_VERTICES);
        largest = largest.max(n);
        let tree = random_tree(&mut rng, n);
        let four = four_point_delta(&tree, &limits).unwrap().delta;
        let thin = thin_triangle_delta_canonical(&tree, &limits).unwrap().delta;
        if !within(four, r(0)) || !within(thin, r(0)) {
            return fail(format!("tree #{i} (n = {n}): four-point {four}, thin-triangle {thin}"));
        }
    }
    pass(format!("{TREE_COUNT} trees up to {largest} vertices, both deltas 0"))
}

/// `δ` of the four grid corners from the ℓ¹ formula alone.
fn corner_delta(side: usize) -> Rational {
    let m = side as i64;
    let corners = [(0, 0), (0, m), (m, 0), (m, m)];
    let d = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0).abs() + (a.1 - b.1).abs();
    let [x, y, z, w] = corners;
    let mut sums = [d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)];
    sums.sort();
    Rational::new(sums[2] - sums[1], 2)
}

fn flat_non_hyperbolicity() -> Outcome {
    let limits = Limits::default();
    let mut notes = Vec::new();
    for side in GRID_SIDES {
        let grid = flat_grid(side, &limits).unwrap();
        let target = Rational::from_integer(side as i64);
        let corner = corner_delta(side);
        // Corner ids in the (side+1)² numbering.
        let m = side + 1;
        let ids = [0, side, side * m, m * m - 1];
        for (a, &p) in ids.iter().enumerate() {
            for &q in &ids[a + 1..] {
                let expected = (p / m).abs_diff(q / m) + (p % m).abs_diff(q % m);
                if grid.dist(p, q) != Rational::from_integer(expected as i64) {
                    return fail(format!("grid {side}: corner distance d({p},{q}) is off"));
                }
            }
        }
        if corner < target {
            return fail(format!("grid {side}: corner quadruple gives {corner} < {side}"));
        }
        if side <= GRID_FULL_SWEEP_MAX {
            let swept = four_point_delta(&grid, &limits).unwrap().delta;
            if swept < target || swept < corner {
                return fail(format!("grid {side}: full sweep gives {swept}"));
            }
            notes.push(format!("N={side}: sweep {swept}, corners {corner}"));
        } else {
            notes.push(format!("N={side}: corners {corner}"));
        }
    }
    pass(notes.join("; "))
}

fn exact_distance_formula() -> Outcome {
    let limits = Limits::default();
    let mut notes = Vec::new();
    for (n, d) in TOY1_CONFIGS {
        let s = toy1(n, d);
        let space = s.total_space();
        let size = space.len();
        for x in 0..size {
            for y in 0..size {
                if !within(space.dist(x, y), df_sum(&s, x, y)) {
                    return fail(format!("({n},{d}): d({x},{y}) = {} but the sum is {}", space.dist(x, y), df_sum(&s, x, y)));
                }
            }
        }
        let fit = fit_qi_constants(&s, &PairSet::All, r(0), &limits).unwrap();
        if !within(fit.k, r(1)) || !within(fit.c, r(0)) {
            return fail(format!("({n},{d}): fit K = {}, C = {}", fit.k, fit.c));
        }
        notes.push(format!("({n},{d}): {size}² pairs, K=1 C=0"));
    }
    pass(notes.join("; "))
}

fn toy1_axiom_constants() -> Outcome {
    let config = ReportConfig {
        limits: Limits::default(),
        bgi_thresholds: vec![r(BGI_THRESHOLD)],
        uniqueness_radii: vec![r(0)],
    };
    let mut rows = Vec::new();
    for (n, d) in TOY1_CONFIGS {
        let s = toy1(n, d);
        let report = full_report(&s, &config).unwrap();
        let realization = match &report.realization {
            Ok(real) => real,
            Err(e) => return fail(format!("({n},{d}): realization failed: {e}")),
        };
        let row = [
            report.consistency.kappa,
            report.bgi_bound().unwrap(),
            realization.eps,
            realization.rho_eps,
            report.theta(r(0)).unwrap(),
        ];
        if !row.iter().all(|&c| within(c, r(0))) {
            return fail(format!("({n},{d}): κ, B, ε, ε_ρ, θ(0) = {row:?}"));
        }
        rows.push(row);
    }
    if rows.windows(2).any(|w| w[0] != w[1]) {
        return fail(format!("constants differ across configs: {rows:?}"));
    }
    pass("κ = B(E=1) = ε = ε_ρ = θ(0) = 0 on all three configs")
}

fn oracle_equivalence() -> Outcome {
    let limits = Limits::default();
    let mut instances: Vec<(String, HhsStructure)> = TOY1_CONFIGS
        .iter()
        .map(|&(n, d)| (format!("toy1({n},{d})"), toy1(n, d)))
        .collect();
    let toy2 = bundled_structure("toy2.json");
    for target in ["R", "B", "O", "Y"] {
        let t = toy2.id(target).unwrap();
        let far = toy2.domain(t).space.len() - 1;
        let mut parts = toy2.parts().clone();
        for p in parts.rho.iter_mut().filter(|p| p.target == t) {
            p.vertex = far - p.vertex;
        }
        instances.push((format!("toy2, rho in {target} reflected"), HhsStructure::new(parts).unwrap()));
    }
    instances.push(("toy2".into(), toy2));
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    for i in 0..ORACLE_RANDOM_INSTANCES {
        let n = rng.gen_range(2..=40);
        instances.push((format!("random #{i}"), random_structure(&mut rng, n)));
    }
    let mut checked = 0;
    let mut nonzero = 0;
    for (label, s) in &instances {
        if s.total_space().len() > ORACLE_MAX_VERTICES {
            return fail(format!("{label} exceeds {ORACLE_MAX_VERTICES} vertices"));
        }
        for c in compare_constants(s, &limits) {
            if !within(c.fast, c.naive) {
                return fail(format!("{label}: {} is {} but the oracle gives {}", c.name, c.fast, c.naive));
            }
            checked += 1;
            if c.fast != r(0) {
                nonzero += 1;
            }
        }
    }
    pass(format!("{checked} constants on {} instances agree ({nonzero} nonzero)", instances.len()))
}

type Mutation = (&'static str, AxiomFamily, &'static str, Vec<&'static str>, fn(&mut StructureParts, &HhsStructure));

fn id(s: &HhsStructure, name: &str) -> DomainId {
    s.id(name).unwrap()
}

fn relation_mutations() -> Outcome {
    let mutations: Vec<Mutation> = vec![
        ("toy2.json", AxiomFamily::PartialOrder, "declare R ⊏ G", vec!["R", "G"], |p, s| {
            p.nesting.push((id(s, "R"), id(s, "G")))
        }),
        ("toy1_small.json", AxiomFamily::UniqueMaximal, "drop F0_x ⊏ T", vec!["F0_x"], |p, s| {
            let e = (id(s, "F0_x"), id(s, "T"));
            p.nesting.retain(|&x| x != e)
        }),
        ("toy2.json", AxiomFamily::OrthogonalityAntiReflexive, "declare O ⊥ O", vec!["O"], |p, s| {
            p.orthogonal.push((id(s, "O"), id(s, "O")))
        }),
        ("toy1_small.json", AxiomFamily::NestedOrthogonalConflict, "declare F1_y ⊥ T", vec!["F1_y", "T"], |p, s| {
            p.orthogonal.push((id(s, "F1_y"), id(s, "T")))
        }),
        ("toy2.json", AxiomFamily::Inheritance, "drop G ⊥ O", vec!["G", "O", "B"], |p, s| {
            let (g, o) = (id(s, "G"), id(s, "O"));
            p.orthogonal.retain(|&x| x != (g, o) && x != (o, g))
        }),
        ("toy2.json", AxiomFamily::Complement, "drop the complement of O in B", vec!["O", "B"], |p, s| {
            let (o, b) = (id(s, "O"), id(s, "B"));
            p.complements.retain(|c| !(c.v == o && c.w == b))
        }),
        ("toy1_small.json", AxiomFamily::RhoDomain, "drop ρ of F2_x in T", vec!["F2_x", "T"], |p, s| {
            let (f, t) = (id(s, "F2_x"), id(s, "T"));
            p.rho.retain(|r| !(r.of == f && r.target == t))
        }),
    ];
    for name in ["toy1_small.json", "toy2.json"] {
        let v = bundled_structure(name).validate_relation_axioms();
        if !v.is_empty() {
            return fail(format!("unmutated {name} has {} violations, first: {}", v.len(), v[0]));
        }
    }
    let mut detected = std::collections::BTreeSet::new();
    for (file, family, what, named, apply) in &mutations {
        let s = bundled_structure(file);
        let mut parts = s.parts().clone();
        apply(&mut parts, &s);
        let violations: Vec<Violation> = HhsStructure::from_parts(parts).unwrap().validate_relation_axioms();
        let hit = violations
            .iter()
            .any(|v| v.family() == *family && named.iter().all(|n| v.domains().contains(n)));
        if !hit {
            return fail(format!("{file}: `{what}` not reported as {family:?} naming {named:?}: {violations:?}"));
        }
        detected.insert(*family);
    }
    if detected.len() < MUTATION_FAMILIES_REQUIRED {
        return fail(format!("only {} families detected", detected.len()));
    }
    pass(format!("{} families detected by targeted mutations; unmutated structures clean", detected.len()))
}

fn toy2_relation_table() -> Outcome {
    let s = bundled_structure("toy2.json");
    let n = |name: &str| s.id(name).unwrap();
    let mut problems = Vec::new();
    if s.maximal_domains() != vec![n("R")] {
        problems.push("R is not the unique maximal domain".to_string());
    }
    let listed_nested = [("O", "B"), ("P", "B")];
    let listed_orthogonal = [("G", "B"), ("O", "P")];
    for row in s.classify_pairs() {
        let (a, b) = (s.name(row.a), s.name(row.b));
        let is = |pairs: &[(&str, &str)]| pairs.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
        let expected = if a == "R" || b == "R" {
            let child = if a == "R" { row.b } else { row.a };
            Relation::Nested { child, parent: n("R") }
        } else if is(&listed_nested) {
            let (child, parent) = listed_nested.iter().find(|&&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)).unwrap();
            Relation::Nested { child: n(child), parent: n(parent) }
        } else if is(&listed_orthogonal) {
            Relation::Orthogonal
        } else {
            Relation::Transverse
        };
        if row.relation != expected {
            let found = match row.relation {
                Relation::Nested { child, parent } => format!("{} ⊏ {}", s.name(child), s.name(parent)),
                Relation::Orthogonal => format!("{a} ⊥ {b}"),
                other => format!("({a},{b}) {other:?}"),
            };
            problems.push(found);
        }
    }
    if problems.is_empty() {
        return pass("table matches");
    }
    // The literal table as a structure, to show why the bundled one differs.
    let mut parts = s.parts().clone();
    let keep_nested = |c: DomainId, p: DomainId| p == n("R") || listed_nested.iter().any(|&(x, y)| (n(x), n(y)) == (c, p));
    parts.nesting.retain(|&(c, p)| keep_nested(c, p));
    parts.orthogonal.retain(|&(a, b)| listed_orthogonal.iter().any(|&(x, y)| (n(x), n(y)) == (a, b) || (n(y), n(x)) == (a, b)));
    let literal = HhsStructure::from_parts(parts).unwrap().validate_relation_axioms();
    let inheritance: Vec<String> = literal
        .iter()
        .filter(|v| v.family() == AxiomFamily::Inheritance)
        .map(|v| v.to_string())
        .collect();
    fail(format!(
        "bundled toy2 has {} pairs that are not transverse: {}; the literal table itself breaks the relation axioms ({} violations, inheritance: {})",
        problems.len(),
        problems.join(", "),
        literal.len(),
        inheritance.join("; ")
    ))
}

fn round_trip() -> Outcome {
    let limits = Limits::default();
    for (name, text) in bundled::ALL {
        let cfg: ExampleConfig = serde_json::from_str(text).unwrap();
        let built = cfg.build(&limits).unwrap();
        let exported = to_stable_string(structure_to_json(&built));
        let value: serde_json::Value = serde_json::from_str(&exported).unwrap();
        let parsed = parse_structure(&value, None, &limits).unwrap();
        if parsed != built {
            return fail(format!("{name}: parsed structure differs from the built one"));
        }
        let again = to_stable_string(structure_to_json(&parsed));
        if again != exported {
            return fail(format!("{name}: re-export is not byte-identical"));
        }
        let cfg_text = to_stable_string(serde_json::to_value(&cfg).unwrap());
        let cfg_back: ExampleConfig = serde_json::from_str(&cfg_text).unwrap();
        if cfg_back != cfg || to_stable_string(serde_json::to_value(&cfg_back).unwrap()) != cfg_text {
            return fail(format!("{name}: config does not round-trip"));
        }
    }
    pass(format!("{} bundled configs byte-identical after export/parse/export", bundled::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Duration, fn() -> Outcome); 8] = [
        ("AC1", "tree hyperbolicity", Duration::from_secs(30), tree_hyperbolicity),
        ("AC2", "flat non-hyperbolicity", Duration::from_secs(120), flat_non_hyperbolicity),
        ("AC3", "exact distance formula", Duration::from_secs(3 * 60), exact_distance_formula),
        ("AC4", "toy1 axiom constants", Duration::from_secs(3 * 120), toy1_axiom_constants),
        ("AC5", "oracle equivalence", Duration::from_secs(300), oracle_equivalence),
        ("AC6", "relation-axiom mutations", Duration::from_secs(10), relation_mutations),
        ("AC7", "toy2 relation table", Duration::from_secs(1), toy2_relation_table),
        ("AC8", "round-trip stability", Duration::from_secs(1), round_trip),
    ];
    let mut failed = 0;
    for (tag, title, budget, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > budget {
            outcome = fail(format!("took {elapsed:.2?}, over the {budget:?} budget; {}", outcome.detail));
        }
        let mark = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{mark}] {tag} {title} ({elapsed:.2?}): {}", outcome.detail);
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
