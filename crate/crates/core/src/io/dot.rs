use std::collections::BTreeSet;
use std::fmt::Write;

use crate::metric::{MetricSpace, Vertex};
use crate::structure::HhsStructure;

/// Graphviz rendering; vertices in `highlight` are filled.
pub fn space_to_dot(space: &MetricSpace, highlight: &[Vertex]) -> String {
    let marked: BTreeSet<Vertex> = highlight.iter().copied().collect();
    let mut out = String::new();
    let name = space.label().unwrap_or("space").replace('"', "'");
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    for v in 0..space.len() {
        if marked.contains(&v) {
            writeln!(out, "  {v} [style=filled, fillcolor=orange];").unwrap();
        } else {
            writeln!(out, "  {v};").unwrap();
        }
    }
    for e in space.edges() {
        if *e.weight.numer() == 1 && *e.weight.denom() == 1 {
            writeln!(out, "  {} -- {};", e.u, e.v).unwrap();
        } else {
            writeln!(out, "  {} -- {} [label=\"{}\"];", e.u, e.v, e.weight).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// The total space, with each vertex labelled by its coordinate vector.
pub fn structure_to_dot(s: &HhsStructure, highlight: &[Vertex]) -> String {
    let marked: BTreeSet<Vertex> = highlight.iter().copied().collect();
    let space = s.total_space();
    let mut out = String::from("graph structure {\n  node [shape=box, fontsize=9];\n");
    for v in 0..space.len() {
        let coords: Vec<String> = s
            .domain_ids()
            .map(|d| format!("{}={}", s.name(d), s.coordinate(d, v)))
            .collect();
        let fill = if marked.contains(&v) { ", style=filled, fillcolor=orange" } else { "" };
        writeln!(out, "  {v} [label=\"{v}\\n{}\"{fill}];", coords.join(" ")).unwrap();
    }
    for e in space.edges() {
        writeln!(out, "  {} -- {};", e.u, e.v).unwrap();
    }
    out.push_str("}\n");
    out
}
