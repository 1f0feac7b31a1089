use std::collections::BTreeMap;
use std::fmt::Write;

use crate::structure::{DomainId, HhsStructure};

/// Scatter plot of `(x_U, x_V)` over all total-space vertices, in SVG.
///
/// Marker area grows with the number of vertices sharing a coordinate pair.
/// When both `ρ^V_U` and `ρ^U_V` exist, dashed guides mark them; for a
/// transverse pair every point then sits near one of the two guides.
pub fn coordinate_scatter_svg(s: &HhsStructure, u: DomainId, v: DomainId) -> String {
    const SIZE: f64 = 360.0;
    const PAD: f64 = 40.0;
    let (nu, nv) = (s.domain(u).space.len(), s.domain(v).space.len());
    let sx = |c: usize| PAD + (c as f64 + 0.5) * (SIZE - 2.0 * PAD) / nu as f64;
    let sy = |c: usize| SIZE - PAD - (c as f64 + 0.5) * (SIZE - 2.0 * PAD) / nv as f64;

    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in 0..s.total_space().len() {
        *counts.entry((s.coordinate(u, x), s.coordinate(v, x))).or_default() += 1;
    }

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(out, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
    writeln!(
        out,
        "  <line x1=\"{PAD}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n  <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{b}\" stroke=\"black\"/>",
        b = SIZE - PAD,
        r = SIZE - PAD
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        SIZE / 2.0,
        SIZE - 10.0,
        s.name(u)
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"12\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        SIZE / 2.0,
        s.name(v)
    )
    .unwrap();
    if let (Some(rho_vu), Some(rho_uv)) = (s.rho(v, u), s.rho(u, v)) {
        writeln!(
            out,
            "  <line x1=\"{x}\" y1=\"{PAD}\" x2=\"{x}\" y2=\"{b}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            x = sx(rho_vu),
            b = SIZE - PAD
        )
        .unwrap();
        writeln!(
            out,
            "  <line x1=\"{PAD}\" y1=\"{y}\" x2=\"{r}\" y2=\"{y}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            y = sy(rho_uv),
            r = SIZE - PAD
        )
        .unwrap();
    }
    for (&(cu, cv), &count) in &counts {
        writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{:.1}\" fill=\"steelblue\" fill-opacity=\"0.7\"><title>{}={cu} {}={cv} ({count})</title></circle>",
            sx(cu),
            sy(cv),
            3.0 + (count as f64).sqrt(),
            s.name(u),
            s.name(v)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
