//! Deterministic generators for the bundled example structures.

mod interval_complex;
mod tree_of_flats;

pub use interval_complex::{
    interval_complex, BlockDecl, ComplementDecl, DomainDecl, GlueSegment, Gluing, IntervalComplexConfig, RhoDecl,
    Rule,
};
pub use tree_of_flats::{tree_of_flats, Flat, FlatLayout, TreeOfFlats, TreeOfFlatsConfig};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::limits::Limits;
use crate::metric::{l1_product, path_graph, MetricSpace};
use crate::structure::HhsStructure;

/// A generator input, tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExampleConfig {
    TreeOfFlats(TreeOfFlatsConfig),
    IntervalComplex(IntervalComplexConfig),
}

impl ExampleConfig {
    pub fn build(&self, limits: &Limits) -> Result<HhsStructure> {
        match self {
            ExampleConfig::TreeOfFlats(cfg) => Ok(tree_of_flats(cfg, limits)?.structure),
            ExampleConfig::IntervalComplex(cfg) => interval_complex(cfg, limits),
        }
    }
}

/// `(side + 1) × (side + 1)` unit grid with the ℓ¹ metric.
pub fn flat_grid(side: usize, limits: &Limits) -> Result<MetricSpace> {
    let p = path_graph(side);
    Ok(l1_product(&p, &p, limits)?.with_label(format!("grid{side}")))
}

/// Bundled configuration files, by file name.
pub mod bundled {
    pub const TOY1_SMALL: &str = include_str!("../../configs/toy1_small.json");
    pub const TOY1_MEDIUM: &str = include_str!("../../configs/toy1_medium.json");
    pub const TOY2: &str = include_str!("../../configs/toy2.json");

    pub const ALL: [(&str, &str); 3] = [
        ("toy1_small.json", TOY1_SMALL),
        ("toy1_medium.json", TOY1_MEDIUM),
        ("toy2.json", TOY2),
    ];

    pub fn get(name: &str) -> Option<&'static str> {
        ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
    }
}
