//! Hierarchically hyperbolic structures on finite geodesic graphs.
//!
//! The crate models a total space `X` together with a family of domains, each
//! carrying its own (hyperbolic) graph and a projection from `X`. On top of that
//! data model it provides:
//!
//! - exact metric primitives (all-pairs distances, geodesics, closest-point
//!   projections, four-point and thin-triangle hyperbolicity constants),
//! - validation of the combinatorial relation axioms (nesting, orthogonality,
//!   transversality, orthogonal complements, ρ-points),
//! - exhaustive sweeps computing the smallest constant witnessing each metric
//!   axiom on a finite instance,
//! - evaluation and quasi-isometry fitting of the distance formula, and hulls,
//! - generators for the tree of flats and for glued interval complexes.
//!
//! All arithmetic is exact. With the default `parallel` feature the large sweeps
//! run on rayon; results are identical with and without it.

pub mod axioms;
pub mod distance;
pub mod error;
pub mod generators;
pub mod io;
pub mod limits;
pub mod metric;
mod par;
pub mod structure;

pub use error::{Error, Result};
pub use limits::Limits;
pub use metric::{MetricSpace, Vertex};
pub use structure::{DomainId, HhsStructure, Relation};

/// Exact lengths. Every distance and every reported constant uses this type.
pub type Rational = num_rational::Ratio<i64>;
