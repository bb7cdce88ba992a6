//! Exact vertex counting for small-integer polytopes given by linear inequalities.
//!
//! The crate builds polytope encodings of combinatorial problems (perfect
//! matchings, bipartite independent sets, bipartite matchings, perfect
//! 2-matchings), runs the counting reductions between them exactly, and checks
//! every counting identity against independent brute-force oracles.
//!
//! Module map:
//!
//! - [`exactgeom`]: H-polytopes, exact rank, vertex tests and integral enumeration.
//! - [`netmatrix`]: network matrices generated by a (tree, graph) pair, the
//!   class-preserving edits, and a brute-force total unimodularity check.
//! - [`encodings`]: polytope encodings of graph problems.
//! - [`reductions`]: odd-cycle-cover, hexagon-gadget powering and the
//!   transpose-network to 1p1n-SAT reduction.
//! - [`oracles`]: exact brute-force counters used as ground truth.
//! - [`flows`]: network-matrix polytopes as bounded integer flows.
//! - [`sampling`]: self-reduction, exact uniform sampling and the
//!   sampler-driven count estimator.

pub mod budget;
pub mod encodings;
pub mod error;
pub mod exactgeom;
pub mod flows;
pub mod netmatrix;
pub mod oracles;
pub mod reductions;
pub mod sampling;
pub mod text;

pub use budget::Budget;
pub use error::{Error, Result};
