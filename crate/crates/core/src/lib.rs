//! Solvers for bipartite boolean quadratic programming:
//! maximize `x^T Q y + c x + d y` over binary vectors `x` and `y`.
//!
//! - [`tabu`]: one-flip tabu search over incrementally maintained gains ([`delta`]).
//! - [`flipfloat`]: coordinate ascent over flip-float moves, where one bit is
//!   flipped and the opposite side is replaced by its best response.
//! - [`hybrid`]: alternation of the two.
//! - [`harness`]: multi-start runs and statistics; [`landscape`]: fitness-distance sampling.
//! - [`model`]: the data model plus an exhaustive oracle for small instances.

pub mod cli;
pub mod delta;
pub mod error;
pub mod flipfloat;
pub mod harness;
pub mod hybrid;
pub mod io;
pub mod landscape;
pub mod model;
pub mod tabu;

pub use error::{Error, Result};
pub use model::{Instance, Solution};
