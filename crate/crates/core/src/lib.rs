//! Submodular analysis and optimization.
//!
//! Set functions are wrapped in an [`Oracle`]. On top of it the crate
//! provides the Lovász extension and greedy algorithm, a zoo of submodular
//! functions and combinators, graph cuts with a max-flow fast path,
//! minimization solvers with duality certificates, separable proximal
//! problems on the base polytope and heuristics for maximization and
//! difference-of-submodular minimization.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod lovasz;
pub mod maxds;
pub mod oracle;
pub mod polyhedra;
pub mod prox;
pub mod set;
pub mod sfm;
pub mod zoo;

pub use error::{Error, Result};
pub use lovasz::{greedy, lovasz, BaseVector};
pub use oracle::{CachePolicy, FnSetFunction, Oracle, SetFunction, SfmHandle};
pub use set::{GroundSet, Ordering, Subset};
