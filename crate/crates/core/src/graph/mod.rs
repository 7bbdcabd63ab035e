//! Max-flow, cut functions and instance generators.

pub mod cut;
pub mod generators;
pub mod io;
pub mod maxflow;

pub use cut::{cut_function, min_cut_minus_modular, CutFunction, WeightedDigraph};
pub use generators::{chain, genrmf_like, grid2d, random_cover, random_digraph, two_moons_logdet, TwoMoons, TwoMoonsConfig};
pub use maxflow::{max_flow, MaxFlowResult, StNetwork};
