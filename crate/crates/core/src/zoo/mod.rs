//! Concrete submodular functions and combinators.

pub mod combinators;
pub mod concave;
pub mod cover;
pub mod logdet;
pub mod matroid;
pub mod spec;

pub use combinators::{
    add_modular, concave_compose, contract, convolve_modular, modular, monotonize, partial_min, restrict, scale,
    sum, symmetrize, AddModular, Modular, Sum, Symmetrize,
};
pub use concave::{cardinality_based, Concave, ConcaveOfModular, ConcaveSpec};
pub use cover::{set_cover, CoverSpec, SetCover};
pub use logdet::{gaussian_mutual_information, log_det, LogDet, PsdMatrix};
pub use matroid::{graphic_matroid_rank, GraphicMatroid};
pub use spec::FunctionSpec;
