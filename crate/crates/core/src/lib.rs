//! Exact computations in the singularity category of a finite-dimensional
//! algebra: syzygy chains, stable Hom, virtual periodicity certificates and
//! the Leavitt path algebra side of the picture.

pub mod algebra;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod field;
pub mod homology;
pub mod leavitt;
pub mod matrix;
pub mod module;
pub mod periodicity;

pub use algebra::{Algebra, AlgebraSpec};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use module::{hom_dim, hom_space, Module, ModuleMap, ModuleSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/stable-hom.md")]
    mod stable_hom {}
    #[doc = include_str!("../../../book/src/singularity-hom.md")]
    mod singularity_hom {}
    #[doc = include_str!("../../../book/src/periodicity.md")]
    mod periodicity {}
    #[doc = include_str!("../../../book/src/probes.md")]
    mod probes {}
    #[doc = include_str!("../../../book/src/leavitt.md")]
    mod leavitt {}
}
