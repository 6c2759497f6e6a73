//! Exact construction and verification of skew-gentle algebras.

pub mod algebra;
pub mod error;
pub mod field;
pub mod linalg;
pub mod module;
pub mod morita;
pub mod pipeline;
pub mod corpus;
pub mod engine;
pub mod gentle;
pub mod homology;
pub mod quiver;
pub mod resolution;
pub mod split;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use quiver::{dsl, Arrow, Path, QuiverBuilder, QuiverSpec, RelationExpr, Term};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quivers.md")]
    mod quivers {}
    #[doc = include_str!("../../../book/src/gentle.md")]
    mod gentle {}
    #[doc = include_str!("../../../book/src/split.md")]
    mod split {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/corners.md")]
    mod corners {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
