//! Exact computations with group-graded rings and modules.
//!
//! Rings and modules are finite-dimensional over an exact field and graded by
//! a finitely generated abelian group. Along an epimorphism of grading groups
//! they can be coarsened and refined; this crate builds those functors, their
//! canonical natural transformations and adjunctions, graded Hom modules and
//! the comparison map between coarsened Hom and Hom of coarsenings, and
//! injectivity tests for small algebras.
//!
//! Shift convention: `M(g)_d = M_{g+d}`. With it, degree-zero morphisms
//! `M -> N(g)` are exactly the morphisms raising degrees by `g`, and the
//! generator `1` of `R(-g)` sits in degree `g`.

pub mod abgroup;
pub mod coarsen;
pub mod error;
pub mod field;
pub mod graded;
pub mod homfun;
pub mod injective;
pub mod linalg;

pub use error::{Error, Result};
