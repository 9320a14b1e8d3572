//! Graded rings, modules and degree-zero morphisms.

pub mod calculus;
pub mod hom;
pub mod json;
pub mod module;
pub mod morphism;
pub mod ring;
pub mod submodule;

pub use calculus::{compose, direct_sum, finite_product, image_of, kernel_of, quotient_by, DirectSum, FiniteProduct};
pub use hom::{assemble, disassemble, hom_components, hom_space, GradedView, HomSpace};
pub use module::GradedModule;
pub use morphism::{ComponentwiseMap, GradedMorphism};
pub use ring::{Axiom, BasisElement, GradedRing, Violation};
pub use submodule::GradedSubmodule;
