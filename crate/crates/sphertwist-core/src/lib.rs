//! Exact homological algebra over finite-dimensional algebras: stable
//! module categories, contraction algebras, relatively spherical objects
//! and their twists.

pub mod algebra;
pub mod exactlin;
pub mod fixtures;
pub mod free;
pub mod frobenius;
pub mod homology;
pub mod modules;
pub mod resolutions;
pub mod spherical;
pub mod twist;

pub use algebra::{Algebra, AlgebraError, SurjectionData};
pub use exactlin::{Field, LinError, Matrix, Scalar};
pub use modules::{Bimodule, Module, ModuleError, ModuleHom};
