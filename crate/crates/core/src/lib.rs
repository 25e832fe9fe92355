//! Exact differential calculi on finitely presented noncommutative algebras.
//!
//! A calculus is assembled from a presentation, a family of automorphisms
//! `φ_s` and weights `a_s`: the basis 1-forms obey `θ^s a = φ_s(a) θ^s` and
//! `d` is the graded commutator with `ϑ = Σ a_s θ^s`. Coefficients live in
//! the field of rational functions over the deformation parameters.

pub mod algebra;
pub mod calculus;
pub mod coeff;
pub mod dsl;
pub mod geometry;
pub mod models;
pub mod morphism;
pub mod sample;

pub use algebra::{Algebra, Element, GeneratorTable, Word};
pub use calculus::{Calculus, Form, Orientation};
pub use coeff::{Coeff, CoeffError, ParameterSet};
pub use dsl::{DslError, ParseError};
pub use geometry::{Connection, FormExtension, Geometry, TensorForm};
pub use models::{run_suite, CheckResult, Model, Report, ReportFormat, Status};
pub use morphism::{Endomorphism, TwistedDerivation};

#[cfg(test)]
mod fixtures;
