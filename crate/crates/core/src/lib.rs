//! Exact computational algebra for generalized metric n-Leibniz algebras.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! arithmetic, so axiom checks, kernels and round trips are decided by
//! equality rather than tolerance. The crate is organised as follows:
//!
//! - [`rational`], [`matrix`]: exact scalars, dense matrices, and the
//!   decompositions (rref, nullspace, solve, signature) used everywhere else.
//! - [`tensor`], [`model`]: symmetric tensors, the three algebraic structures
//!   (n-Leibniz algebras, metric Lie algebras, Lie triple data) and their
//!   multilinear evaluation.
//! - [`json`]: the interchange format for algebra and triple-data files.
//! - [`axioms`]: decision procedures for every axiom, each returning a
//!   [`report::Report`] with a witness on failure.
//! - [`correspondence`]: both directions of the algebra ↔ triple-data
//!   correspondence, the Leibniz bracket on tensor space and its bilinear
//!   form.
//! - [`morphisms`]: derivation-space solving, automorphism checking, and the
//!   transfer of both across the correspondence.
//!
//! Exhaustive basis-tuple scans run in parallel via rayon when the `parallel`
//! feature (enabled by default) is active; disabling it yields a fully
//! sequential build with identical results. See [`scan`].

pub mod axioms;
pub mod correspondence;
pub mod json;
pub mod matrix;
pub mod model;
pub mod morphisms;
pub mod rational;
pub mod report;
pub mod scan;
pub mod tensor;

pub use matrix::RatMatrix;
pub use model::{LieTripleData, LinearOperator, MetricLieAlgebra, NLeibnizAlgebra};
pub use rational::Rational;
pub use report::Report;
pub use tensor::SymTensor;
