//! Exact structure theory and polynomial-identity invariants for
//! finite-dimensional associative algebras over the rationals.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`], [`sparse`], [`matrix`], [`subspace`], [`linop`] — exact
//!   rational linear algebra with a deterministic reduction rule, so every
//!   basis this crate reports is canonical.
//! * [`algebra`] — algebras presented by structure constants: products,
//!   validation, center, unitization, quotients.
//! * [`structured`] — gradings by finite abelian groups and involutions,
//!   and the operator sets they induce.
//! * [`construct`] — standard families (upper triangular, full matrix,
//!   incidence, group algebras, truncated Grassmann) and combinators
//!   (matrix algebras over a base, tensor products, direct sums, Grassmann
//!   envelopes).
//! * [`structure`] — Jacobson radical, Wedderburn–Malcev complement,
//!   simple component splitting, and a Burnside-style simplicity
//!   certificate, all with verified postconditions.
//! * [`exponent`] — growth exponents computed from admissible sequences of
//!   simple components, plus end-to-end theorem checks.
//! * [`identities`] — multilinear polynomials, codimension sequences,
//!   identity and containment testing, and the tensor-product bound.

pub mod algebra;
pub mod construct;
pub mod exponent;
pub mod identities;
pub mod linop;
pub mod matrix;
pub mod polyutil;
pub mod scalar;
pub mod sparse;
pub mod structure;
pub mod structured;
pub mod subspace;

pub use algebra::Algebra;
pub use scalar::Scalar;
pub use structured::StructuredAlgebra;
pub use subspace::Subspace;
