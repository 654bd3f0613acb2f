//! Exact structure-constant workbench for transposed Poisson n-Lie algebras.
//!
//! A finite-dimensional algebra is held as rational structure constants: a
//! commutative associative product ([`ProductTensor`]), skew-symmetric
//! n-ary brackets ([`SkewBracket`]) and linear maps ([`DerivationMatrix`]).
//! The [`axioms`] module decides each defining or derived identity by
//! enumerating basis-index tuples; [`construct`] builds the `(n+1)`-ary
//! bracket `Σ (-1)^{k-1} D(x_k)·[x_1..x̂_k..x_{n+1}]` from an `n`-ary one;
//! [`corpus`] generates instance families and hunts for counterexamples.
//!
//! All arithmetic is exact, so every verdict is an exact equality.

pub mod axioms;
pub mod bracket;
pub mod construct;
pub mod corpus;
pub mod derivation;
pub mod element;
pub mod error;
pub mod linalg;
pub mod product;
pub mod rational;
pub mod system;
pub mod tuples;

pub use axioms::{CheckOptions, CheckReport, Counterexample, IdentityId, Instance, Status};
pub use bracket::{canonicalize, SkewBracket};
pub use derivation::DerivationMatrix;
pub use element::ElementVector;
pub use error::{Error, Result};
pub use product::ProductTensor;
pub use rational::Rational;
pub use system::AlgebraSystem;
