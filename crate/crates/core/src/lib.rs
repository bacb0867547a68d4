//! Classification of multiplicity-free fusion categories up to gauge and
//! monoidal equivalence.
//!
//! A based ring with multiplicity-free structure constants determines a set of
//! F-symbol variables subject to the pentagon and unit equations. Gauge
//! transformations rescale F-symbols along fusion triples; the quotient is
//! described exactly by the group of gauge-invariant rational monomials, which
//! this crate computes through exact integer linear algebra (row Hermite
//! normal form with a unimodular transform). Evaluating a basis of invariant
//! monomials on concrete pentagon solutions decides gauge equivalence;
//! combining with fusion-ring automorphisms decides monoidal equivalence.
//!
//! The pipeline, bottom to top:
//!
//! * [`ring`] — based rings, validation, fusion triples, automorphism groups;
//! * [`symbols`] — F-symbol variables, pentagon equations, solutions, gauge
//!   and automorphism actions;
//! * [`lattice`] — exact integer matrices, HNF with transform, kernel bases;
//! * [`invariants`] — invariant-monomial bases, evaluation, localization,
//!   rationality checks;
//! * [`classify`] — gauge/monoidal equivalence tests, zero-set orbits,
//!   classification reports;
//! * [`fixtures`] — built-in example rings and solutions.
//!
//! All numeric work is exact: values are complex numbers with rational real
//! and imaginary parts ([`numeric::ComplexValue`]), and tolerances enter only
//! through explicit comparison policies.

pub mod classify;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod invariants;
pub mod lattice;
pub mod numeric;
pub mod ring;
pub mod symbols;

pub use config::Config;
pub use error::{Error, Result};
