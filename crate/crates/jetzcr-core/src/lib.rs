//! Exact symbolic engine for differential calculus on the infinite jet space
//! of a PDE system in two independent variables.
//!
//! The engine works over the field of rational functions in `x`, `y` and
//! finitely many jet coordinates `u<k>[a,b]`, with exact rational
//! coefficients. On top of that kernel it provides:
//!
//! * [`expr`] — canonical differential functions: parsing, printing,
//!   partial and total derivatives, the Euler operator and total divergence;
//! * [`liealg`] — matrix-valued differential functions, matrix Lie algebra
//!   specifications, brackets, twisted total derivatives, conjugation;
//! * [`equation`] — orthonomic PDE systems and reduction to normal form
//!   modulo the differential ideal, with reconstruction certificates;
//! * [`zcr`] — zero-curvature representations: Maurer–Cartan residuals,
//!   characteristic elements and characteristic forms, gauge
//!   transformations, twisted Euler operators, and the conservation-law
//!   specialization.
//!
//! Everything is exact; there is no floating point anywhere. All values are
//! immutable after construction and all operations are pure functions.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod equation;
pub mod expr;
pub mod liealg;
pub mod zcr;

pub use expr::{DiffFunction, JetCoordinate, MultiIndex, Var};
pub use liealg::{LieAlgebraSpec, MatrixFunction};
