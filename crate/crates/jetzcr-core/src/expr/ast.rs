//! Raw expression trees produced by the parser, before canonicalization.
//!
//! The tree mirrors the surface grammar. It is exposed so that callers (in
//! particular tests) can evaluate an expression without going through the
//! canonical polynomial representation.

use alloc::boxed::Box;

use num_bigint::BigInt;

use super::poly::JetCoordinate;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Integer(BigInt),
    X,
    Y,
    Jet(JetCoordinate),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}
