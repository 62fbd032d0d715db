//! Rendering of canonical functions back to the surface grammar.
//!
//! The output always re-parses to a structurally equal value: `*` is
//! explicit, fractions are fully parenthesized, and jet coordinates use the
//! bracket form except for `u<k>[0,0]`, which prints as `u<k>`.

use alloc::string::String;

use core::fmt::Write;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Monomial, Poly, Var};
use super::DiffFunction;

pub(crate) fn render(f: &DiffFunction) -> String {
    if f.is_zero() {
        return String::from("0");
    }
    if f.denominator().is_one() {
        return render_poly(f.numerator());
    }
    let mut out = String::new();
    let _ = write!(
        out,
        "({})/({})",
        render_poly(f.numerator()),
        render_poly(f.denominator())
    );
    out
}

fn render_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (i, (mono, coeff)) in p.terms().iter().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        push_term(&mut out, mono, &coeff.abs());
    }
    out
}

fn push_term(out: &mut String, mono: &Monomial, coeff: &BigRational) {
    if mono.is_one() {
        push_rational(out, coeff);
        return;
    }
    let mut need_star = false;
    if !coeff.is_one() {
        push_rational(out, coeff);
        need_star = true;
    }
    for &(v, e) in mono.factors() {
        if need_star {
            out.push('*');
        }
        push_var(out, v);
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
        need_star = true;
    }
}

fn push_rational(out: &mut String, c: &BigRational) {
    if c.denom().is_one() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

fn push_var(out: &mut String, v: Var) {
    match v {
        Var::X => out.push('x'),
        Var::Y => out.push('y'),
        Var::Jet(c) => {
            if c.idx.is_empty() {
                let _ = write!(out, "u{}", c.dep);
            } else {
                let _ = write!(out, "u{}[{},{}]", c.dep, c.idx.x, c.idx.y);
            }
        }
    }
}
