//! Multivariate polynomial gcd.
//!
//! The entry point layers cheap strategies before the general machinery:
//! monomial content stripping, constant short-circuits, trial division of
//! the smaller polynomial into the larger, a dense Euclidean fast path for
//! the univariate case, and finally a primitive pseudo-remainder sequence in
//! the shared variable of lowest degree, recursing on the coefficients.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use super::poly::{Monomial, Poly, Var};

/// Greatest common divisor, normalized to a primitive integer polynomial
/// with positive leading coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    // Split off the largest common power product; what remains has at least
    // one term free of each shared variable less often, and single terms
    // become constants.
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let common = monomial_gcd(&ma, &mb);
    let a = a
        .checked_div(&Poly::from_terms([(ma, BigRational::one())]))
        .expect("monomial content divides");
    let b = b
        .checked_div(&Poly::from_terms([(mb, BigRational::one())]))
        .expect("monomial content divides");
    let core = gcd_content_free(&a.primitive_part(), &b.primitive_part());
    core.mul(&Poly::from_terms([(common, BigRational::one())]))
        .primitive_part()
}

/// The largest power product dividing every term.
fn monomial_content(p: &Poly) -> Monomial {
    let mut iter = p.terms().iter();
    let mut acc = iter.next().expect("nonzero polynomial").0.clone();
    for (m, _) in iter {
        acc = monomial_gcd(&acc, m);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn monomial_gcd(a: &Monomial, b: &Monomial) -> Monomial {
    let factors = a
        .factors()
        .iter()
        .filter_map(|&(v, e)| {
            let eb = b.exponent(v);
            if eb == 0 {
                None
            } else {
                Some((v, e.min(eb)))
            }
        })
        .collect::<Vec<_>>();
    let mut m = Monomial::one();
    for (v, e) in factors {
        m = m.mul(&Monomial::var(v).pow(e));
    }
    m
}

/// Gcd of primitive polynomials with trivial monomial content.
fn gcd_content_free(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    let common: Vec<Var> = va.iter().filter(|v| vb.contains(v)).cloned().collect();
    if common.is_empty() {
        return Poly::one();
    }

    // Trial division: the frequent case is that one operand divides the
    // other (derivative and cancellation patterns); a failed attempt exits
    // on the first non-divisible leading term.
    let (small, large) = if a.terms().len() <= b.terms().len() {
        (a, b)
    } else {
        (b, a)
    };
    if large.checked_div(small).is_some() {
        return small.primitive_part();
    }

    if va.len() == 1 && vb.len() == 1 {
        // single shared variable: dense Euclid over the rationals
        return univariate_gcd(a, b, common[0]).primitive_part();
    }

    // Main variable: the shared variable of smallest joint degree keeps the
    // pseudo-remainder sequence short.
    let main = common
        .iter()
        .copied()
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonempty");

    // Evaluation probe: map every other variable to integers and take a
    // univariate gcd. A degree-zero image proves the gcd is free of `main`,
    // reducing the problem to the contents; coprime inputs exit here without
    // ever running a pseudo-remainder sequence.
    for attempt in 0..3u64 {
        let ia = eval_except(a, main, attempt);
        let ib = eval_except(b, main, attempt);
        if ia.degree_in(main) != a.degree_in(main) || ib.degree_in(main) != b.degree_in(main) {
            // a leading coefficient vanished at the point; try another
            continue;
        }
        if univariate_gcd(&ia, &ib, main).degree_in(main) == 0 {
            return poly_gcd(&content_in(a, main), &content_in(b, main));
        }
        break;
    }

    // TODO: replace the PRS fallback with a sparse modular gcd if inputs
    // with large common factors in many variables ever show up; the probe
    // above keeps the coprime case (the bulk of the traffic) away from it.
    let ca = content_in(a, main);
    let cb = content_in(b, main);
    let cont = poly_gcd(&ca, &cb);
    let pa = a.checked_div(&ca).expect("content divides");
    let pb = b.checked_div(&cb).expect("content divides");

    let g = primitive_prs(pa.clone(), pb.clone(), main);
    let g = if g.is_constant() {
        Poly::one()
    } else {
        g.checked_div(&content_in(&g, main))
            .expect("content divides")
    };
    debug_assert!(
        pa.checked_div(&g).is_some() && pb.checked_div(&g).is_some(),
        "primitive PRS result divides both inputs"
    );
    g.mul(&cont).primitive_part()
}

/// Substitute deterministic small integers for every variable except `keep`.
fn eval_except(p: &Poly, keep: Var, attempt: u64) -> Poly {
    let value = |v: Var| -> BigRational {
        let tag = match v {
            Var::X => 2,
            Var::Y => 3,
            Var::Jet(c) => 5 + c.dep as u64 * 7 + c.idx.x as u64 * 13 + c.idx.y as u64 * 31,
        };
        let n = 2 + (tag.wrapping_mul(17).wrapping_add(attempt.wrapping_mul(23))) % 41;
        BigRational::from_integer((n as i64).into())
    };
    let terms = p.terms().iter().map(|(m, c)| {
        let mut coeff = c.clone();
        let mut mono = Monomial::one();
        for &(v, e) in m.factors() {
            if v == keep {
                mono = Monomial::var(v).pow(e);
            } else {
                let base = value(v);
                for _ in 0..e {
                    coeff = &coeff * &base;
                }
            }
        }
        (mono, coeff)
    });
    Poly::from_terms(terms.collect::<Vec<_>>())
}

/// Content with respect to `v`: the gcd of the `v`-coefficients.
fn content_in(p: &Poly, v: Var) -> Poly {
    let mut acc = Poly::zero();
    for (_, coeff) in p.collect_in(v) {
        acc = poly_gcd(&acc, &coeff);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Euclidean gcd for univariate polynomials over the rationals, with monic
/// normalization of every remainder.
fn univariate_gcd(a: &Poly, b: &Poly, v: Var) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !g.is_zero() {
        if g.is_constant() {
            return Poly::one();
        }
        let r = univariate_rem(&f, &g, v);
        f = g;
        g = match r.leading() {
            Some((_, c)) => r.scale(&(BigRational::one() / c.clone())),
            None => Poly::zero(),
        };
    }
    f
}

fn univariate_rem(f: &Poly, g: &Poly, v: Var) -> Poly {
    let dg = g.degree_in(v);
    let (gm, gc) = g.leading().expect("nonzero").clone();
    debug_assert_eq!(gm.exponent(v), dg);
    let mut r = f.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < dg {
            return r;
        }
        let (_, rc) = r.leading().expect("nonzero");
        let scale = rc / &gc;
        let shift = Poly::var(v).pow(dr - dg).scale(&scale);
        r = r.sub(&shift.mul(g));
    }
}

/// Primitive pseudo-remainder sequence in the variable `v`; returns the last
/// nonzero element, an associate of the gcd of the inputs taken primitive
/// with respect to `v`.
fn primitive_prs(f: Poly, g: Poly, v: Var) -> Poly {
    let (mut f, mut g) = if f.degree_in(v) >= g.degree_in(v) {
        (f, g)
    } else {
        (g, f)
    };
    loop {
        if g.is_zero() {
            return f;
        }
        if g.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return g;
        }
        let rc = content_in(&r, v);
        f = g;
        g = r.checked_div(&rc).expect("content divides");
    }
}

/// Pseudo-remainder: repeatedly cancels the leading `v`-term of `f` against
/// `g` after scaling by the leading coefficient of `g`.
fn pseudo_rem(f: &Poly, g: &Poly, v: Var) -> Poly {
    let dg = g.degree_in(v);
    let lg = coeff_of(g, v, dg);
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < dg {
            break;
        }
        let lr = coeff_of(&r, v, dr);
        let shift = Poly::var(v).pow(dr - dg);
        r = r.mul(&lg).sub(&lr.mul(&shift).mul(g));
    }
    r
}

/// Coefficient of `v^e` in `p`.
fn coeff_of(p: &Poly, v: Var, e: u32) -> Poly {
    p.collect_in(v)
        .into_iter()
        .find(|&(k, _)| k == e)
        .map(|(_, c)| c)
        .unwrap_or_else(Poly::zero)
}
