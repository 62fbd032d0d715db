//! Shared fixtures and oracles for the integration tests: the KdV system,
//! the sl(2) spec, the reference matrices, seeded random generators, and a
//! naive evaluator that is independent of the canonical representation.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jetzcr_core::equation::{Equation, EquationSystem};
use jetzcr_core::expr::{parse_expr, DiffFunction, Expr, JetCoordinate, MultiIndex, Var};
use jetzcr_core::liealg::{LieAlgebraSpec, MatrixFunction};
use jetzcr_core::zcr::ResidualDecomposition;

/// Deterministic seed for every randomized suite: the ASCII bytes of "JETZ".
pub const SEED: u64 = 0x4A45_545A;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

pub fn f(s: &str) -> DiffFunction {
    parse_expr(s, 1).expect("fixture expression parses")
}

pub fn mat2(rows: [[&str; 2]; 2]) -> MatrixFunction {
    MatrixFunction::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| f(s)).collect())
            .collect(),
    )
    .expect("2x2 fixture")
}

pub fn kdv() -> EquationSystem {
    EquationSystem::new(
        1,
        vec![Equation {
            lead: JetCoordinate::new(1, 0, 1),
            rhs: f("u_xxx - 6*u*u_x"),
        }],
    )
    .expect("KdV system validates")
}

pub fn sl2() -> LieAlgebraSpec {
    LieAlgebraSpec::new(
        2,
        vec![
            mat2([["0", "1"], ["0", "0"]]),
            mat2([["1", "0"], ["0", "-1"]]),
            mat2([["0", "0"], ["1", "0"]]),
        ],
        Some("sl2".to_string()),
    )
    .expect("sl2 spec validates")
}

/// `F = u_y - u_xxx + 6 u u_x` and its hand-expanded derivatives.
pub fn kdv_f() -> DiffFunction {
    f("u_y - u_xxx + 6*u*u_x")
}

pub fn kdv_dxf() -> DiffFunction {
    f("u_xy - u_xxxx + 6*u_x^2 + 6*u*u_xx")
}

pub fn kdv_dyf() -> DiffFunction {
    f("u_yy - u_xxxy + 6*u_x*u_y + 6*u*u_xy")
}

pub fn kdv_dxdyf() -> DiffFunction {
    f("u_xyy - u[4,1] + 6*u_xx*u_y + 12*u_x*u_xy + 6*u*u_xxy")
}

/// The non-characteristic representative of the sl(2) KdV ZCR.
pub fn kdv_a_big() -> MatrixFunction {
    mat2([
        ["6*u*u_xx + 6*u_x^2 - u_xxxx + u_xy", "1"],
        ["u", "-6*u*u_xx - 6*u_x^2 + u_xxxx - u_xy"],
    ])
}

pub fn kdv_b_big() -> MatrixFunction {
    mat2([
        ["6*u*u_x + u_x - u_xxx + u_y", "-2*u"],
        ["-2*u^2 + u_xx", "-6*u*u_x - u_x + u_xxx - u_y"],
    ])
}

/// The short characteristic representative.
pub fn kdv_a_bar() -> MatrixFunction {
    mat2([["0", "1"], ["u", "0"]])
}

pub fn kdv_b_bar() -> MatrixFunction {
    mat2([["u_x", "-2*u"], ["-2*u^2 + u_xx", "-u_x"]])
}

/// The characteristic representative produced by transforming the big pair.
pub fn kdv_a_tilde() -> MatrixFunction {
    mat2([
        ["6*u*u_xx + 6*u_x^2 - u_xxxx + u_xy", "12*u*u_x - 2*u_xxx + 2*u_y + 1"],
        [
            "u - 12*u^2*u_x + 2*u*u_xxx - 2*u*u_y",
            "-6*u*u_xx - 6*u_x^2 + u_xxxx - u_xy",
        ],
    ])
}

pub fn kdv_b_tilde() -> MatrixFunction {
    mat2([
        [
            "6*u*u_xy + 6*u_x*u_y + u_x - u_xxxy + u_yy",
            "-2*u - 4*(6*u*u_x - u_xxx + u_y)*u",
        ],
        [
            "-2*u^2 + u_xx + (6*u*u_x - u_xxx + u_y)*(4*u^2 - 2*u_xx)",
            "-6*u*u_xy - 6*u_x*u_y - u_x + u_xxxy - u_yy",
        ],
    ])
}

/// The reference decomposition of the big pair's residual:
/// `C^{(0,0)}`, `C^{(1,0)}`, `C^{(1,1)}`.
pub fn kdv_c00() -> MatrixFunction {
    mat2([["0", "-2"], ["2*u + 1", "0"]])
}

pub fn kdv_c10() -> MatrixFunction {
    mat2([["-1", "-4*u"], ["4*u^2 - 2*u_xx", "1"]])
}

pub fn kdv_c11() -> MatrixFunction {
    mat2([["1", "0"], ["0", "-1"]])
}

pub fn kdv_reference_decomposition() -> ResidualDecomposition {
    let mut map = ResidualDecomposition::new();
    map.insert((0, MultiIndex::new(0, 0)), kdv_c00());
    map.insert((0, MultiIndex::new(1, 0)), kdv_c10());
    map.insert((0, MultiIndex::new(1, 1)), kdv_c11());
    map
}

/// The characteristic of the short representative.
pub fn kdv_q_bar() -> MatrixFunction {
    mat2([["0", "0"], ["1", "0"]])
}

/// The characteristic of the tilde representative, entry by entry in terms
/// of `F`, `D_x F`, `D_y F`.
pub fn kdv_q_tilde() -> MatrixFunction {
    let ff = kdv_f();
    let dxf = kdv_dxf();
    let dyf = kdv_dyf();
    let q11 = &f("-4*u_xx") * &ff;
    let q12 = &f("-8*u") * &dxf - &f("4") * &dyf;
    let q21 = f("1") - &f("2") * &ff + &f("4*u_xx - 8*u^2") * &dxf - &f("4*u") * &dyf;
    let q22 = &f("4*u_xx") * &ff;
    MatrixFunction::from_rows(vec![vec![q11, q12], vec![q21, q22]]).unwrap()
}

/// The displayed residual of the big pair.
pub fn kdv_big_residual() -> MatrixFunction {
    let ff = kdv_f();
    let dxf = kdv_dxf();
    let dxdyf = kdv_dxdyf();
    let e11 = -&dxf + dxdyf.clone();
    let e12 = &f("-2") * &ff - &f("4*u") * &dxf;
    let e21 = &f("2*u + 1") * &ff + &f("4*u^2 - 2*u_xx") * &dxf;
    let e22 = dxf.clone() - dxdyf;
    MatrixFunction::from_rows(vec![vec![e11, e12], vec![e21, e22]]).unwrap()
}

/// The normal form of the twisted Euler value of the big pair (the
/// obstruction matrix of the failing necessary condition).
pub fn kdv_euler_obstruction() -> MatrixFunction {
    let f1 = "288*u^2*u_x + 20*u*u_xxx + 124*u_x*u_xx - 8*u[5,0]";
    let f2 = "64*u^3 + 152*u*u_xx + 160*u_x^2 - 20*u_xxxx";
    let f3 = "-64*u^4 - 168*u^2*u_xx - 280*u*u_x^2 + 16*u*u_xxxx - 16*u_x*u_xxx - 20*u_xx^2 + 2*u[6,0]";
    let m11 = f(f1);
    MatrixFunction::from_rows(vec![vec![m11.clone(), f(f2)], vec![f(f3), -m11]]).unwrap()
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

/// Small pool of variables for random functions; `max_order` bounds the jet
/// order so reductions stay fast.
pub fn var_pool(max_order: u32) -> Vec<Var> {
    let mut pool = vec![Var::X, Var::Y];
    for x in 0..=max_order {
        for y in 0..=max_order.saturating_sub(x) {
            pool.push(Var::Jet(JetCoordinate::new(1, x, y)));
        }
    }
    pool
}

/// A random small polynomial: up to `terms` terms of total degree at most 2
/// over the pool.
pub fn random_poly(rng: &mut ChaCha8Rng, pool: &[Var], terms: usize) -> DiffFunction {
    let mut acc = DiffFunction::zero();
    let count = rng.gen_range(1..=terms);
    for _ in 0..count {
        let c: i64 = rng.gen_range(-4..=4);
        if c == 0 {
            continue;
        }
        let mut term = DiffFunction::from_int(c);
        let factors = rng.gen_range(0..=2);
        for _ in 0..factors {
            let v = pool[rng.gen_range(0..pool.len())];
            term = term * DiffFunction::var(v);
        }
        acc = acc + term;
    }
    acc
}

/// A random function that is a fraction roughly one time in four.
pub fn random_function(rng: &mut ChaCha8Rng, pool: &[Var], terms: usize) -> DiffFunction {
    let num = random_poly(rng, pool, terms);
    if rng.gen_range(0..4) == 0 {
        let den = random_poly(rng, pool, 2) + DiffFunction::from_int(rng.gen_range(1..=3));
        if !den.is_zero() {
            return num.checked_div(&den).expect("nonzero denominator");
        }
    }
    num
}

/// A random sl(2)-span matrix with small polynomial coordinates.
pub fn random_span_matrix(rng: &mut ChaCha8Rng, spec: &LieAlgebraSpec, pool: &[Var]) -> MatrixFunction {
    let coords: Vec<DiffFunction> = (0..spec.dim())
        .map(|_| random_poly(rng, pool, 2))
        .collect();
    spec.combine(&coords)
}

/// A random invertible gauge matrix with constant nonzero determinant, so
/// that gauge transforms stay inside sl(2).
pub fn random_gauge(rng: &mut ChaCha8Rng, pool: &[Var]) -> MatrixFunction {
    let lower = rng.gen_bool(0.5);
    let off = random_poly(rng, pool, 2);
    let d: i64 = *[1, 2, -1, 3].get(rng.gen_range(0..4)).unwrap();
    let diag = DiffFunction::from_int(d);
    let inv_diag = DiffFunction::from_int(1)
        .checked_div(&diag)
        .expect("nonzero");
    let (r1, r2) = if lower {
        (
            vec![diag, DiffFunction::zero()],
            vec![off, inv_diag],
        )
    } else {
        (
            vec![diag, off],
            vec![DiffFunction::zero(), inv_diag],
        )
    };
    MatrixFunction::from_rows(vec![r1, r2]).expect("2x2")
}

/// A random member of the differential ideal of `sys`, inside the span.
/// Derivative slots stay first-order so downstream reductions remain quick.
pub fn random_ideal_member(
    rng: &mut ChaCha8Rng,
    sys: &EquationSystem,
    spec: &LieAlgebraSpec,
    pool: &[Var],
) -> MatrixFunction {
    let l = rng.gen_range(0..sys.len());
    let j = match rng.gen_range(0..3) {
        0 => MultiIndex::new(0, 0),
        1 => MultiIndex::new(1, 0),
        _ => MultiIndex::new(0, 1),
    };
    let scalar = sys.defining_function(l).total_multi(j);
    let coords: Vec<DiffFunction> = (0..spec.dim())
        .map(|_| random_poly(rng, pool, 1))
        .collect();
    spec.combine(&coords).scale(&scalar)
}

// ---------------------------------------------------------------------------
// Naive evaluation oracle
// ---------------------------------------------------------------------------

pub type Point = BTreeMap<Var, BigRational>;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random evaluation point covering `vars`, with small nonzero rationals.
pub fn random_point(rng: &mut ChaCha8Rng, vars: &[Var]) -> Point {
    vars.iter()
        .map(|&v| {
            let mut n: i64 = rng.gen_range(-9..=9);
            if n == 0 {
                n = 5;
            }
            let d: i64 = rng.gen_range(1..=6);
            (v, rational(n, d))
        })
        .collect()
}

/// Recursive evaluation of the raw parse tree; `None` on division by zero.
/// Deliberately ignorant of the canonical polynomial representation.
pub fn eval_ast(e: &Expr, point: &Point) -> Option<BigRational> {
    Some(match e {
        Expr::Integer(n) => BigRational::from_integer(n.clone()),
        Expr::X => point.get(&Var::X).cloned().unwrap_or_else(BigRational::zero),
        Expr::Y => point.get(&Var::Y).cloned().unwrap_or_else(BigRational::zero),
        Expr::Jet(c) => point
            .get(&Var::Jet(*c))
            .cloned()
            .unwrap_or_else(BigRational::zero),
        Expr::Neg(a) => -eval_ast(a, point)?,
        Expr::Add(a, b) => eval_ast(a, point)? + eval_ast(b, point)?,
        Expr::Sub(a, b) => eval_ast(a, point)? - eval_ast(b, point)?,
        Expr::Mul(a, b) => eval_ast(a, point)? * eval_ast(b, point)?,
        Expr::Div(a, b) => {
            let den = eval_ast(b, point)?;
            if den.is_zero() {
                return None;
            }
            eval_ast(a, point)? / den
        }
        Expr::Pow(a, e) => pow_rational(eval_ast(a, point)?, *e),
    })
}

fn pow_rational(base: BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= base.clone();
    }
    acc
}

/// Evaluate the canonical form by walking its terms directly.
pub fn eval_function(fun: &DiffFunction, point: &Point) -> Option<BigRational> {
    let num = eval_poly_terms(fun, true, point);
    let den = eval_poly_terms(fun, false, point);
    if den.is_zero() {
        return None;
    }
    Some(num / den)
}

fn eval_poly_terms(fun: &DiffFunction, numerator: bool, point: &Point) -> BigRational {
    let poly = if numerator {
        fun.numerator()
    } else {
        fun.denominator()
    };
    let mut acc = BigRational::zero();
    for (mono, coeff) in poly.terms() {
        let mut term = coeff.clone();
        for &(v, e) in mono.factors() {
            let val = point.get(&v).cloned().unwrap_or_else(BigRational::zero);
            term *= pow_rational(val, e);
        }
        acc += term;
    }
    acc
}

/// Check two functions agree at `n` random points, resampling on poles.
pub fn agree_at_random_points(
    rng: &mut ChaCha8Rng,
    a: &DiffFunction,
    b: &DiffFunction,
    n: usize,
) -> bool {
    let mut vars: Vec<Var> = vec![Var::X, Var::Y];
    for c in a.occurring().into_iter().chain(b.occurring()) {
        if !vars.contains(&Var::Jet(c)) {
            vars.push(Var::Jet(c));
        }
    }
    let mut checked = 0;
    let mut attempts = 0;
    while checked < n {
        attempts += 1;
        assert!(attempts < n * 20, "too many poles while sampling");
        let point = random_point(rng, &vars);
        let (Some(va), Some(vb)) = (eval_function(a, &point), eval_function(b, &point)) else {
            continue;
        };
        if va != vb {
            return false;
        }
        checked += 1;
    }
    true
}

