//! Shared helpers for the acceptance suite: fixture loading, reference
//! values, and seeded random generators.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jetzcr::Problem;
use jetzcr_core::equation::EquationSystem;
use jetzcr_core::expr::{parse_expr, DiffFunction, JetCoordinate, MultiIndex, Var};
use jetzcr_core::liealg::{LieAlgebraSpec, MatrixFunction};
use jetzcr_core::zcr::ResidualDecomposition;

/// Deterministic seed for the randomized suites: the ASCII bytes of "JETZ".
pub const SEED: u64 = 0x4A45_545A;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> Problem {
    jetzcr::load_problem(&fixture_path(name)).expect("fixture loads")
}

pub fn f(s: &str) -> DiffFunction {
    parse_expr(s, 1).expect("reference expression parses")
}

pub fn mat2(rows: [[&str; 2]; 2]) -> MatrixFunction {
    MatrixFunction::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| f(s)).collect())
            .collect(),
    )
    .expect("2x2 reference matrix")
}

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

/// The displayed residual of the non-characteristic pair.
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

pub fn kdv_q_bar() -> MatrixFunction {
    mat2([["0", "0"], ["1", "0"]])
}

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

/// The reference decomposition of the big pair's residual.
pub fn kdv_reference_decomposition() -> ResidualDecomposition {
    let mut map = ResidualDecomposition::new();
    map.insert((0, MultiIndex::new(0, 0)), mat2([["0", "-2"], ["2*u + 1", "0"]]));
    map.insert(
        (0, MultiIndex::new(1, 0)),
        mat2([["-1", "-4*u"], ["4*u^2 - 2*u_xx", "1"]]),
    );
    map.insert((0, MultiIndex::new(1, 1)), mat2([["1", "0"], ["0", "-1"]]));
    map
}

/// The stated twisted-Euler obstruction for the non-characteristic pair.
pub fn kdv_euler_obstruction() -> MatrixFunction {
    let f1 = "288*u^2*u_x + 20*u*u_xxx + 124*u_x*u_xx - 8*u[5,0]";
    let f2 = "64*u^3 + 152*u*u_xx + 160*u_x^2 - 20*u_xxxx";
    let f3 = "-64*u^4 - 168*u^2*u_xx - 280*u*u_x^2 + 16*u*u_xxxx - 16*u_x*u_xxx - 20*u_xx^2 + 2*u[6,0]";
    let m11 = f(f1);
    MatrixFunction::from_rows(vec![vec![m11.clone(), f(f2)], vec![f(f3), -m11]]).unwrap()
}

// --- random generation -------------------------------------------------------

pub fn var_pool(max_order: u32) -> Vec<Var> {
    let mut pool = vec![Var::X, Var::Y];
    for x in 0..=max_order {
        for y in 0..=max_order.saturating_sub(x) {
            pool.push(Var::Jet(JetCoordinate::new(1, x, y)));
        }
    }
    pool
}

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

pub fn random_span_matrix(
    rng: &mut ChaCha8Rng,
    spec: &LieAlgebraSpec,
    pool: &[Var],
) -> MatrixFunction {
    let coords: Vec<DiffFunction> = (0..spec.dim())
        .map(|_| random_poly(rng, pool, 2))
        .collect();
    spec.combine(&coords)
}

pub fn random_gauge(rng: &mut ChaCha8Rng, pool: &[Var]) -> MatrixFunction {
    let lower = rng.gen_bool(0.5);
    let off = random_poly(rng, pool, 2);
    let d: i64 = *[1, 2, -1, 3].get(rng.gen_range(0..4)).unwrap();
    let diag = DiffFunction::from_int(d);
    let inv_diag = DiffFunction::from_int(1).checked_div(&diag).expect("nonzero");
    let (r1, r2) = if lower {
        (vec![diag, DiffFunction::zero()], vec![off, inv_diag])
    } else {
        (vec![diag, off], vec![DiffFunction::zero(), inv_diag])
    };
    MatrixFunction::from_rows(vec![r1, r2]).expect("2x2")
}

pub fn diagonal_abelian() -> LieAlgebraSpec {
    LieAlgebraSpec::new(
        2,
        vec![
            mat2([["1", "0"], ["0", "0"]]),
            mat2([["0", "0"], ["0", "1"]]),
        ],
        None,
    )
    .unwrap()
}

pub fn zcr_pair<'a>(
    problem: &'a Problem,
) -> jetzcr_core::zcr::ZcrPair<'a> {
    let (a, b) = problem.zcr.as_ref().expect("fixture carries a pair");
    jetzcr_core::zcr::ZcrPair::new(&problem.algebra, &problem.system, a.clone(), b.clone())
        .expect("fixture pair is span-valued")
}

pub fn kdv_system(problem: &Problem) -> &EquationSystem {
    &problem.system
}
