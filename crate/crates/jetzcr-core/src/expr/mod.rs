//! Differential functions on the infinite jet space.
//!
//! A [`DiffFunction`] is a canonical fraction of multivariate polynomials
//! with exact rational coefficients in `x`, `y` and finitely many jet
//! coordinates. Canonical means: numerator and denominator are gcd-reduced,
//! the denominator is a primitive integer polynomial with positive leading
//! coefficient, and terms are sorted in graded lexicographic order. Two
//! values are equal on the jet space if and only if they are structurally
//! equal.

mod ast;
mod display;
mod gcd;
mod parse;
mod poly;

pub use ast::Expr;
pub use parse::{parse_expr, parse_to_ast, ParseError};
pub use poly::{JetCoordinate, Monomial, MultiIndex, Poly, Var};

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use gcd::poly_gcd;

/// An exact rational-coefficient symbolic function of `x`, `y` and finitely
/// many jet coordinates, kept in canonical fraction form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffFunction {
    num: Poly,
    den: Poly,
}

impl DiffFunction {
    /// Canonicalize a fraction of polynomials. Fails only on a structurally
    /// zero denominator.
    pub fn new(num: Poly, den: Poly) -> Option<DiffFunction> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(DiffFunction::zero());
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.checked_div(&g).expect("gcd divides numerator"),
                den.checked_div(&g).expect("gcd divides denominator"),
            )
        };
        let content = den.rational_content();
        if !content.is_one() {
            let inv = BigRational::one() / content;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Some(DiffFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> DiffFunction {
        DiffFunction {
            num: p,
            den: Poly::one(),
        }
    }

    /// Finish a fraction already known to be gcd-reduced: normalize the
    /// denominator to a primitive integer polynomial with positive leading
    /// coefficient.
    fn reduced(num: Poly, den: Poly) -> DiffFunction {
        if num.is_zero() {
            return DiffFunction::zero();
        }
        let content = den.rational_content();
        if content.is_one() {
            DiffFunction { num, den }
        } else {
            let inv = BigRational::one() / content;
            DiffFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Addition of reduced fractions with gcd work bounded by the input
    /// denominators: with `t = gcd(d1, d2)` the only reduction needed on the
    /// result is against `t`.
    fn add_reduced(&self, rhs: &DiffFunction, negate_rhs: bool) -> DiffFunction {
        let n2 = if negate_rhs {
            rhs.num.neg()
        } else {
            rhs.num.clone()
        };
        if self.den.is_one() && rhs.den.is_one() {
            return DiffFunction::from_poly(self.num.add(&n2));
        }
        let t = poly_gcd(&self.den, &rhs.den);
        if t.is_one() {
            let num = self.num.mul(&rhs.den).add(&n2.mul(&self.den));
            return DiffFunction::reduced(num, self.den.mul(&rhs.den));
        }
        let d1 = self.den.checked_div(&t).expect("gcd divides");
        let d2 = rhs.den.checked_div(&t).expect("gcd divides");
        let num = self.num.mul(&d2).add(&n2.mul(&d1));
        let g = poly_gcd(&num, &t);
        if g.is_one() {
            DiffFunction::reduced(num, self.den.mul(&d2))
        } else {
            let num = num.checked_div(&g).expect("gcd divides");
            let den = self
                .den
                .checked_div(&g)
                .expect("gcd divides the denominator")
                .mul(&d2);
            DiffFunction::reduced(num, den)
        }
    }

    /// Multiplication of reduced fractions by cross-cancelling first, so the
    /// result is reduced without a gcd on the expanded products.
    fn mul_reduced(&self, rhs: &DiffFunction) -> DiffFunction {
        if self.is_zero() || rhs.is_zero() {
            return DiffFunction::zero();
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.checked_div(&g1).expect("gcd divides");
        let n2 = rhs.num.checked_div(&g2).expect("gcd divides");
        let d1 = self.den.checked_div(&g2).expect("gcd divides");
        let d2 = rhs.den.checked_div(&g1).expect("gcd divides");
        DiffFunction::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn zero() -> DiffFunction {
        DiffFunction::from_poly(Poly::zero())
    }

    pub fn one() -> DiffFunction {
        DiffFunction::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> DiffFunction {
        DiffFunction::from_poly(Poly::from_int(n))
    }

    pub fn from_rational(r: BigRational) -> DiffFunction {
        DiffFunction::from_poly(Poly::constant(r))
    }

    pub fn var(v: Var) -> DiffFunction {
        DiffFunction::from_poly(Poly::var(v))
    }

    pub fn indep_x() -> DiffFunction {
        DiffFunction::var(Var::X)
    }

    pub fn indep_y() -> DiffFunction {
        DiffFunction::var(Var::Y)
    }

    pub fn coordinate(c: JetCoordinate) -> DiffFunction {
        DiffFunction::var(Var::Jet(c))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if the function is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Division that fails on a structurally zero divisor.
    pub fn checked_div(&self, other: &DiffFunction) -> Option<DiffFunction> {
        if other.is_zero() {
            return None;
        }
        let reciprocal = DiffFunction::reduced(other.den.clone(), other.num.clone());
        Some(self.mul_reduced(&reciprocal))
    }

    pub fn pow(&self, e: u32) -> DiffFunction {
        DiffFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// All jet coordinates the function depends on, sorted.
    pub fn occurring(&self) -> Vec<JetCoordinate> {
        let mut out: Vec<JetCoordinate> = Vec::new();
        for v in self.num.vars().into_iter().chain(self.den.vars()) {
            if let Var::Jet(c) = v {
                if let Err(pos) = out.binary_search(&c) {
                    out.insert(pos, c);
                }
            }
        }
        out
    }

    /// Partial derivative treating every indeterminate (including every jet
    /// coordinate) as independent.
    ///
    /// The quotient rule is assembled from reduced pieces so the gcd work
    /// stays bounded by the (small) input denominator rather than its
    /// powers.
    pub fn partial(&self, v: Var) -> DiffFunction {
        if self.den.is_one() {
            return DiffFunction::from_poly(self.num.partial(v));
        }
        let dden = self.den.partial(v);
        let first = DiffFunction::new(self.num.partial(v), self.den.clone())
            .expect("denominator is nonzero");
        if dden.is_zero() {
            return first;
        }
        let second = DiffFunction::new(dden, self.den.mul(&self.den))
            .expect("denominator is nonzero");
        let scaled = DiffFunction::from_poly(self.num.clone()).mul_reduced(&second);
        first.add_reduced(&scaled, true)
    }

    pub fn partial_jet(&self, c: JetCoordinate) -> DiffFunction {
        self.partial(Var::Jet(c))
    }

    /// Total derivative `D_x = d/dx + sum over occurring coordinates of
    /// `u^k_{I+x} d/du^k_I`.
    pub fn total_x(&self) -> DiffFunction {
        let mut acc = self.partial(Var::X);
        for c in self.occurring() {
            let term = self.partial(Var::Jet(c)) * DiffFunction::coordinate(c.step_x());
            acc = acc + term;
        }
        acc
    }

    /// Total derivative along `y`; see [`DiffFunction::total_x`].
    pub fn total_y(&self) -> DiffFunction {
        let mut acc = self.partial(Var::Y);
        for c in self.occurring() {
            let term = self.partial(Var::Jet(c)) * DiffFunction::coordinate(c.step_y());
            acc = acc + term;
        }
        acc
    }

    /// Iterated total derivative `(D_x)^a (D_y)^b`; the order is immaterial
    /// because total derivatives commute.
    pub fn total_multi(&self, idx: MultiIndex) -> DiffFunction {
        let mut f = self.clone();
        for _ in 0..idx.y {
            f = f.total_y();
        }
        for _ in 0..idx.x {
            f = f.total_x();
        }
        f
    }

    /// Component `E_k(f) = sum_I (-1)^{|I|} D_I (df/du^k_I)` of the Euler
    /// operator, with the sum running over the occurring coordinates.
    pub fn euler_component(&self, dep: u32) -> DiffFunction {
        let mut acc = DiffFunction::zero();
        for c in self.occurring() {
            if c.dep != dep {
                continue;
            }
            let term = self.partial_jet(c).total_multi(c.idx);
            acc = if c.idx.len() % 2 == 0 {
                acc + term
            } else {
                acc - term
            };
        }
        acc
    }

    /// Structured rendering of the function.
    pub fn report(&self) -> ExprReport {
        ExprReport {
            pretty: display::render(self),
            occurring: self.occurring(),
            numerator_degree: self.num.total_degree(),
            denominator_degree: self.den.total_degree(),
        }
    }
}

/// Total divergence `Div(p1, p2) = D_x p1 + D_y p2`.
pub fn divergence(p1: &DiffFunction, p2: &DiffFunction) -> DiffFunction {
    p1.total_x() + p2.total_y()
}

/// Human-readable summary of a [`DiffFunction`]. The pretty form re-parses
/// to a structurally equal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprReport {
    pub pretty: String,
    pub occurring: Vec<JetCoordinate>,
    pub numerator_degree: u64,
    pub denominator_degree: u64,
}

impl Add for DiffFunction {
    type Output = DiffFunction;
    fn add(self, rhs: DiffFunction) -> DiffFunction {
        &self + &rhs
    }
}

impl Add for &DiffFunction {
    type Output = DiffFunction;
    fn add(self, rhs: &DiffFunction) -> DiffFunction {
        self.add_reduced(rhs, false)
    }
}

impl Sub for DiffFunction {
    type Output = DiffFunction;
    fn sub(self, rhs: DiffFunction) -> DiffFunction {
        &self - &rhs
    }
}

impl Sub for &DiffFunction {
    type Output = DiffFunction;
    fn sub(self, rhs: &DiffFunction) -> DiffFunction {
        self.add_reduced(rhs, true)
    }
}

impl Mul for DiffFunction {
    type Output = DiffFunction;
    fn mul(self, rhs: DiffFunction) -> DiffFunction {
        &self * &rhs
    }
}

impl Mul for &DiffFunction {
    type Output = DiffFunction;
    fn mul(self, rhs: &DiffFunction) -> DiffFunction {
        self.mul_reduced(rhs)
    }
}

impl Div for &DiffFunction {
    type Output = DiffFunction;
    /// Exact division; panics on a structurally zero divisor — use
    /// [`DiffFunction::checked_div`] when the divisor is not known nonzero.
    fn div(self, rhs: &DiffFunction) -> DiffFunction {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for DiffFunction {
    type Output = DiffFunction;
    fn neg(self) -> DiffFunction {
        DiffFunction {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Neg for &DiffFunction {
    type Output = DiffFunction;
    fn neg(self) -> DiffFunction {
        DiffFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl core::fmt::Display for DiffFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&display::render(self))
    }
}

/// Scale by an exact rational.
impl Mul<&BigRational> for &DiffFunction {
    type Output = DiffFunction;
    fn mul(self, rhs: &BigRational) -> DiffFunction {
        DiffFunction::new(self.num.scale(rhs), self.den.clone()).expect("denominator is nonzero")
    }
}

impl From<i64> for DiffFunction {
    fn from(n: i64) -> Self {
        DiffFunction::from_int(n)
    }
}

impl From<BigInt> for DiffFunction {
    fn from(n: BigInt) -> Self {
        DiffFunction::from_rational(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn u(x: u32, y: u32) -> DiffFunction {
        DiffFunction::coordinate(JetCoordinate::new(1, x, y))
    }

    fn kdv_f() -> DiffFunction {
        // u_y - u_xxx + 6 u u_x
        u(0, 1) - u(3, 0) + DiffFunction::from_int(6) * u(0, 0) * u(1, 0)
    }

    #[test]
    fn parse_kdv_function() {
        let parsed = parse_expr("u1[0,1] - u1[3,0] + 6*u1*u1[1,0]", 1).unwrap();
        assert_eq!(parsed, kdv_f());
    }

    #[test]
    fn parse_zero() {
        assert_eq!(parse_expr("0", 1).unwrap(), DiffFunction::zero());
        assert!(parse_expr("0", 1).unwrap().is_zero());
    }

    #[test]
    fn parse_cancels_common_factor() {
        let f = parse_expr("(u1^2 - 1)/(u1 - 1)", 1).unwrap();
        assert_eq!(f, parse_expr("u1 + 1", 1).unwrap());
        assert!(f.is_polynomial());
    }

    #[test]
    fn parse_underscore_and_bare_sugar() {
        assert_eq!(parse_expr("u1_xxy", 1).unwrap(), u(2, 1));
        assert_eq!(parse_expr("u_xxy", 1).unwrap(), u(2, 1));
        assert_eq!(parse_expr("u", 1).unwrap(), u(0, 0));
        assert_eq!(parse_expr("u[3,0]", 1).unwrap(), u(3, 0));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_expr("u1 +", 1),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("u1 * w", 1),
            Err(ParseError::UnknownIdentifier { ref name, .. }) if name == "w"
        ));
        assert!(matches!(
            parse_expr("u3", 2),
            Err(ParseError::DependentOutOfRange { dep: 3, .. })
        ));
        assert!(matches!(
            parse_expr("1/(u1 - u1)", 1),
            Err(ParseError::ZeroDenominator { .. })
        ));
        // bare `u` needs a single dependent
        assert!(parse_expr("u", 2).is_err());
        // exponents are nonnegative integer literals
        assert!(parse_expr("u1^(2)", 1).is_err());
        assert!(parse_expr("u1^-2", 1).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let f = parse_expr("6*u1*u1[1,0]", 1).unwrap();
        assert_eq!(
            f.partial_jet(JetCoordinate::new(1, 1, 0)),
            parse_expr("6*u1", 1).unwrap()
        );
        assert_eq!(
            kdv_f().partial_jet(JetCoordinate::new(1, 3, 0)),
            DiffFunction::from_int(-1)
        );
        let g = parse_expr("x^2*u1[0,1]", 1).unwrap();
        assert_eq!(g.partial(Var::X), parse_expr("2*x*u1[0,1]", 1).unwrap());
    }

    #[test]
    fn total_derivatives() {
        assert_eq!(u(0, 0).total_x(), u(1, 0));
        assert_eq!(
            kdv_f().total_x(),
            parse_expr(
                "u1[1,1] - u1[4,0] + 6*u1[1,0]^2 + 6*u1*u1[2,0]",
                1
            )
            .unwrap()
        );
        assert_eq!(DiffFunction::indep_x().total_y(), DiffFunction::zero());
    }

    #[test]
    fn iterated_total_derivatives() {
        assert_eq!(u(0, 0).total_multi(MultiIndex::new(1, 1)), u(1, 1));
        assert_eq!(kdv_f().total_multi(MultiIndex::ZERO), kdv_f());
        let sq = &u(0, 0) * &u(0, 0);
        assert_eq!(
            sq.total_multi(MultiIndex::new(2, 0)),
            parse_expr("2*u1[1,0]^2 + 2*u1*u1[2,0]", 1).unwrap()
        );
    }

    #[test]
    fn euler_component_examples() {
        assert_eq!(kdv_f().euler_component(1), DiffFunction::zero());
        let f = parse_expr("u1[1,0]^2", 1).unwrap();
        assert_eq!(f.euler_component(1), parse_expr("-2*u1[2,0]", 1).unwrap());
        let g = parse_expr("x*y", 1).unwrap();
        assert_eq!(g.euler_component(1), DiffFunction::zero());
    }

    #[test]
    fn divergence_examples() {
        let p1 = parse_expr("3*u1^2 - u1[2,0]", 1).unwrap();
        let p2 = u(0, 0);
        assert_eq!(divergence(&p1, &p2), kdv_f());
        assert_eq!(
            divergence(&DiffFunction::zero(), &DiffFunction::zero()),
            DiffFunction::zero()
        );
        let my = -DiffFunction::indep_y();
        assert_eq!(divergence(&my, &DiffFunction::indep_x()), DiffFunction::zero());
    }

    #[test]
    fn report_round_trips() {
        let f = parse_expr("(u1^2 - 1)/(3*u1[1,0] - y)", 1).unwrap();
        let rep = f.report();
        assert_eq!(parse_expr(&rep.pretty, 1).unwrap(), f);
        assert_eq!(
            rep.occurring,
            alloc::vec![JetCoordinate::new(1, 0, 0), JetCoordinate::new(1, 1, 0)]
        );
        assert_eq!(rep.numerator_degree, 2);
        assert_eq!(rep.denominator_degree, 1);
    }

    #[test]
    fn print_then_parse_is_identity() {
        for text in [
            "u1[0,1] - u1[3,0] + 6*u1*u1[1,0]",
            "1/2*u1 + 3/4",
            "-u1 - x*y^2",
            "(u1 + 1)/(u1 - 1)",
            "(x + y)^3/(u2[0,2] - 5)",
        ] {
            let f = parse_expr(text, 2).unwrap();
            assert_eq!(parse_expr(&f.report().pretty, 2).unwrap(), f);
        }
    }

    #[test]
    fn fraction_normalization_is_canonical() {
        // same function through different routes
        let a = parse_expr("(2*u1 + 2)/(4*u1[1,0])", 1).unwrap();
        let b = parse_expr("(u1 + 1)/(2*u1[1,0])", 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(1/2*u1 + 1/2)/(u1[1,0])");
    }

    #[test]
    fn leibniz_and_quotient_rules() {
        let f = parse_expr("u1*u1[1,0] - x", 1).unwrap();
        let g = parse_expr("u1[0,1] + y", 1).unwrap();
        let prod = &f * &g;
        assert_eq!(
            prod.total_x(),
            &f.total_x() * &g + &f * &g.total_x()
        );
        let quot = f.checked_div(&g).unwrap();
        assert_eq!(
            quot.total_y(),
            (&f.total_y() * &g - &f * &g.total_y())
                .checked_div(&(&g * &g))
                .unwrap()
        );
    }
}
