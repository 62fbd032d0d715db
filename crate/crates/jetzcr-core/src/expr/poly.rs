//! Sparse multivariate polynomials over the exact rationals.
//!
//! The indeterminates are the two independent variables `x`, `y` and the jet
//! coordinates `u<k>[a,b]`. Monomials are compared in graded lexicographic
//! order over the variable order `x < y < u1[0,0] < u1[0,1] < ...`; terms are
//! stored leading-first, so equal polynomials are structurally equal.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Number of `x`- and `y`-derivatives identifying a jet coordinate.
///
/// The multi-index is symmetric, so the pair `(x, y)` of counts determines
/// the coordinate completely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    pub x: u32,
    pub y: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        MultiIndex { x, y }
    }

    /// Total length `|I| = a + b`.
    pub fn len(&self) -> u32 {
        self.x + self.y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Componentwise sum.
    pub fn plus(&self, other: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.x + other.x, self.y + other.y)
    }

    /// Componentwise difference, when `other <= self` componentwise.
    pub fn checked_sub(&self, other: MultiIndex) -> Option<MultiIndex> {
        if other.x <= self.x && other.y <= self.y {
            Some(MultiIndex::new(self.x - other.x, self.y - other.y))
        } else {
            None
        }
    }

}

/// A jet coordinate `u^k_{(a,b)}`: dependent-variable index `dep` (1-based)
/// plus the multi-index of derivative counts.
///
/// The derived `Ord` is lexicographic on `(dep, x, y)`; this is the total
/// order used for canonical monomial ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetCoordinate {
    pub dep: u32,
    pub idx: MultiIndex,
}

impl JetCoordinate {
    pub fn new(dep: u32, x: u32, y: u32) -> Self {
        JetCoordinate {
            dep,
            idx: MultiIndex::new(x, y),
        }
    }

    /// The coordinate obtained by one more `x`-derivative.
    pub fn step_x(&self) -> Self {
        JetCoordinate::new(self.dep, self.idx.x + 1, self.idx.y)
    }

    /// The coordinate obtained by one more `y`-derivative.
    pub fn step_y(&self) -> Self {
        JetCoordinate::new(self.dep, self.idx.x, self.idx.y + 1)
    }

    /// True if `self` is a total derivative of `other`, i.e. `self = D_J other`
    /// for some multi-index `J >= 0` (including `J = 0`).
    pub fn is_derivative_of(&self, other: &JetCoordinate) -> bool {
        self.dep == other.dep && self.idx.x >= other.idx.x && self.idx.y >= other.idx.y
    }
}

/// An indeterminate of the polynomial ring: an independent variable or a jet
/// coordinate. The derived order puts `x < y < ` all jet coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Jet(JetCoordinate),
}

/// A power product of variables. Factors are sorted by ascending variable and
/// carry strictly positive exponents; the empty product is the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    out.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut a = self.0.iter().peekable();
        for &(vb, eb) in &other.0 {
            loop {
                match a.peek() {
                    Some(&&(va, ea)) if va < vb => {
                        out.push((va, ea));
                        a.next();
                    }
                    Some(&&(va, ea)) if va == vb => {
                        if ea < eb {
                            return None;
                        }
                        if ea > eb {
                            out.push((va, ea - eb));
                        }
                        a.next();
                        break;
                    }
                    _ => return None,
                }
            }
        }
        out.extend(a.cloned());
        Some(Monomial(out))
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, k)| (v, k * e)).collect())
    }

    /// Erase a variable from the power product, returning the remaining
    /// monomial and the removed exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(w, k)| {
                if w == v {
                    e = k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then exponent vectors
    /// compared from the largest variable downwards.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let mut a = self.0.iter().rev();
                let mut b = other.0.iter().rev();
                loop {
                    match (a.next(), b.next()) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Greater,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                            Ordering::Less => return Ordering::Less,
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Equal => match ea.cmp(&eb) {
                                Ordering::Equal => continue,
                                ord => return ord,
                            },
                        },
                    }
                }
            })
    }
}

/// A sparse polynomial with exact rational coefficients. Terms are stored in
/// strictly decreasing monomial order with nonzero coefficients, so `Poly` is
/// a canonical form and `==` decides semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Poly {
            terms: vec![(Monomial::var(v), BigRational::one())],
        }
    }

    /// Build from unsorted, possibly repeated terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                alloc::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.reverse();
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.first().is_none_or(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.first().map_or(0, |(m, _)| m.total_degree())
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        self.map_coeffs(|k| k * c)
    }

    pub fn neg(&self) -> Poly {
        self.map_coeffs(|k| -k)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ma, _)), Some(&(mb, _))) => match ma.cmp(mb) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap().clone()),
                    Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.reverse();
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to one indeterminate.
    pub fn partial(&self, v: Var) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.without(v);
            let m2 = if e > 1 {
                rest.mul(&Monomial(vec![(v, e - 1)]))
            } else {
                rest
            };
            terms.push((m2, c * BigRational::from_integer(BigInt::from(e))));
        }
        Poly::from_terms(terms)
    }

    /// All distinct variables occurring with nonzero exponent.
    pub fn vars(&self) -> Vec<Var> {
        let mut set: Vec<Var> = Vec::new();
        for (m, _) in &self.terms {
            for &(v, _) in m.factors() {
                if let Err(pos) = set.binary_search(&v) {
                    set.insert(pos, v);
                }
            }
        }
        set
    }

    /// Rewrite as a univariate polynomial in `v`: the list of
    /// `(exponent, coefficient)` pairs with `v`-free coefficients, in
    /// decreasing exponent order.
    pub fn collect_in(&self, v: Var) -> Vec<(u32, Poly)> {
        let mut by_exp: BTreeMap<u32, Vec<(Monomial, BigRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            by_exp.entry(e).or_default().push((rest, c.clone()));
        }
        by_exp
            .into_iter()
            .rev()
            .map(|(e, ts)| (e, Poly::from_terms(ts)))
            .collect()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .max()
            .unwrap_or(0)
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` when `d` does
    /// not divide `self`.
    pub fn checked_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        let (dm, dc) = d.leading().expect("nonzero");
        let mut rem = self.clone();
        let mut quo: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(dm)?;
            let qc = rc / dc;
            quo.push((qm.clone(), qc.clone()));
            let piece = Poly {
                terms: vec![(qm, qc)],
            };
            rem = rem.sub(&piece.mul(d));
        }
        Some(Poly::from_terms(quo))
    }

    /// The signed rational content: `sign(leading coefficient) *
    /// gcd(coefficient numerators) / lcm(coefficient denominators)`.
    /// Dividing by it leaves a primitive integer polynomial with positive
    /// leading coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        content
    }

    /// `self / rational_content()`: primitive integer coefficients, positive
    /// leading coefficient. Zero stays zero.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.rational_content();
        self.scale(&(BigRational::one() / c))
    }
}
