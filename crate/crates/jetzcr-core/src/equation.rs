//! Orthonomic PDE systems and reduction modulo the differential ideal.
//!
//! An [`EquationSystem`] holds `N` equations in solved form
//! `F^l = u^{k_l}_{I_l} - rhs_l`, with pairwise non-overlapping leading
//! coordinates and right-hand sides free of derivatives of any lead.
//! [`reduce_scalar`] rewrites a function as `normal + sum D_I(F^l) C^I_l`
//! where the normal part is free of all lead-derived coordinates; the
//! coefficient map is returned as a reconstruction certificate. The matrix
//! variant decomposes against a Lie algebra basis first so that the
//! certificate coefficients stay inside the span.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::expr::{DiffFunction, JetCoordinate, MultiIndex, Var};
use crate::liealg::{LieAlgebraError, LieAlgebraSpec, MatrixFunction};

/// Substitution-step guard for the reducers. Validated systems terminate
/// far below this; the bound only catches pathological input.
pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

/// Construction-time validation failures of an equation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    /// A lead or right-hand side mentions a dependent index outside
    /// `1..=dependents`.
    BadDependentIndex { equation: usize, dep: u32 },
    /// Two leads where one is a total derivative of the other (equal leads
    /// included).
    OverlappingLeads { first: usize, second: usize },
    /// A right-hand side contains a coordinate that is a total derivative of
    /// some lead, so substitution would not terminate.
    NonPassive {
        equation: usize,
        coordinate: JetCoordinate,
    },
}

impl core::fmt::Display for SystemError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SystemError::BadDependentIndex { equation, dep } => {
                write!(f, "equation {equation}: dependent index {dep} out of range")
            }
            SystemError::OverlappingLeads { first, second } => write!(
                f,
                "leads of equations {first} and {second} overlap: one is a derivative of the other"
            ),
            SystemError::NonPassive {
                equation,
                coordinate,
            } => write!(
                f,
                "equation {equation} is not passive: right-hand side contains u{}[{},{}], a derivative of a lead",
                coordinate.dep, coordinate.idx.x, coordinate.idx.y
            ),
        }
    }
}

impl core::error::Error for SystemError {}

/// Reduction failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    /// The substitution-step bound was hit.
    DepthExceeded { limit: usize },
    /// The denominator lies in the differential ideal, so the function has
    /// no finite restriction to the equation manifold.
    PoleOnEquation,
    /// Basis decomposition failed for a matrix reduction.
    Algebra(LieAlgebraError),
}

impl core::fmt::Display for ReduceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ReduceError::DepthExceeded { limit } => {
                write!(f, "reduction exceeded {limit} substitution steps")
            }
            ReduceError::PoleOnEquation => {
                write!(f, "denominator vanishes on the equation manifold")
            }
            ReduceError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ReduceError {}

impl From<LieAlgebraError> for ReduceError {
    fn from(e: LieAlgebraError) -> Self {
        ReduceError::Algebra(e)
    }
}

/// One equation in solved form: `lead = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lead: JetCoordinate,
    pub rhs: DiffFunction,
}

/// A validated orthonomic system of `N` equations in `m` dependents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    dependents: u32,
    equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn new(dependents: u32, equations: Vec<Equation>) -> Result<Self, SystemError> {
        for (l, eq) in equations.iter().enumerate() {
            if eq.lead.dep == 0 || eq.lead.dep > dependents {
                return Err(SystemError::BadDependentIndex {
                    equation: l,
                    dep: eq.lead.dep,
                });
            }
            for c in eq.rhs.occurring() {
                if c.dep == 0 || c.dep > dependents {
                    return Err(SystemError::BadDependentIndex {
                        equation: l,
                        dep: c.dep,
                    });
                }
            }
        }
        for i in 0..equations.len() {
            for j in 0..equations.len() {
                if i != j && equations[i].lead.is_derivative_of(&equations[j].lead) {
                    return Err(SystemError::OverlappingLeads {
                        first: j.min(i),
                        second: j.max(i),
                    });
                }
            }
        }
        // Passivity scan: every coordinate of every right-hand side must lie
        // outside the derivative closure of the leads.
        for (l, eq) in equations.iter().enumerate() {
            for c in eq.rhs.occurring() {
                if equations.iter().any(|e| c.is_derivative_of(&e.lead)) {
                    return Err(SystemError::NonPassive {
                        equation: l,
                        coordinate: c,
                    });
                }
            }
        }
        Ok(EquationSystem {
            dependents,
            equations,
        })
    }

    pub fn dependents(&self) -> u32 {
        self.dependents
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// The defining function `F^l = lead_l - rhs_l`.
    pub fn defining_function(&self, l: usize) -> DiffFunction {
        DiffFunction::coordinate(self.equations[l].lead) - self.equations[l].rhs.clone()
    }

    /// If `c` is a derivative of some lead, the (first) equation index and
    /// the derivative multi-index: `c = D_J lead_l`.
    pub fn offending_slot(&self, c: &JetCoordinate) -> Option<(usize, MultiIndex)> {
        self.equations.iter().enumerate().find_map(|(l, eq)| {
            if c.dep == eq.lead.dep {
                c.idx.checked_sub(eq.lead.idx).map(|j| (l, j))
            } else {
                None
            }
        })
    }
}

/// A reduced scalar function together with its reconstruction certificate:
/// `input = normal + sum_{(l, J)} D_J(F^l) * coeffs[(l, J)]`. Equation
/// indices in the certificate are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarIdealDecomposition {
    pub normal: DiffFunction,
    pub coeffs: BTreeMap<(usize, MultiIndex), DiffFunction>,
}

impl ScalarIdealDecomposition {
    /// Evaluate `normal + sum D_J(F^l) * C`, the right-hand side of the
    /// reconstruction identity.
    pub fn reconstruct(&self, sys: &EquationSystem) -> DiffFunction {
        let mut acc = self.normal.clone();
        for ((l, j), c) in &self.coeffs {
            acc = acc + sys.defining_function(*l).total_multi(*j) * c.clone();
        }
        acc
    }
}

/// Matrix analogue of [`ScalarIdealDecomposition`]; every coefficient lies in
/// the span of the algebra the matrix was decomposed against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecomposition {
    pub normal: MatrixFunction,
    pub coeffs: BTreeMap<(usize, MultiIndex), MatrixFunction>,
}

impl IdealDecomposition {
    pub fn reconstruct(&self, sys: &EquationSystem) -> MatrixFunction {
        let mut acc = self.normal.clone();
        for ((l, j), c) in &self.coeffs {
            acc = acc.add(&c.scale(&sys.defining_function(*l).total_multi(*j)));
        }
        acc
    }
}

/// The coordinate eliminated next: the offending coordinate that is greatest
/// under the `(dep, y-count, x-count)` ranking. Ranking the `y`-count above
/// the `x`-count keeps every substitution step aligned with the solved
/// direction of evolution-type systems and reproduces the reference
/// certificates.
fn greatest_offending(
    p: &crate::expr::Poly,
    sys: &EquationSystem,
) -> Option<(JetCoordinate, usize, MultiIndex)> {
    let mut best: Option<(JetCoordinate, usize, MultiIndex)> = None;
    for v in p.vars() {
        let Var::Jet(c) = v else { continue };
        let Some((l, j)) = sys.offending_slot(&c) else {
            continue;
        };
        let rank = (c.dep, c.idx.y, c.idx.x);
        if best.is_none_or(|(b, _, _)| rank > (b.dep, b.idx.y, b.idx.x)) {
            best = Some((c, l, j));
        }
    }
    best
}

/// Reduce a function whose denominator is free of lead-derived coordinates.
/// This is the core substitution loop; the public entry point splits an
/// arbitrary fraction into numerator and denominator reductions first.
fn reduce_clean(
    mut current: DiffFunction,
    sys: &EquationSystem,
    limit: usize,
    steps: &mut usize,
) -> Result<ScalarIdealDecomposition, ReduceError> {
    let mut coeffs: BTreeMap<(usize, MultiIndex), DiffFunction> = BTreeMap::new();
    while let Some((v, l, j)) = greatest_offending(current.numerator(), sys) {
        *steps += 1;
        if *steps > limit {
            return Err(ReduceError::DepthExceeded { limit });
        }
        // v = D_J(rhs_l) + D_J(F^l); write the numerator as a polynomial in v
        // and split off the D_J(F^l) cofactor of the binomial expansion.
        let r = sys.equations[l].rhs.total_multi(j);
        let g = sys.defining_function(l).total_multi(j);
        let by_exp = current.numerator().collect_in(Var::Jet(v));
        let den = DiffFunction::from_poly(current.denominator().clone());

        let max_e = by_exp.first().map(|&(e, _)| e).unwrap_or(0) as usize;
        let mut r_pow = Vec::with_capacity(max_e + 1);
        r_pow.push(DiffFunction::one());
        for _ in 0..max_e {
            let next = r_pow.last().expect("nonempty") * &r;
            r_pow.push(next);
        }
        let mut g_pow = Vec::with_capacity(max_e.max(1));
        g_pow.push(DiffFunction::one());
        for _ in 1..max_e {
            let next = g_pow.last().expect("nonempty") * &g;
            g_pow.push(next);
        }

        let mut value = DiffFunction::zero();
        let mut cofactor = DiffFunction::zero();
        for (e, coeff_poly) in by_exp {
            let c = DiffFunction::from_poly(coeff_poly);
            let e = e as usize;
            value = value + &c * &r_pow[e];
            // ((r+g)^e - r^e)/g = sum_{t=1..e} C(e,t) g^{t-1} r^{e-t}
            for t in 1..=e {
                let b = DiffFunction::from_rational(BigRational::from_integer(binomial(e, t)));
                cofactor = cofactor + &(&(&c * &b) * &g_pow[t - 1]) * &r_pow[e - t];
            }
        }
        let value = value.checked_div(&den).expect("denominator is nonzero");
        let cofactor = cofactor.checked_div(&den).expect("denominator is nonzero");
        if !cofactor.is_zero() {
            match coeffs.entry((l, j)) {
                alloc::collections::btree_map::Entry::Vacant(en) => {
                    en.insert(cofactor);
                }
                alloc::collections::btree_map::Entry::Occupied(mut en) => {
                    let sum = en.get() + &cofactor;
                    if sum.is_zero() {
                        en.remove();
                    } else {
                        *en.get_mut() = sum;
                    }
                }
            }
        }
        current = value;
    }
    Ok(ScalarIdealDecomposition {
        normal: current,
        coeffs,
    })
}

fn binomial(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Reduce a scalar function to normal form modulo the differential ideal,
/// with a reconstruction certificate.
pub fn reduce_scalar(
    f: &DiffFunction,
    sys: &EquationSystem,
    limit: usize,
) -> Result<ScalarIdealDecomposition, ReduceError> {
    let mut steps = 0;
    let num = DiffFunction::from_poly(f.numerator().clone());
    let num_red = reduce_clean(num, sys, limit, &mut steps)?;
    if f.is_polynomial() {
        return Ok(num_red);
    }
    let den = DiffFunction::from_poly(f.denominator().clone());
    let den_red = reduce_clean(den, sys, limit, &mut steps)?;
    if den_red.normal.is_zero() {
        return Err(ReduceError::PoleOnEquation);
    }
    // f = P/Q with P = nP + sum D(F) cP and Q = nQ + sum D(F) cQ gives
    // f - nP/nQ = sum D(F) (cP nQ - nP cQ) / (Q nQ).
    let normal = num_red
        .normal
        .checked_div(&den_red.normal)
        .expect("reduced denominator is nonzero");
    let scale = DiffFunction::from_poly(f.denominator().clone()) * den_red.normal.clone();
    let mut coeffs: BTreeMap<(usize, MultiIndex), DiffFunction> = BTreeMap::new();
    let keys: Vec<_> = num_red
        .coeffs
        .keys()
        .chain(den_red.coeffs.keys())
        .cloned()
        .collect();
    for key in keys {
        if coeffs.contains_key(&key) {
            continue;
        }
        let cp = num_red.coeffs.get(&key).cloned().unwrap_or_else(DiffFunction::zero);
        let cq = den_red.coeffs.get(&key).cloned().unwrap_or_else(DiffFunction::zero);
        let num = cp * den_red.normal.clone() - num_red.normal.clone() * cq;
        let c = num.checked_div(&scale).expect("scale is nonzero");
        if !c.is_zero() {
            coeffs.insert(key, c);
        }
    }
    Ok(ScalarIdealDecomposition { normal, coeffs })
}

/// Reduce a span-valued matrix to normal form. The matrix is decomposed in
/// the basis, each coordinate is reduced, and the results are reassembled,
/// so the certificate coefficients are span-valued by construction.
pub fn reduce_matrix(
    m: &MatrixFunction,
    sys: &EquationSystem,
    algebra: &LieAlgebraSpec,
    limit: usize,
) -> Result<IdealDecomposition, ReduceError> {
    let coords = algebra.decompose(m)?;
    let mut normals = Vec::with_capacity(coords.len());
    let mut certs = Vec::with_capacity(coords.len());
    for f in &coords {
        let red = reduce_scalar(f, sys, limit)?;
        normals.push(red.normal);
        certs.push(red.coeffs);
    }
    let normal = algebra.combine(&normals);
    let mut coeffs: BTreeMap<(usize, MultiIndex), MatrixFunction> = BTreeMap::new();
    let keys: Vec<_> = certs.iter().flat_map(|c| c.keys().cloned()).collect();
    for key in keys {
        if coeffs.contains_key(&key) {
            continue;
        }
        let comps: Vec<DiffFunction> = certs
            .iter()
            .map(|c| c.get(&key).cloned().unwrap_or_else(DiffFunction::zero))
            .collect();
        let mat = algebra.combine(&comps);
        if !mat.is_zero() {
            coeffs.insert(key, mat);
        }
    }
    Ok(IdealDecomposition { normal, coeffs })
}

/// The result of splitting a function along the lead coordinates only:
/// `input = remainder + sum_l F^l * cofactors[l]`, with the remainder free
/// of every lead coordinate (derivatives of leads may remain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadSplit {
    pub remainder: DiffFunction,
    pub cofactors: Vec<DiffFunction>,
}

fn lead_split_poly(
    p: &crate::expr::Poly,
    sys: &EquationSystem,
) -> Result<(DiffFunction, Vec<DiffFunction>), ReduceError> {
    let mut current = DiffFunction::from_poly(p.clone());
    let mut cofactors = alloc::vec![DiffFunction::zero(); sys.len()];
    for l in 0..sys.len() {
        let v = Var::Jet(sys.equations[l].lead);
        if !current.numerator().vars().contains(&v) {
            continue;
        }
        let r = sys.equations[l].rhs.clone();
        let g = sys.defining_function(l);
        let by_exp = current.numerator().collect_in(v);
        let den = DiffFunction::from_poly(current.denominator().clone());
        let mut value = DiffFunction::zero();
        let mut cof = DiffFunction::zero();
        for (e, coeff_poly) in by_exp {
            let c = DiffFunction::from_poly(coeff_poly);
            let e = e as usize;
            value = value + &c * &r.pow(e as u32);
            for t in 1..=e {
                let b = DiffFunction::from_rational(BigRational::from_integer(binomial(e, t)));
                cof = cof + &(&(&c * &b) * &g.pow((t - 1) as u32)) * &r.pow((e - t) as u32);
            }
        }
        let cof = cof.checked_div(&den).expect("denominator is nonzero");
        cofactors[l] = &cofactors[l] + &cof;
        current = value.checked_div(&den).expect("denominator is nonzero");
    }
    Ok((current, cofactors))
}

/// Write `f = remainder + sum_l F^l * cofactors[l]` by substituting the lead
/// coordinates themselves (and nothing else). The remainder vanishes exactly
/// when `f` lies in the algebraic ideal generated by the `F^l`, which is the
/// decision behind characteristic-representative detection.
pub fn lead_split(f: &DiffFunction, sys: &EquationSystem) -> Result<LeadSplit, ReduceError> {
    let (num_rem, num_cof) = lead_split_poly(f.numerator(), sys)?;
    if f.is_polynomial() {
        return Ok(LeadSplit {
            remainder: num_rem,
            cofactors: num_cof,
        });
    }
    let (den_rem, den_cof) = lead_split_poly(f.denominator(), sys)?;
    if den_rem.is_zero() {
        return Err(ReduceError::PoleOnEquation);
    }
    let remainder = num_rem
        .checked_div(&den_rem)
        .expect("remainder denominator is nonzero");
    let scale = DiffFunction::from_poly(f.denominator().clone()) * den_rem.clone();
    let cofactors = num_cof
        .iter()
        .zip(&den_cof)
        .map(|(cp, cq)| {
            let num = cp * &den_rem - &num_rem * cq;
            num.checked_div(&scale).expect("scale is nonzero")
        })
        .collect();
    Ok(LeadSplit {
        remainder,
        cofactors,
    })
}

/// Does `f` lie in the differential ideal, i.e. vanish on the equation
/// manifold?
pub fn in_ideal(f: &DiffFunction, sys: &EquationSystem, limit: usize) -> Result<bool, ReduceError> {
    Ok(reduce_scalar(f, sys, limit)?.normal.is_zero())
}

/// Do two functions agree on the equation manifold?
pub fn equivalent_on_e(
    a: &DiffFunction,
    b: &DiffFunction,
    sys: &EquationSystem,
    limit: usize,
) -> Result<bool, ReduceError> {
    in_ideal(&(a - b), sys, limit)
}

/// Matrix version of [`in_ideal`].
pub fn in_ideal_matrix(
    m: &MatrixFunction,
    sys: &EquationSystem,
    algebra: &LieAlgebraSpec,
    limit: usize,
) -> Result<bool, ReduceError> {
    Ok(reduce_matrix(m, sys, algebra, limit)?.normal.is_zero())
}

/// Matrix version of [`equivalent_on_e`].
pub fn equivalent_on_e_matrix(
    a: &MatrixFunction,
    b: &MatrixFunction,
    sys: &EquationSystem,
    algebra: &LieAlgebraSpec,
    limit: usize,
) -> Result<bool, ReduceError> {
    in_ideal_matrix(&a.sub(b), sys, algebra, limit)
}
