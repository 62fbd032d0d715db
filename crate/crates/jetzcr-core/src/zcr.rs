//! Zero-curvature representations and their characteristic calculus.
//!
//! A [`ZcrPair`] is a candidate pair `(A, B)` of span-valued matrices over a
//! fixed equation system and matrix Lie algebra. On top of the Maurer–Cartan
//! residual `D_y A - D_x B + [A, B]` the module provides:
//!
//! * ZCR verification with a reconstruction certificate;
//! * characteristic elements `K_l = sum_I (-1)^{|I|} \hat D_I C^I_l`;
//! * the transform of an arbitrary representative into characteristic form,
//!   with the explicit correction terms `A_1`, `B_1` and characteristic `Q`;
//! * gauge transformations `A^H = D_x(H) H^{-1} + H A H^{-1}`;
//! * the gauge-theoretic Euler operator and the necessary condition it
//!   induces on characteristic representatives;
//! * the scalar (`g = R`) specialization: conserved currents, generating
//!   functions, cosymmetries, and the current-shift action.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::equation::{
    lead_split, reduce_matrix, reduce_scalar, EquationSystem, IdealDecomposition, ReduceError,
    DEFAULT_DEPTH_LIMIT,
};
use crate::expr::{divergence, DiffFunction, MultiIndex};
use crate::liealg::{
    bracket, twisted_power, LieAlgebraError, LieAlgebraSpec, MatrixFunction, TwistOrder,
};

/// Failures of the ZCR-level operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZcrError {
    /// Span, size, or singularity failures from the matrix layer.
    Algebra(LieAlgebraError),
    /// Reduction failures from the equation layer.
    Reduce(ReduceError),
    /// The pair does not satisfy the Maurer–Cartan condition on the equation
    /// manifold.
    NotAZcr,
    /// A supplied decomposition fails its reconstruction identity.
    BadDecomposition,
    /// Gauge transform outputs fall outside the span of the algebra.
    GaugeLeavesAlgebra,
    /// The operation requires an abelian algebra.
    NonAbelianAlgebra,
    /// The current is not conserved on the equation manifold.
    NotConserved,
    /// An N-tuple argument with the wrong number of components.
    WrongComponentCount { expected: usize, found: usize },
    /// A verified internal identity failed; indicates an engine bug.
    InternalIdentityFailure,
}

impl core::fmt::Display for ZcrError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ZcrError::Algebra(e) => write!(f, "{e}"),
            ZcrError::Reduce(e) => write!(f, "{e}"),
            ZcrError::NotAZcr => write!(f, "pair does not satisfy the Maurer-Cartan condition"),
            ZcrError::BadDecomposition => {
                write!(f, "supplied decomposition fails the reconstruction identity")
            }
            ZcrError::GaugeLeavesAlgebra => write!(
                f,
                "gauge transform leaves the algebra span; the gauge matrix is incompatible"
            ),
            ZcrError::NonAbelianAlgebra => write!(f, "algebra is not abelian"),
            ZcrError::NotConserved => write!(f, "current is not conserved"),
            ZcrError::WrongComponentCount { expected, found } => {
                write!(f, "expected {expected} components, found {found}")
            }
            ZcrError::InternalIdentityFailure => {
                write!(f, "internal identity verification failed")
            }
        }
    }
}

impl core::error::Error for ZcrError {}

impl From<LieAlgebraError> for ZcrError {
    fn from(e: LieAlgebraError) -> Self {
        ZcrError::Algebra(e)
    }
}

impl From<ReduceError> for ZcrError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Algebra(e) => ZcrError::Algebra(e),
            other => ZcrError::Reduce(other),
        }
    }
}

/// A decomposition certificate for a residual: the map
/// `(l, I) -> C^I_l` with `residual = sum D_I(F^l) C^I_l`. Equation indices
/// are zero-based.
pub type ResidualDecomposition = BTreeMap<(usize, MultiIndex), MatrixFunction>;

/// A candidate zero-curvature pair, validated to be span-valued.
#[derive(Debug, Clone)]
pub struct ZcrPair<'a> {
    algebra: &'a LieAlgebraSpec,
    system: &'a EquationSystem,
    a: MatrixFunction,
    b: MatrixFunction,
    depth_limit: usize,
}

impl<'a> ZcrPair<'a> {
    /// Wrap a candidate pair; both matrices must decompose in the algebra
    /// basis. Whether the pair actually satisfies the Maurer–Cartan
    /// condition is decided by [`ZcrPair::is_zcr`].
    pub fn new(
        algebra: &'a LieAlgebraSpec,
        system: &'a EquationSystem,
        a: MatrixFunction,
        b: MatrixFunction,
    ) -> Result<Self, ZcrError> {
        algebra.decompose(&a)?;
        algebra.decompose(&b)?;
        Ok(ZcrPair {
            algebra,
            system,
            a,
            b,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        })
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = limit;
        self
    }

    pub fn a(&self) -> &MatrixFunction {
        &self.a
    }

    pub fn b(&self) -> &MatrixFunction {
        &self.b
    }

    pub fn algebra(&self) -> &'a LieAlgebraSpec {
        self.algebra
    }

    pub fn system(&self) -> &'a EquationSystem {
        self.system
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    /// The Maurer–Cartan residual `D_y A - D_x B + [A, B]`, exact on the
    /// whole jet space.
    pub fn mc_residual(&self) -> MatrixFunction {
        self.a
            .total_y()
            .sub(&self.b.total_x())
            .add(&bracket(&self.a, &self.b))
    }

    /// Decide the Maurer–Cartan condition on the equation manifold. The
    /// returned decomposition certifies the verdict either way: its normal
    /// part is the obstruction and vanishes exactly for a ZCR.
    pub fn is_zcr(&self) -> Result<(bool, IdealDecomposition), ZcrError> {
        let red = reduce_matrix(
            &self.mc_residual(),
            self.system,
            self.algebra,
            self.depth_limit,
        )?;
        Ok((red.normal.is_zero(), red))
    }

    /// The certificate used by the characteristic operations: the supplied
    /// one (re-verified by reconstruction) or the reducer's.
    fn residual_certificate(
        &self,
        provided: Option<&ResidualDecomposition>,
    ) -> Result<ResidualDecomposition, ZcrError> {
        let residual = self.mc_residual();
        match provided {
            Some(map) => {
                let mut acc = MatrixFunction::zero(self.algebra.size());
                for ((l, j), c) in map {
                    if *l >= self.system.len() {
                        return Err(ZcrError::BadDecomposition);
                    }
                    self.algebra.decompose(c)?;
                    acc = acc.add(&c.scale(&self.system.defining_function(*l).total_multi(*j)));
                }
                if acc == residual {
                    Ok(map.clone())
                } else {
                    Err(ZcrError::BadDecomposition)
                }
            }
            None => {
                let red =
                    reduce_matrix(&residual, self.system, self.algebra, self.depth_limit)?;
                if !red.normal.is_zero() {
                    return Err(ZcrError::NotAZcr);
                }
                Ok(red.coeffs)
            }
        }
    }

    /// The characteristic element: per equation,
    /// `K_l = sum_I (-1)^{|I|} (\hat D_x^A)^a (\hat D_y^B)^b C^I_l`, reduced
    /// to normal form. Independent of the decomposition choice.
    pub fn characteristic_element(
        &self,
        decomposition: Option<&ResidualDecomposition>,
    ) -> Result<CharacteristicElement, ZcrError> {
        let cert = self.residual_certificate(decomposition)?;
        let n = self.algebra.size();
        let mut raw = vec![MatrixFunction::zero(n); self.system.len()];
        for ((l, j), c) in &cert {
            let term = twisted_power(c, &self.a, &self.b, *j, TwistOrder::XThenY);
            raw[*l] = if j.len() % 2 == 0 {
                raw[*l].add(&term)
            } else {
                raw[*l].sub(&term)
            };
        }
        let mut components = Vec::with_capacity(raw.len());
        for m in &raw {
            let red = reduce_matrix(m, self.system, self.algebra, self.depth_limit)?;
            components.push(red.normal);
        }
        Ok(CharacteristicElement { components })
    }

    /// Transform the pair into characteristic form. With the decomposition
    /// coefficients `C^{(a,b)}_l` this builds
    ///
    /// ```text
    /// B1  = sum_l sum_{a>=1} sum_{j=1..a} sum_{b>=0}
    ///         (-1)^{j-1} (D_x^{a-j} D_y^b F^l) (\hat D_x^A)^{j-1} C^{(a,b)}_l
    /// A1  = sum_l sum_{b>=1} sum_{j=1..b} sum_{a>=0}
    ///         (-1)^{a+j-1} (D_y^{b-j} F^l) (\hat D_y^{B+B1})^{j-1} (\hat D_x^A)^a C^{(a,b)}_l
    /// Q_l = sum_{a,b>=0} (-1)^{a+b} (\hat D_y^{B+B1})^b (\hat D_x^A)^a C^{(a,b)}_l
    /// ```
    ///
    /// and returns `(A - A1, B + B1)` with characteristic `Q`. The identity
    /// `D_y(A~) - D_x(B~) + [A~, B~] = sum_l F^l Q_l` is verified
    /// structurally before returning.
    pub fn characteristic_form(
        &self,
        decomposition: Option<&ResidualDecomposition>,
    ) -> Result<CharacteristicForm, ZcrError> {
        let cert = self.residual_certificate(decomposition)?;
        let n = self.algebra.size();

        let mut b1 = MatrixFunction::zero(n);
        for ((l, idx), c) in &cert {
            if idx.x == 0 {
                continue;
            }
            for j in 1..=idx.x {
                let scalar = self
                    .system
                    .defining_function(*l)
                    .total_multi(MultiIndex::new(idx.x - j, idx.y));
                let twisted = twisted_power(
                    c,
                    &self.a,
                    &self.b,
                    MultiIndex::new(j - 1, 0),
                    TwistOrder::YThenX,
                );
                let term = twisted.scale(&scalar);
                b1 = if (j - 1) % 2 == 0 {
                    b1.add(&term)
                } else {
                    b1.sub(&term)
                };
            }
        }
        let s = self.b.add(&b1);

        let mut a1 = MatrixFunction::zero(n);
        for ((l, idx), c) in &cert {
            if idx.y == 0 {
                continue;
            }
            for j in 1..=idx.y {
                let scalar = self
                    .system
                    .defining_function(*l)
                    .total_multi(MultiIndex::new(0, idx.y - j));
                let mut twisted = twisted_power(
                    c,
                    &self.a,
                    &s,
                    MultiIndex::new(idx.x, 0),
                    TwistOrder::YThenX,
                );
                twisted = twisted_power(
                    &twisted,
                    &self.a,
                    &s,
                    MultiIndex::new(0, j - 1),
                    TwistOrder::YThenX,
                );
                let term = twisted.scale(&scalar);
                a1 = if (idx.x + j - 1) % 2 == 0 {
                    a1.add(&term)
                } else {
                    a1.sub(&term)
                };
            }
        }

        let mut q = vec![MatrixFunction::zero(n); self.system.len()];
        for ((l, idx), c) in &cert {
            let term = twisted_power(c, &self.a, &s, *idx, TwistOrder::YThenX);
            q[*l] = if idx.len() % 2 == 0 {
                q[*l].add(&term)
            } else {
                q[*l].sub(&term)
            };
        }

        let a_tilde = self.a.sub(&a1);
        let b_tilde = s;

        let transformed = ZcrPair {
            algebra: self.algebra,
            system: self.system,
            a: a_tilde,
            b: b_tilde,
            depth_limit: self.depth_limit,
        };
        let mut rhs = MatrixFunction::zero(n);
        for (l, ql) in q.iter().enumerate() {
            rhs = rhs.add(&ql.scale(&self.system.defining_function(l)));
        }
        if transformed.mc_residual() != rhs {
            return Err(ZcrError::InternalIdentityFailure);
        }
        Ok(CharacteristicForm {
            a_tilde: transformed.a,
            b_tilde: transformed.b,
            a1,
            b1,
            q,
        })
    }

    /// Is the pair itself a characteristic representative, i.e. does its
    /// residual equal `sum_l F^l Q_l` identically on the jet space? Returns
    /// the characteristic `Q` on success.
    ///
    /// The decision splits the residual along the lead coordinates alone:
    /// the remainder vanishes exactly when the residual lies in the
    /// algebraic ideal of the `F^l`, and the accumulated cofactors are the
    /// (for one equation: the unique) characteristic.
    pub fn is_characteristic_representative(
        &self,
    ) -> Result<Option<Vec<MatrixFunction>>, ZcrError> {
        let residual = self.mc_residual();
        let coords = self.algebra.decompose(&residual)?;
        let n = self.algebra.size();
        let mut remainders = Vec::with_capacity(coords.len());
        let mut cofactors = Vec::with_capacity(coords.len());
        for f in &coords {
            let split = lead_split(f, self.system)?;
            remainders.push(split.remainder);
            cofactors.push(split.cofactors);
        }
        if remainders.iter().any(|r| !r.is_zero()) {
            return Ok(None);
        }
        let mut q = Vec::with_capacity(self.system.len());
        for l in 0..self.system.len() {
            let comps: Vec<DiffFunction> =
                cofactors.iter().map(|c| c[l].clone()).collect();
            let mut m = MatrixFunction::zero(n);
            for (f, t) in comps.iter().zip(self.algebra.basis()) {
                m = m.add(&t.scale(f));
            }
            q.push(m);
        }
        Ok(Some(q))
    }

    /// Gauge transform by an invertible matrix `H`:
    /// `A^H = D_x(H) H^{-1} + H A H^{-1}` and likewise for `B` with `D_y`.
    /// Fails when the outputs leave the span of the algebra.
    pub fn gauge_transform(&self, h: &MatrixFunction) -> Result<ZcrPair<'a>, ZcrError> {
        let hinv = h.inverse()?;
        let a = h.total_x().mul(&hinv).add(&h.mul(&self.a).mul(&hinv));
        let b = h.total_y().mul(&hinv).add(&h.mul(&self.b).mul(&hinv));
        if self.algebra.decompose(&a).is_err() || self.algebra.decompose(&b).is_err() {
            return Err(ZcrError::GaugeLeavesAlgebra);
        }
        Ok(ZcrPair {
            algebra: self.algebra,
            system: self.system,
            a,
            b,
            depth_limit: self.depth_limit,
        })
    }

    /// The gauge-theoretic Euler operator
    /// `\hat E^{A,B}_k(M) = sum_I (-1)^{|I|} (\hat D_x^A)^a (\hat D_y^B)^b (dM/du^k_I)`,
    /// exact on the whole jet space.
    pub fn twisted_euler(&self, m: &MatrixFunction, dep: u32) -> Result<MatrixFunction, ZcrError> {
        self.algebra.decompose(m)?;
        let mut occurring: Vec<crate::expr::JetCoordinate> = Vec::new();
        for e in m.entries() {
            for c in e.occurring() {
                if c.dep == dep {
                    if let Err(pos) = occurring.binary_search(&c) {
                        occurring.insert(pos, c);
                    }
                }
            }
        }
        let mut acc = MatrixFunction::zero(self.algebra.size());
        for c in occurring {
            let term = twisted_power(
                &m.partial_jet(c),
                &self.a,
                &self.b,
                c.idx,
                TwistOrder::XThenY,
            );
            acc = if c.idx.len() % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        Ok(acc)
    }

    /// The necessary condition on characteristic representatives: for each
    /// dependent `k`, the twisted Euler operator applied to the residual must
    /// vanish on the equation manifold. The report keeps the reduced normal
    /// forms, which are the obstructions when the check fails.
    pub fn check_gauge_euler_condition(&self) -> Result<GaugeEulerReport, ZcrError> {
        let residual = self.mc_residual();
        let mut passes = Vec::new();
        let mut normal_forms = Vec::new();
        for dep in 1..=self.system.dependents() {
            let value = self.twisted_euler(&residual, dep)?;
            let red = reduce_matrix(&value, self.system, self.algebra, self.depth_limit)?;
            passes.push(red.normal.is_zero());
            normal_forms.push(red.normal);
        }
        Ok(GaugeEulerReport {
            passes,
            normal_forms,
        })
    }

    /// The classical necessary condition on a characteristic element `chi`:
    /// for each dependent `k`,
    /// `sum_{l,I} (-1)^{|I|} \hat D_I (dF^l/du^k_I * chi_l)` must vanish on
    /// the equation manifold. Components are reduced to normal form first.
    pub fn char_element_nec_check(&self, chi: &[MatrixFunction]) -> Result<Vec<bool>, ZcrError> {
        if chi.len() != self.system.len() {
            return Err(ZcrError::WrongComponentCount {
                expected: self.system.len(),
                found: chi.len(),
            });
        }
        let (ok, _) = self.is_zcr()?;
        if !ok {
            return Err(ZcrError::NotAZcr);
        }
        let mut reduced = Vec::with_capacity(chi.len());
        for c in chi {
            let red = reduce_matrix(c, self.system, self.algebra, self.depth_limit)?;
            reduced.push(red.normal);
        }
        let mut verdicts = Vec::new();
        for dep in 1..=self.system.dependents() {
            let mut acc = MatrixFunction::zero(self.algebra.size());
            for (l, chi_l) in reduced.iter().enumerate() {
                let f_l = self.system.defining_function(l);
                for c in f_l.occurring() {
                    if c.dep != dep {
                        continue;
                    }
                    let scalar = f_l.partial_jet(c);
                    let term = twisted_power(
                        &chi_l.scale(&scalar),
                        &self.a,
                        &self.b,
                        c.idx,
                        TwistOrder::XThenY,
                    );
                    acc = if c.idx.len() % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
            }
            let red = reduce_matrix(&acc, self.system, self.algebra, self.depth_limit)?;
            verdicts.push(red.normal.is_zero());
        }
        Ok(verdicts)
    }
}

/// The per-equation characteristic element, in reduced normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicElement {
    pub components: Vec<MatrixFunction>,
}

/// The output of [`ZcrPair::characteristic_form`]: the transformed pair, the
/// correction terms, and the characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicForm {
    pub a_tilde: MatrixFunction,
    pub b_tilde: MatrixFunction,
    pub a1: MatrixFunction,
    pub b1: MatrixFunction,
    pub q: Vec<MatrixFunction>,
}

/// Per-dependent verdicts of the gauge-theoretic Euler condition, with the
/// reduced normal forms as obstructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeEulerReport {
    pub passes: Vec<bool>,
    pub normal_forms: Vec<MatrixFunction>,
}

impl GaugeEulerReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|&p| p)
    }
}

/// Cosymmetry condition for an N-tuple of scalar functions: for each
/// dependent `k`, `sum_{l,I} (-1)^{|I|} D_I (dF^l/du^k_I * psi_l)` must
/// vanish on the equation manifold.
pub fn cosymmetry_check(
    psi: &[DiffFunction],
    sys: &EquationSystem,
    limit: usize,
) -> Result<Vec<bool>, ZcrError> {
    if psi.len() != sys.len() {
        return Err(ZcrError::WrongComponentCount {
            expected: sys.len(),
            found: psi.len(),
        });
    }
    let mut verdicts = Vec::new();
    for dep in 1..=sys.dependents() {
        let mut acc = DiffFunction::zero();
        for (l, psi_l) in psi.iter().enumerate() {
            let f_l = sys.defining_function(l);
            for c in f_l.occurring() {
                if c.dep != dep {
                    continue;
                }
                let term = (f_l.partial_jet(c) * psi_l.clone()).total_multi(c.idx);
                acc = if c.idx.len() % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                };
            }
        }
        verdicts.push(reduce_scalar(&acc, sys, limit)?.normal.is_zero());
    }
    Ok(verdicts)
}

/// The abelian characteristic condition: with `g` abelian, `Q` extends a
/// characteristic element exactly when `E^g_k(sum_l F^l Q_l)` vanishes
/// identically on the whole jet space, for every dependent `k`. No ideal
/// reduction is involved.
pub fn abelian_characteristic_condition(
    q: &[MatrixFunction],
    sys: &EquationSystem,
    algebra: &LieAlgebraSpec,
) -> Result<Vec<bool>, ZcrError> {
    if !algebra.is_abelian() {
        return Err(ZcrError::NonAbelianAlgebra);
    }
    if q.len() != sys.len() {
        return Err(ZcrError::WrongComponentCount {
            expected: sys.len(),
            found: q.len(),
        });
    }
    let mut sum = MatrixFunction::zero(algebra.size());
    for (l, ql) in q.iter().enumerate() {
        algebra.decompose(ql)?;
        sum = sum.add(&ql.scale(&sys.defining_function(l)));
    }
    Ok((1..=sys.dependents())
        .map(|dep| sum.euler_component(dep).is_zero())
        .collect())
}

/// The generating function of a conserved current `(p1, p2)`: decompose
/// `Div P = sum D_I(F^l) C^I_l` and return the reduced
/// `psi_l = sum_I (-1)^{|I|} D_I(C^I_l)`.
pub fn generating_function(
    p1: &DiffFunction,
    p2: &DiffFunction,
    sys: &EquationSystem,
    limit: usize,
) -> Result<Vec<DiffFunction>, ZcrError> {
    let red = reduce_scalar(&divergence(p1, p2), sys, limit)?;
    if !red.normal.is_zero() {
        return Err(ZcrError::NotConserved);
    }
    let mut psi = vec![DiffFunction::zero(); sys.len()];
    for ((l, j), c) in &red.coeffs {
        let term = c.total_multi(*j);
        psi[*l] = if j.len() % 2 == 0 {
            &psi[*l] + &term
        } else {
            &psi[*l] - &term
        };
    }
    psi.into_iter()
        .map(|f| Ok(reduce_scalar(&f, sys, limit)?.normal))
        .collect()
}

/// The current-shift action `t_R`: `(p1 - D_y R, p2 + D_x R)`. Preserves the
/// conservation property and the generating function.
pub fn current_shift(
    p1: &DiffFunction,
    p2: &DiffFunction,
    r: &DiffFunction,
) -> (DiffFunction, DiffFunction) {
    (p1 - &r.total_y(), p2 + &r.total_x())
}
