//! Matrix-valued differential functions and matrix Lie algebra structure.
//!
//! A [`MatrixFunction`] is a square grid of canonical [`DiffFunction`]
//! entries. Membership in a fixed matrix Lie algebra is not a property of the
//! type: it is decided against a [`LieAlgebraSpec`] by basis decomposition.
//! A [`LieAlgebraSpec`] validates linear independence and bracket closure at
//! construction and caches the exact linear solver used for decompositions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::{divergence, DiffFunction, MultiIndex};

/// Errors raised by matrix and Lie algebra operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieAlgebraError {
    /// Operands or constructor rows with incompatible dimensions.
    SizeMismatch { expected: usize, found: usize },
    /// A basis matrix entry that is not a rational constant.
    NonConstantBasis { basis_index: usize },
    /// The basis matrices are linearly dependent over the rationals.
    DependentBasis,
    /// `[T_i, T_j]` falls outside the span of the basis.
    NotClosed { i: usize, j: usize },
    /// The matrix has a component outside the span of the basis.
    NotInSpan,
    /// The determinant canonicalizes to zero.
    SingularMatrix,
}

impl core::fmt::Display for LieAlgebraError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LieAlgebraError::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            LieAlgebraError::NonConstantBasis { basis_index } => {
                write!(f, "basis matrix {basis_index} has a non-constant entry")
            }
            LieAlgebraError::DependentBasis => {
                write!(f, "basis matrices are linearly dependent")
            }
            LieAlgebraError::NotClosed { i, j } => write!(
                f,
                "bracket of basis elements {i} and {j} leaves the span: not a Lie algebra"
            ),
            LieAlgebraError::NotInSpan => write!(f, "matrix is not in the span of the basis"),
            LieAlgebraError::SingularMatrix => write!(f, "matrix is singular"),
        }
    }
}

impl core::error::Error for LieAlgebraError {}

/// A square matrix of differential functions, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFunction {
    size: usize,
    entries: Vec<DiffFunction>,
}

impl MatrixFunction {
    pub fn from_rows(rows: Vec<Vec<DiffFunction>>) -> Result<MatrixFunction, LieAlgebraError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(LieAlgebraError::SizeMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(MatrixFunction { size, entries })
    }

    pub fn zero(size: usize) -> MatrixFunction {
        MatrixFunction {
            size,
            entries: vec![DiffFunction::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> MatrixFunction {
        let mut m = MatrixFunction::zero(size);
        for i in 0..size {
            *m.entry_mut(i, i) = DiffFunction::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> &DiffFunction {
        &self.entries[row * self.size + col]
    }

    fn entry_mut(&mut self, row: usize, col: usize) -> &mut DiffFunction {
        &mut self.entries[row * self.size + col]
    }

    pub fn entries(&self) -> &[DiffFunction] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DiffFunction::is_zero)
    }

    pub fn map(&self, f: impl Fn(&DiffFunction) -> DiffFunction) -> MatrixFunction {
        MatrixFunction {
            size: self.size,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn check_size(&self, other: &MatrixFunction) -> Result<(), LieAlgebraError> {
        if self.size == other.size {
            Ok(())
        } else {
            Err(LieAlgebraError::SizeMismatch {
                expected: self.size,
                found: other.size,
            })
        }
    }

    pub fn add(&self, other: &MatrixFunction) -> MatrixFunction {
        self.check_size(other).expect("matrix sizes match");
        MatrixFunction {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &MatrixFunction) -> MatrixFunction {
        self.check_size(other).expect("matrix sizes match");
        MatrixFunction {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> MatrixFunction {
        self.map(|e| -e)
    }

    /// Matrix product.
    pub fn mul(&self, other: &MatrixFunction) -> MatrixFunction {
        self.check_size(other).expect("matrix sizes match");
        let n = self.size;
        let mut out = MatrixFunction::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = DiffFunction::zero();
                for k in 0..n {
                    acc = acc + self.entry(i, k) * other.entry(k, j);
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    /// Multiplication by a scalar differential function.
    pub fn scale(&self, f: &DiffFunction) -> MatrixFunction {
        self.map(|e| e * f)
    }

    /// Entrywise total derivative along `x`. Constant basis matrices make
    /// this preserve span membership.
    pub fn total_x(&self) -> MatrixFunction {
        self.map(DiffFunction::total_x)
    }

    /// Entrywise total derivative along `y`.
    pub fn total_y(&self) -> MatrixFunction {
        self.map(DiffFunction::total_y)
    }

    /// Entrywise iterated total derivative.
    pub fn total_multi(&self, idx: MultiIndex) -> MatrixFunction {
        self.map(|e| e.total_multi(idx))
    }

    /// Entrywise partial derivative with respect to a jet coordinate.
    pub fn partial_jet(&self, c: crate::expr::JetCoordinate) -> MatrixFunction {
        self.map(|e| e.partial_jet(c))
    }

    /// Entrywise Euler operator component.
    pub fn euler_component(&self, dep: u32) -> MatrixFunction {
        self.map(|e| e.euler_component(dep))
    }

    /// Determinant by cofactor expansion; matrix sizes in this engine are
    /// small.
    pub fn det(&self) -> DiffFunction {
        match self.size {
            0 => DiffFunction::one(),
            1 => self.entry(0, 0).clone(),
            _ => {
                let mut acc = DiffFunction::zero();
                for j in 0..self.size {
                    let term = self.entry(0, j) * &self.minor(0, j).det();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> MatrixFunction {
        let n = self.size;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.entry(i, j).clone());
            }
        }
        MatrixFunction {
            size: n - 1,
            entries,
        }
    }

    /// Adjugate matrix: `adj(H) * H = det(H) * identity`.
    pub fn adjugate(&self) -> MatrixFunction {
        let n = self.size;
        if n == 1 {
            return MatrixFunction::identity(1);
        }
        let mut out = MatrixFunction::zero(n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(i, j).det();
                let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                *out.entry_mut(j, i) = signed;
            }
        }
        out
    }

    /// Exact inverse `adjugate / det`.
    pub fn inverse(&self) -> Result<MatrixFunction, LieAlgebraError> {
        let det = self.det();
        if det.is_zero() {
            return Err(LieAlgebraError::SingularMatrix);
        }
        let adj = self.adjugate();
        Ok(adj.map(|e| e.checked_div(&det).expect("determinant is nonzero")))
    }

    /// Conjugation `H * self * H^{-1}`.
    pub fn conjugate_by(&self, h: &MatrixFunction) -> Result<MatrixFunction, LieAlgebraError> {
        self.check_size(h)?;
        let hinv = h.inverse()?;
        Ok(h.mul(self).mul(&hinv))
    }
}

/// Pointwise Lie bracket `[M, N] = M N - N M`.
pub fn bracket(m: &MatrixFunction, n: &MatrixFunction) -> MatrixFunction {
    m.mul(n).sub(&n.mul(m))
}

/// Adjoint action `ad_R(M) = [R, M]`.
pub fn ad_apply(r: &MatrixFunction, m: &MatrixFunction) -> MatrixFunction {
    bracket(r, m)
}

/// Twisted total derivative along `x`: `D_x M - [R, M]`.
pub fn twisted_x(m: &MatrixFunction, r: &MatrixFunction) -> MatrixFunction {
    m.total_x().sub(&bracket(r, m))
}

/// Twisted total derivative along `y`: `D_y M - [S, M]`.
pub fn twisted_y(m: &MatrixFunction, s: &MatrixFunction) -> MatrixFunction {
    m.total_y().sub(&bracket(s, m))
}

/// Composition order of twisted derivative powers. The twists do not commute
/// on the jet space, so the order is part of every formula that uses them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistOrder {
    /// `(\hat D_x^R)^a` applied to `(\hat D_y^S)^b M`: the `y`-twists act
    /// innermost.
    XThenY,
    /// `(\hat D_y^S)^b` applied to `(\hat D_x^R)^a M`: the `x`-twists act
    /// innermost.
    YThenX,
}

/// Iterated twisted derivatives `(\hat D_x^R)^a`, `(\hat D_y^S)^b` composed
/// in the requested order.
pub fn twisted_power(
    m: &MatrixFunction,
    r: &MatrixFunction,
    s: &MatrixFunction,
    idx: MultiIndex,
    order: TwistOrder,
) -> MatrixFunction {
    let mut acc = m.clone();
    match order {
        TwistOrder::XThenY => {
            for _ in 0..idx.y {
                acc = twisted_y(&acc, s);
            }
            for _ in 0..idx.x {
                acc = twisted_x(&acc, r);
            }
        }
        TwistOrder::YThenX => {
            for _ in 0..idx.x {
                acc = twisted_x(&acc, r);
            }
            for _ in 0..idx.y {
                acc = twisted_y(&acc, s);
            }
        }
    }
    acc
}

/// Entrywise divergence of a pair of matrices: `D_x M + D_y N`.
pub fn divergence_g(m: &MatrixFunction, n: &MatrixFunction) -> MatrixFunction {
    m.check_size(n).expect("matrix sizes match");
    MatrixFunction {
        size: m.size,
        entries: m
            .entries
            .iter()
            .zip(&n.entries)
            .map(|(a, b)| divergence(a, b))
            .collect(),
    }
}

/// A matrix Lie algebra given by a constant basis. Construction checks
/// linear independence and closure under the bracket; the structure
/// constants and the exact solver behind [`LieAlgebraSpec::decompose`] are
/// cached.
#[derive(Debug, Clone)]
pub struct LieAlgebraSpec {
    size: usize,
    basis: Vec<MatrixFunction>,
    name: Option<String>,
    /// `[T_i, T_j] = sum_k structure[i][j][k] T_k`.
    structure: Vec<Vec<Vec<BigRational>>>,
    /// Entry positions whose values determine the coordinates uniquely.
    pivot_entries: Vec<usize>,
    /// Inverse of the `d x d` matrix `P[c][i] = T_i[pivot_entries[c]]`.
    pivot_inverse: Vec<Vec<BigRational>>,
}

impl LieAlgebraSpec {
    pub fn new(
        size: usize,
        basis: Vec<MatrixFunction>,
        name: Option<String>,
    ) -> Result<LieAlgebraSpec, LieAlgebraError> {
        let dim = basis.len();
        if dim == 0 {
            return Err(LieAlgebraError::DependentBasis);
        }
        let mut vectors: Vec<Vec<BigRational>> = Vec::with_capacity(dim);
        for (i, t) in basis.iter().enumerate() {
            if t.size() != size {
                return Err(LieAlgebraError::SizeMismatch {
                    expected: size,
                    found: t.size(),
                });
            }
            let mut v = Vec::with_capacity(size * size);
            for e in t.entries() {
                v.push(
                    e.as_constant()
                        .ok_or(LieAlgebraError::NonConstantBasis { basis_index: i })?,
                );
            }
            vectors.push(v);
        }

        let pivot_entries = pivot_columns(&vectors).ok_or(LieAlgebraError::DependentBasis)?;
        let mut pivot_matrix = vec![vec![BigRational::zero(); dim]; dim];
        for (c, &e) in pivot_entries.iter().enumerate() {
            for i in 0..dim {
                pivot_matrix[c][i] = vectors[i][e].clone();
            }
        }
        let pivot_inverse = invert(&pivot_matrix).expect("pivot submatrix is invertible");

        let mut spec = LieAlgebraSpec {
            size,
            basis,
            name,
            structure: Vec::new(),
            pivot_entries,
            pivot_inverse,
        };

        let mut structure = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let br = bracket(&spec.basis[i], &spec.basis[j]);
                let coords = spec
                    .decompose(&br)
                    .map_err(|_| LieAlgebraError::NotClosed { i, j })?;
                let consts = coords
                    .iter()
                    .map(|f| f.as_constant().expect("bracket of constants is constant"))
                    .collect();
                structure[i][j] = consts;
            }
        }
        spec.structure = structure;
        Ok(spec)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MatrixFunction] {
        &self.basis
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Structure constants `c_{ij}^k` with `[T_i, T_j] = sum_k c_{ij}^k T_k`.
    pub fn structure_constants(&self) -> &[Vec<Vec<BigRational>>] {
        &self.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure
            .iter()
            .flatten()
            .flatten()
            .all(BigRational::is_zero)
    }

    /// Coordinates of `M` in the basis: the unique functions `f^i` with
    /// `M = sum_i f^i T_i`. Fails with [`LieAlgebraError::NotInSpan`] when no
    /// such coordinates exist.
    pub fn decompose(&self, m: &MatrixFunction) -> Result<Vec<DiffFunction>, LieAlgebraError> {
        if m.size() != self.size {
            return Err(LieAlgebraError::SizeMismatch {
                expected: self.size,
                found: m.size(),
            });
        }
        let dim = self.dim();
        let mut coords = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut acc = DiffFunction::zero();
            for (c, &e) in self.pivot_entries.iter().enumerate() {
                let w = &self.pivot_inverse[i][c];
                if w.is_zero() {
                    continue;
                }
                acc = acc + &m.entries()[e] * w;
            }
            coords.push(acc);
        }
        // The solve used only the pivot entries; the residual check decides
        // span membership.
        if &self.combine(&coords) == m {
            Ok(coords)
        } else {
            Err(LieAlgebraError::NotInSpan)
        }
    }

    /// `sum_i coords[i] * T_i`.
    pub fn combine(&self, coords: &[DiffFunction]) -> MatrixFunction {
        let mut acc = MatrixFunction::zero(self.size);
        for (f, t) in coords.iter().zip(&self.basis) {
            acc = acc.add(&t.scale(f));
        }
        acc
    }

    pub fn contains(&self, m: &MatrixFunction) -> bool {
        self.decompose(m).is_ok()
    }
}

/// Gaussian elimination over the rationals: returns the pivot column of each
/// row of `rows`, or `None` if the rows are linearly dependent.
fn pivot_columns(rows: &[Vec<BigRational>]) -> Option<Vec<usize>> {
    let mut work: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = work.first().map_or(0, Vec::len);
    let mut pivots = Vec::with_capacity(work.len());
    let mut used = vec![false; cols];
    for r in 0..work.len() {
        let p = (0..cols).find(|&c| !used[c] && !work[r][c].is_zero())?;
        pivots.push(p);
        used[p] = true;
        let inv = BigRational::one() / work[r][p].clone();
        for c in 0..cols {
            work[r][c] = &work[r][c] * &inv;
        }
        for r2 in 0..work.len() {
            if r2 == r || work[r2][p].is_zero() {
                continue;
            }
            let factor = work[r2][p].clone();
            for c in 0..cols {
                let delta = &factor * &work[r][c];
                work[r2][c] = &work[r2][c] - &delta;
            }
        }
    }
    Some(pivots)
}

/// Exact inverse of a square rational matrix by Gauss-Jordan elimination.
fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = BigRational::one() / a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] * &scale;
            inv[col][c] = &inv[col][c] * &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let da = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &da;
                let di = &factor * &inv[col][c];
                inv[r][c] = &inv[r][c] - &di;
            }
        }
    }
    Some(inv)
}
