//! Dense Hermitian operator algebra on a `d`-dimensional Hilbert space.
//!
//! Operators are stored as `d x d` complex matrices. The space of Hermitian
//! operators is treated as a real inner-product space of dimension `d^2`
//! under the Hilbert-Schmidt product `<<A, B>> = tr(A^dagger B)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to accept a matrix as Hermitian, relative to its largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Residual norm below which Gram-Schmidt treats an input as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-10;

/// Tolerance on the Gram matrix of a basis tagged orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A `d x d` complex matrix that is Hermitian within [`HERMITIAN_TOL`].
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianOperator")
            .field("dim", &self.dim())
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl HermitianOperator {
    /// Wraps a matrix after checking it is square and Hermitian.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 {
            return Err(Error::Dimension("operator must have dimension >= 1".into()));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::InvalidOperator(format!(
                "matrix is not Hermitian: max |A_ij - conj(A_ji)| = {dev:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Builds `(M + M^dagger) / 2`. Used for products that are Hermitian only up to rounding.
    pub fn hermitian_part(matrix: &CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "operator must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let sym = (matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { matrix: sym })
    }

    /// Row-major constructor.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        Self { matrix: m }
    }

    /// The rank-one operator `|v><v|`.
    pub fn projector(v: &ComplexVector) -> Self {
        let col = &v.entries;
        let mut m = col * col.adjoint();
        for i in 0..m.nrows() {
            m[(i, i)].im = 0.0;
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Real part of the trace (the imaginary part vanishes for Hermitian operators).
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    /// `tr(A^2)`, the squared Hilbert-Schmidt norm.
    pub fn norm_sqr(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `U A U^dagger` for an arbitrary square matrix `U` of matching size.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        check_square(u, self.dim())?;
        Self::hermitian_part(&(u * &self.matrix * u.adjoint()))
    }

    /// `tr(A rho)` as a real number.
    pub fn expectation(&self, other: &HermitianOperator) -> f64 {
        // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *eig_hermitian(self)
            .values
            .last()
            .expect("nonempty spectrum")
    }

    /// Linear combination `sum_i coeffs[i] * ops[i]`.
    pub fn linear_combination(coeffs: &[f64], ops: &[HermitianOperator]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Dimension("empty operator list".into()))?;
        if coeffs.len() != ops.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} operators",
                coeffs.len(),
                ops.len()
            )));
        }
        let d = first.dim();
        let mut m = CMatrix::zeros(d, d);
        for (&w, op) in coeffs.iter().zip(ops) {
            check_same_dim(first, op)?;
            if w != 0.0 {
                m.zip_apply(&op.matrix, |acc, z| *acc += z * w);
            }
        }
        Ok(Self { matrix: m })
    }

    /// Sum of a list of operators of equal dimension.
    pub fn sum(ops: &[HermitianOperator]) -> Result<Self> {
        Self::linear_combination(&vec![1.0; ops.len()], ops)
    }
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_square(u: &CMatrix, d: usize) -> Result<()> {
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension(format!(
            "expected {d}x{d} matrix, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn check_same_dim(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul<&HermitianOperator> for f64 {
    type Output = HermitianOperator;
    fn mul(self, rhs: &HermitianOperator) -> HermitianOperator {
        rhs.scale(self)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

/// A vector in the `d`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: DVector<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension("vector must be nonempty".into()));
        }
        Ok(Self {
            entries: DVector::from_vec(entries),
        })
    }

    /// Builds the vector and rescales it to unit norm.
    pub fn normalized(entries: Vec<Complex64>) -> Result<Self> {
        let v = Self::new(entries)?;
        let n = v.norm();
        if n < 1e-300 {
            return Err(Error::InvalidOperator(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            entries: v.entries.map(|z| z / n),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut e = DVector::zeros(dim);
        e[index] = c(1.0, 0.0);
        Self { entries: e }
    }

    pub fn from_column(col: DVector<Complex64>) -> Self {
        Self { entries: col }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        self.entries.dotc(&other.entries)
    }

    pub fn apply(&self, m: &CMatrix) -> Self {
        Self {
            entries: m * &self.entries,
        }
    }
}

/// Tag recording which structural invariant a basis satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Orthonormal,
    Cob,
    Other,
}

/// `d^2` Hermitian operators spanning the operator space.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
    kind: BasisKind,
}

impl OperatorBasis {
    pub fn new(elements: Vec<HermitianOperator>, kind: BasisKind) -> Result<Self> {
        let dim = elements
            .first()
            .map(HermitianOperator::dim)
            .ok_or(Error::Count {
                expected: 1,
                actual: 0,
            })?;
        if elements.len() != dim * dim {
            return Err(Error::Count {
                expected: dim * dim,
                actual: elements.len(),
            });
        }
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::Dimension(format!(
                    "basis element of dimension {} in a dimension-{dim} basis",
                    e.dim()
                )));
            }
        }
        if kind == BasisKind::Orthonormal {
            let dev = orthonormality_deviation(&elements);
            if dev > ORTHONORMAL_TOL {
                return Err(Error::ValidationFailure(format!(
                    "basis is not orthonormal: max Gram deviation {dev:e}"
                )));
            }
        }
        Ok(Self {
            dim,
            elements,
            kind,
        })
    }

    pub fn orthonormal(elements: Vec<HermitianOperator>) -> Result<Self> {
        Self::new(elements, BasisKind::Orthonormal)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Real coordinates `<<T_i, A>>` of a Hermitian operator in an orthonormal basis.
    pub fn coefficients(&self, a: &HermitianOperator) -> Result<Vec<f64>> {
        self.elements
            .iter()
            .map(|t| hs_inner(t, a).map(|z| z.re))
            .collect()
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<HermitianOperator> {
        HermitianOperator::linear_combination(coeffs, &self.elements)
    }
}

/// Real Gram matrix `<<A_i, A_j>>`.
pub fn gram_matrix(ops: &[HermitianOperator]) -> DMatrix<f64> {
    let n = ops.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = ops[i].expectation(&ops[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn orthonormality_deviation(ops: &[HermitianOperator]) -> f64 {
    let g = gram_matrix(ops);
    let n = ops.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Hilbert-Schmidt inner product `tr(A^dagger B)`.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<Complex64> {
    check_same_dim(a, b)?;
    Ok(a.matrix
        .iter()
        .zip(b.matrix.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Spectrum of a Hermitian operator, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

impl EigenDecomposition {
    /// `sum_k m_k v_k v_k^dagger`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.values.len();
        let mut m = CMatrix::zeros(d, d);
        for (&val, v) in self.values.iter().zip(&self.vectors) {
            let col = v.entries();
            m += (col * col.adjoint()).scale(val);
        }
        m
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

/// Eigendecomposition of a Hermitian operator with eigenvalues sorted descending,
/// so the minimum eigenvalue is the last entry.
pub fn eig_hermitian(a: &HermitianOperator) -> EigenDecomposition {
    let eig = SymmetricEigen::new(a.matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| ComplexVector::from_column(eig.eigenvectors.column(i).into_owned()))
        .collect();
    EigenDecomposition { values, vectors }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass in the real
/// Hilbert-Schmidt space of Hermitian operators.
///
/// Each output has a positive coefficient on its own input, so the first output is
/// the normalized first input. Fails with [`Error::RankDeficient`] when an input
/// lies (within [`DEPENDENCE_TOL`]) in the span of the earlier ones.
pub fn gram_schmidt_operators(seq: &[HermitianOperator]) -> Result<Vec<HermitianOperator>> {
    let Some(first) = seq.first() else {
        return Ok(Vec::new());
    };
    let mut out: Vec<HermitianOperator> = Vec::with_capacity(seq.len());
    for (k, x) in seq.iter().enumerate() {
        check_same_dim(first, x)?;
        let mut v = x.matrix.clone();
        for _pass in 0..2 {
            for q in &out {
                let proj: f64 = q
                    .matrix
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum();
                v.zip_apply(&q.matrix, |acc, z| *acc -= z * proj);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < DEPENDENCE_TOL * x.norm().max(1.0) {
            return Err(Error::RankDeficient {
                index: k,
                residual: norm,
            });
        }
        out.push(HermitianOperator::hermitian_part(&v.unscale(norm))?);
    }
    Ok(out)
}

/// Generalized Gell-Mann basis, orthonormal under the Hilbert-Schmidt product.
///
/// Ordering: `I/sqrt(d)` first; then for each pair `n < m` in lexicographic order
/// the symmetric element `(|n><m| + |m><n|)/sqrt(2)` followed by the antisymmetric
/// element `i(|m><n| - |n><m|)/sqrt(2)`; then the diagonal elements
/// `(sum_{k<=n} |k><k| - n|n+1><n+1|)/sqrt(n(n+1))` for `n = 1..d-1`.
/// For `d = 2` this is `(I, sigma_x, sigma_y, sigma_z)/sqrt(2)`.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "Gell-Mann basis requires d >= 2, got {d}"
        )));
    }
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(d * d);
    elements.push(HermitianOperator::identity(d).scale(1.0 / (d as f64).sqrt()));
    for n in 0..d {
        for m in n + 1..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(n, m)] = c(s2, 0.0);
            sym[(m, n)] = c(s2, 0.0);
            elements.push(HermitianOperator { matrix: sym });

            let mut anti = CMatrix::zeros(d, d);
            anti[(m, n)] = c(0.0, s2);
            anti[(n, m)] = c(0.0, -s2);
            elements.push(HermitianOperator { matrix: anti });
        }
    }
    for n in 1..d {
        let norm = ((n * (n + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(n) {
            *x = 1.0 / norm;
        }
        diag[n] = -(n as f64) / norm;
        elements.push(HermitianOperator::from_real_diagonal(&diag));
    }
    OperatorBasis::orthonormal(elements)
}
