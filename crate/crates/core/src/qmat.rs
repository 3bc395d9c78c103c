//! Dense complex linear algebra for small composite quantum systems.
//!
//! Matrices are stored row-major. Composite indices follow the convention that
//! subsystem 0 is the most significant tensor factor, so `kron(a, b)` places
//! `a` on the slow index.
//!
//! The reshaping maps here (partial trace, partial transpose, realignment,
//! subsystem permutation) are written directly on the multi-index; spectral
//! quantities delegate to `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `max |m - m†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-EIGEN_CLIP, 0)` are treated as zero in positivity checks.
pub const EIGEN_CLIP: f64 = 1e-10;

const SPECTRAL_EPS: f64 = f64::EPSILON;
const SPECTRAL_MAX_ITER: usize = 10_000;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Hilbert-space dimensions of an ordered list of subsystems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimSpec(Vec<usize>);

impl DimSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::arg("dimension list is empty"));
        }
        if dims.contains(&0) {
            return Err(Error::arg("subsystem dimensions must be positive"));
        }
        Ok(DimSpec(dims))
    }

    pub fn qubits(n: usize) -> Self {
        DimSpec(vec![2; n.max(1)])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of the composite space.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    /// Dimensions of the listed subsystems, in the order given.
    pub fn select(&self, idx: &[usize]) -> Vec<usize> {
        idx.iter().map(|&i| self.0[i]).collect()
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    pub(crate) fn digit(&self, strides: &[usize], index: usize, k: usize) -> usize {
        (index / strides[k]) % self.0[k]
    }

    fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::dims(format!(
                "expected a square matrix, got {}x{}",
                m.rows, m.cols
            )));
        }
        if self.total() != m.rows {
            return Err(Error::dims(format!(
                "dims {:?} describe a {}-dimensional space but the matrix is {}x{}",
                self.0,
                self.total(),
                m.rows,
                m.cols
            )));
        }
        Ok(())
    }

    fn check_subset(&self, idx: &[usize], what: &str) -> Result<()> {
        for (pos, &i) in idx.iter().enumerate() {
            if i >= self.0.len() {
                return Err(Error::arg(format!(
                    "{what}: subsystem {i} out of range (system has {})",
                    self.0.len()
                )));
            }
            if idx[..pos].contains(&i) {
                return Err(Error::arg(format!("{what}: subsystem {i} listed twice")));
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for DimSpec {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        DimSpec::new(v)
    }
}

impl From<DimSpec> for Vec<usize> {
    fn from(d: DimSpec) -> Self {
        d.0
    }
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(r) {
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::arg(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Internal constructor for results of arithmetic on already-valid matrices.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![C64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from real row slices; convenient for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::dims("ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect();
        Self::new(rows.len(), ncols, data)
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_raw(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for col in 0..self.cols {
                out[(col, r)] = self[(r, col)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for col in 0..self.cols {
                out[(col, r)] = self[(r, col)];
            }
        }
        out
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for col in r..self.cols {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// `(m + m†)/2`
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&adj.data).map(|(a, b)| (a + b) * 0.5).collect(),
        )
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::dims(format!(
                "cannot apply {}x{} matrix to a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                out[(r, col)] = m[(r, col)];
            }
        }
        out
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let svd = SVD::try_new(self.to_nalgebra(), false, false, SPECTRAL_EPS, SPECTRAL_MAX_ITER)
            .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?;
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// Sum of singular values, `Tr √(m† m)`.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?.iter().sum())
    }

    /// Real eigenvalues of a Hermitian matrix, descending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigh()?.0)
    }

    /// Eigenvalues (descending) and matching orthonormal eigenvectors of a
    /// Hermitian matrix.
    pub fn hermitian_eigh(&self) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
        if !self.is_square() {
            return Err(Error::dims("eigen-decomposition needs a square matrix"));
        }
        let dev = self.hermiticity_error();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_deviation: dev });
        }
        let eig = SymmetricEigen::try_new(
            self.hermitian_part().to_nalgebra(),
            SPECTRAL_EPS,
            SPECTRAL_MAX_ITER,
        )
        .ok_or_else(|| Error::NumericFailure("Hermitian eigensolver did not converge".into()))?;
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        Ok((values, vectors))
    }

    /// Eigenvalues of a general square matrix via the complex Schur form.
    /// Returned in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        if !self.is_square() {
            return Err(Error::dims("eigenvalues need a square matrix"));
        }
        let schur = Schur::try_new(self.to_nalgebra(), SPECTRAL_EPS, SPECTRAL_MAX_ITER)
            .ok_or_else(|| Error::NumericFailure("Schur decomposition did not converge".into()))?;
        let (_, t) = schur.unpack();
        Ok(t.diagonal().iter().copied().collect())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Pauli operators in the fixed `(x, y, z)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let z = c(0.0, 0.0);
        let data = match self {
            Pauli::X => vec![z, c(1.0, 0.0), c(1.0, 0.0), z],
            Pauli::Y => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
            Pauli::Z => vec![c(1.0, 0.0), z, z, c(-1.0, 0.0)],
        };
        ComplexMatrix::from_raw(2, 2, data)
    }
}

/// Kronecker product; `a` is the most significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let av = a[(ar, ac)];
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = av * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of vectors (tensor product of kets).
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Reduced operator on the `keep` subsystems (original order preserved).
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(rho)?;
    if keep.is_empty() {
        return Err(Error::arg("partial trace must keep at least one subsystem"));
    }
    dims.check_subset(keep, "partial trace")?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();

    let kept_dims = DimSpec(dims.select(&keep));
    let traced_dims = DimSpec(if traced.is_empty() { vec![1] } else { dims.select(&traced) });
    let strides = dims.strides();
    let kept_strides = kept_dims.strides();
    let traced_strides = traced_dims.strides();

    // full index = sum over kept digits + sum over traced digits
    let embed = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0;
        for (p, &k) in keep.iter().enumerate() {
            full += kept_dims.digit(&kept_strides, kept_idx, p) * strides[k];
        }
        for (p, &k) in traced.iter().enumerate() {
            full += traced_dims.digit(&traced_strides, traced_idx, p) * strides[k];
        }
        full
    };

    let dk = kept_dims.total();
    let dt = traced_dims.total();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for r in 0..dk {
        for col in 0..dk {
            let mut acc = c(0.0, 0.0);
            for t in 0..dt {
                acc += rho[(embed(r, t), embed(col, t))];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the indices of the subsystems listed in `part`, leaving the others.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &DimSpec,
    part: &[usize],
) -> Result<ComplexMatrix> {
    dims.check_matrix(rho)?;
    dims.check_subset(part, "partial transpose")?;
    let strides = dims.strides();
    let n = rho.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (mut i2, mut j2) = (i, j);
            for &k in part {
                let di = dims.digit(&strides, i, k);
                let dj = dims.digit(&strides, j, k);
                i2 = i2 - di * strides[k] + dj * strides[k];
                j2 = j2 - dj * strides[k] + di * strides[k];
            }
            out[(i2, j2)] = rho[(i, j)];
        }
    }
    Ok(out)
}

/// Realignment `R(ρ)_{ij,kl} = ρ_{ik,jl}` over a two-block system `d_A ⊗ d_B`.
/// The result is `d_A² × d_B²`.
pub fn realign(rho: &ComplexMatrix, dims: &DimSpec) -> Result<ComplexMatrix> {
    if dims.len() != 2 {
        return Err(Error::dims(format!(
            "realignment needs exactly two blocks, got dims {:?}",
            dims.as_slice()
        )));
    }
    dims.check_matrix(rho)?;
    let (da, db) = (dims.0[0], dims.0[1]);
    let mut out = ComplexMatrix::zeros(da * da, db * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * da + j, k * db + l)] = rho[(i * db + k, j * db + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: subsystem `p` of the result is subsystem `order[p]` of
/// the input. Returns the permuted operator and its dims.
pub fn permute_subsystems(
    rho: &ComplexMatrix,
    dims: &DimSpec,
    order: &[usize],
) -> Result<(ComplexMatrix, DimSpec)> {
    dims.check_matrix(rho)?;
    let perm = permutation_map(dims, order)?;
    let n = rho.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for (new_i, &old_i) in perm.iter().enumerate() {
        for (new_j, &old_j) in perm.iter().enumerate() {
            out[(new_i, new_j)] = rho[(old_i, old_j)];
        }
    }
    Ok((out, DimSpec(dims.select(order))))
}

/// Same reordering as [`permute_subsystems`], applied to a ket.
pub fn permute_vector(v: &[C64], dims: &DimSpec, order: &[usize]) -> Result<(Vec<C64>, DimSpec)> {
    if v.len() != dims.total() {
        return Err(Error::dims(format!(
            "vector of length {} does not match dims {:?}",
            v.len(),
            dims.as_slice()
        )));
    }
    let perm = permutation_map(dims, order)?;
    Ok((perm.iter().map(|&old| v[old]).collect(), DimSpec(dims.select(order))))
}

// perm[new_index] = old_index
fn permutation_map(dims: &DimSpec, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != dims.len() {
        return Err(Error::arg(format!(
            "permutation has {} entries for {} subsystems",
            order.len(),
            dims.len()
        )));
    }
    dims.check_subset(order, "permutation")?;
    let old_strides = dims.strides();
    let new_dims = DimSpec(dims.select(order));
    let new_strides = new_dims.strides();
    Ok((0..dims.total())
        .map(|new_idx| {
            order
                .iter()
                .enumerate()
                .map(|(p, &old_k)| new_dims.digit(&new_strides, new_idx, p) * old_strides[old_k])
                .sum()
        })
        .collect())
}

pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.trace_norm()
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.hermitian_eigenvalues()
}
