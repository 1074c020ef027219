//! Dense complex matrices and the structural operations on them: Kronecker
//! products, partial traces and Hermitian eigendecomposition.
//!
//! Everything is row-major and zero-based. Subsystem 0 is the leftmost tensor
//! factor, so for dims `[2, 2, 2]` the basis ket `|abc⟩` sits at index
//! `a * 4 + b * 2 + c`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{DensityViolation, Error, Result};

pub type C64 = Complex64;

/// Tolerance used when accepting density matrices and Hermitian inputs.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest Hilbert-space dimension the crate will build a density matrix for.
pub const MAX_DIM: usize = 64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim(format!("empty matrix shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(r, c, data)
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Self::new(
            r,
            c,
            rows.iter().flat_map(|row| row.iter().copied()).collect(),
        )
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::dim("columns of unequal length"));
        }
        Self::new(
            n,
            cols.len(),
            (0..n)
                .flat_map(|i| cols.iter().map(move |c| c[i]))
                .collect(),
        )
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
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

    /// Largest entrywise modulus of `self - self†`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Ordered subsystem dimensions of a composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::usage("dimension vector is empty"));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::usage(format!("subsystem dimension {d} is below 2")));
        }
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n])
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn select(&self, keep: &[usize]) -> Self {
        Self(keep.iter().map(|&k| self.0[k]).collect())
    }
}

impl Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold((*first).clone(), |acc, f| tensor(&acc, f))
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

fn normalize_keep(dims: &DimVector, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::usage(
            "partial trace needs at least one subsystem to keep",
        ));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::usage(format!(
            "subsystem index {k} out of range for {} subsystems",
            dims.len()
        )));
    }
    Ok(keep)
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order regardless of the order of `keep`.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: &DimVector,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows != dims.total() {
        return Err(Error::dim(format!(
            "{}x{} matrix does not match subsystem dims {:?} (product {})",
            rho.rows,
            rho.cols,
            dims.as_slice(),
            dims.total()
        )));
    }
    let keep = normalize_keep(dims, keep)?;
    let n = dims.len();
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();

    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // Offsets into the full index contributed by each multi-index over a subset.
    let offsets = |subset: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subset {
            let stride = strides[s];
            out = out
                .iter()
                .flat_map(|&o| (0..dims[s]).map(move |v| o + v * stride))
                .collect();
        }
        out
    };
    let kept_off = offsets(&keep);
    let traced_off = offsets(&traced);

    let dk = kept_off.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (i, &oi) in kept_off.iter().enumerate() {
        for (j, &oj) in kept_off.iter().enumerate() {
            out[(i, j)] = traced_off.iter().map(|&t| rho[(oi + t, oj + t)]).sum();
        }
    }
    Ok(out)
}

/// Spectrum (descending) and orthonormal eigenvector columns of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::diag_real(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let vals: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let d = ComplexMatrix::diag_real(&vals);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > DEFAULT_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(m.hermitian_part()))
}

fn jacobi(mut a: ComplexMatrix) -> HermitianEigen {
    let n = a.rows;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Phase-reduce the 2x2 block to real symmetric, then rotate by theta.
                let phase = b / babs;
                let theta = 0.5 * (2.0 * babs).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = phase.conj() * -s;
                let u_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        // Fix the global phase: first non-negligible component real and positive.
        let pivot = (0..n)
            .map(|k| v[(k, src)])
            .find(|z| z.norm() > 1e-8)
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)] * phase;
        }
    }
    HermitianEigen { values, vectors }
}

/// Eigenvalues only, descending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eig_hermitian(m).map(|e| e.values)
}

/// Largest entrywise deviation of `VᴴV` from the identity.
pub fn orthonormality_deviation(vectors: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let g: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/// A validated quantum state: Hermitian, unit trace, positive semidefinite,
/// annotated with its subsystem structure.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: DimVector,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DensityMatrix dims={:?} {:?}",
            self.dims.as_slice(),
            self.matrix
        )
    }
}

/// Checks that `rho` is a state on the space described by `dims`.
///
/// Small negative eigenvalues (within `tol`) are clamped to zero and the
/// spectrum renormalized before the matrix is stored.
pub fn validate_density(rho: &ComplexMatrix, dims: &DimVector, tol: f64) -> Result<DensityMatrix> {
    if !rho.is_square() || rho.rows != dims.total() {
        return Err(Error::dim(format!(
            "{}x{} matrix does not match subsystem dims {:?} (product {})",
            rho.rows,
            rho.cols,
            dims.as_slice(),
            dims.total()
        )));
    }
    if rho.rows > MAX_DIM {
        return Err(Error::usage(format!(
            "dimension {} exceeds the cap of {MAX_DIM}",
            rho.rows
        )));
    }
    let mut violations = Vec::new();
    let herm = rho.hermitian_deviation();
    if herm > tol {
        violations.push(DensityViolation::NotHermitian(herm));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > tol {
        violations.push(DensityViolation::Trace(tr));
    }
    let h = rho.hermitian_part();
    let eig = jacobi(h.clone());
    let min = *eig.values.last().expect("non-empty spectrum");
    if min < -tol {
        violations.push(DensityViolation::NegativeEigenvalue(min));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidDensity(violations));
    }
    let matrix = if min < 0.0 {
        let clamped: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        eig.map_spectrum(|x| x.max(0.0) / total).hermitian_part()
    } else {
        h.scale_real(1.0 / tr)
    };
    Ok(DensityMatrix {
        matrix,
        dims: dims.clone(),
    })
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: DimVector) -> Result<Self> {
        validate_density(&matrix, &dims, DEFAULT_TOL)
    }

    /// Wraps a matrix already known to be a state (e.g. a partial trace of one).
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: DimVector) -> Self {
        debug_assert_eq!(matrix.rows, dims.total());
        Self {
            matrix: matrix.hermitian_part(),
            dims,
        }
    }

    pub fn from_pure(psi: &[C64], dims: DimVector) -> Result<Self> {
        if psi.len() != dims.total() {
            return Err(Error::dim(format!(
                "state vector of length {} for dims {:?}",
                psi.len(),
                dims.as_slice()
            )));
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::usage("zero state vector"));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&unit), dims)
    }

    pub fn maximally_mixed(dims: DimVector) -> Self {
        let n = dims.total();
        Self {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Reduced state on `keep` (original subsystem order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = normalize_keep(&self.dims, keep)?;
        if keep.len() == self.dims.len() {
            return Ok(self.clone());
        }
        let m = partial_trace(&self.matrix, &self.dims, &keep)?;
        Ok(Self::from_trusted(m, self.dims.select(&keep)))
    }

    /// Eigenvalues with negatives clamped to zero, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        jacobi(self.matrix.clone())
            .values
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.spectrum().iter().filter(|&&x| x > tol).count()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.0.clone();
        dims.extend_from_slice(&other.dims.0);
        Self {
            matrix: tensor(&self.matrix, &other.matrix),
            dims: DimVector(dims),
        }
    }

    /// `Tr(ρ O)`.
    pub fn expect(&self, op: &ComplexMatrix) -> C64 {
        self.matrix.matmul(op).trace()
    }
}
