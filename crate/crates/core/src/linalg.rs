//! Dense complex matrices and the few decompositions the rest of the crate
//! needs. Everything here is sized for few-qubit systems (at most 8x8), so
//! the algorithms favour simplicity and accuracy over speed.
//!
//! Composite basis kets `|kl⟩` are ordered with the first label as the most
//! significant digit: in a `d_a * d_b` vector, `|kl⟩` sits at `k * d_b + l`.
//! [`kron`] follows the same convention.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};

/// Tolerance used wherever a caller does not pass one explicitly.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
const JACOBI_OFF_DIAG_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major dense complex matrix. Column vectors are `n x 1` matrices.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixWire> for ComplexMatrix {
    type Error = QuantumError;

    fn try_from(w: MatrixWire) -> Result<Self> {
        let data = w.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(w.rows, w.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixWire {
    fn from(m: ComplexMatrix) -> Self {
        MatrixWire {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(QuantumError::Shape {
                op: "ComplexMatrix::new",
                lhs: (rows, cols),
                rhs: (data.len(), 1),
            });
        }
        if let Some(index) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::NonFinite { index });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
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

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from nested rows. Panics on ragged input; intended for literals.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, data).expect("invalid matrix literal")
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn column(entries: &[Complex64]) -> Self {
        Self::new(entries.len(), 1, entries.to_vec()).expect("invalid column vector")
    }

    /// `|x⟩⟨y|`.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        let mut m = Self::zeros(x.len(), y.len());
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                m[(i, j)] = xi * yj.conj();
            }
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Largest entrywise modulus of `self - other`. Shapes must match.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    /// `max |a - a^dagger|` for square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
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

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Panicking product for call sites whose shapes are fixed by construction.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        matmul(self, rhs).expect("matrix product shape mismatch")
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(QuantumError::Shape {
            op: "matmul",
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            t[(j, i)] = a[(i, j)].conj();
        }
    }
    t
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(QuantumError::NotSquare {
            op: "trace",
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(a.diag().into_iter().sum())
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two plain vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `Σ λ_i v_i v_i^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.col(i);
            out = &out + &ComplexMatrix::outer(&v, &v).scale_real(lambda);
        }
        out
    }
}

/// Unitary acting on coordinates `(p, q)` that diagonalises the Hermitian
/// 2x2 block `[[app, apq], [conj(apq), aqq]]` under `G^dagger A G`.
/// Returned as `[[g_pp, g_pq], [g_qp, g_qq]]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> [[Complex64; 2]; 2] {
    let r = apq.norm();
    let phase = if r > 0.0 { apq / r } else { ONE };
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // diag(1, conj(phase)) makes the block real, then a real rotation zeroes it.
    let cph = phase.conj();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [cph * -s, cph * c],
    ]
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input must be Hermitian within `tol` (max entrywise deviation from its
/// adjoint); it is symmetrised before iterating.
pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(QuantumError::NotSquare {
            op: "hermitian_eig",
            rows: a.rows,
            cols: a.cols,
        });
    }
    let max_deviation = a.hermiticity_deviation();
    if max_deviation > tol {
        return Err(QuantumError::NotHermitian { max_deviation, tol });
    }
    let n = a.rows;
    let mut m = (a + &dagger(a)).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= JACOBI_OFF_DIAG_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let g = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, apq);
                // A <- A G
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = akp * g[0][0] + akq * g[1][0];
                    m[(k, q)] = akp * g[0][1] + akq * g[1][1];
                }
                // A <- G^dagger A
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = g[0][0].conj() * apk + g[1][0].conj() * aqk;
                    m[(q, k)] = g[0][1].conj() * apk + g[1][1].conj() * aqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * g[0][0] + vkq * g[1][0];
                    v[(k, q)] = vkp * g[0][1] + vkq * g[1][1];
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_col(dst, &v.col(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Thin singular value decomposition `a = U diag(s) V^dagger`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: ComplexMatrix,
    /// Nonnegative, descending, length `k`.
    pub singular_values: Vec<f64>,
    /// `cols x k` with orthonormal columns.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let s = ComplexMatrix::from_diag(
            &self
                .singular_values
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        debug_assert_eq!(s.rows(), k);
        &(&self.u * &s) * &dagger(&self.v)
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows < a.cols {
        let t = svd(&dagger(a));
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let cp = work.col(p);
                    let cq = work.col(q);
                    let alpha = norm(&cp).powi(2);
                    let beta = norm(&cq).powi(2);
                    let gamma = inner(&cp, &cq);
                    if gamma.norm() <= JACOBI_OFF_DIAG_TOL * (alpha * beta).sqrt()
                        || gamma.norm() <= f64::MIN_POSITIVE
                    {
                        continue;
                    }
                    rotated = true;
                    let g = jacobi_rotation(alpha, beta, gamma);
                    for k in 0..m {
                        let (xp, xq) = (work[(k, p)], work[(k, q)]);
                        work[(k, p)] = xp * g[0][0] + xq * g[1][0];
                        work[(k, q)] = xp * g[0][1] + xq * g[1][1];
                    }
                    for k in 0..n {
                        let (xp, xq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = xp * g[0][0] + xq * g[1][0];
                        v[(k, q)] = xp * g[0][1] + xq * g[1][1];
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(&work.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let cutoff = f64::EPSILON * scale.max(f64::MIN_POSITIVE) * (m.max(n) as f64);
    let mut u = ComplexMatrix::zeros(m, n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        v_sorted.set_col(dst, &v.col(src));
        if sigma > cutoff {
            let col: Vec<Complex64> = work.col(src).iter().map(|z| z / sigma).collect();
            singular_values.push(sigma);
            basis.push(col);
        } else {
            singular_values.push(0.0);
            basis.push(Vec::new());
            missing.push(dst);
        }
    }
    // Null singular values: complete U with an orthonormal basis.
    for dst in missing {
        let filled: Vec<Vec<Complex64>> = basis.iter().filter(|b| !b.is_empty()).cloned().collect();
        basis[dst] = complete_orthonormal(&filled, m);
    }
    for (j, col) in basis.iter().enumerate() {
        u.set_col(j, col);
    }
    Svd {
        u,
        singular_values,
        v: v_sorted,
    }
}

/// A unit vector orthogonal to every vector in `existing` (assumed orthonormal).
fn complete_orthonormal(existing: &[Vec<Complex64>], dim: usize) -> Vec<Complex64> {
    let mut best: Option<Vec<Complex64>> = None;
    let mut best_norm = 0.0;
    for e in 0..dim {
        let mut cand = vec![ZERO; dim];
        cand[e] = ONE;
        for b in existing {
            let proj = inner(b, &cand);
            for (c, bi) in cand.iter_mut().zip(b) {
                *c -= proj * bi;
            }
        }
        let nrm = norm(&cand);
        if nrm > best_norm {
            best_norm = nrm;
            best = Some(cand);
        }
    }
    let cand = best.expect("dimension must be positive");
    cand.iter().map(|z| z / best_norm).collect()
}

/// Positive-semidefiniteness test: `(min eigenvalue >= -tol, min eigenvalue)`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<(bool, f64)> {
    let eig = hermitian_eig(a, tol)?;
    let min = eig.eigenvalues[0];
    Ok((min >= -tol, min))
}
