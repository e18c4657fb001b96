//! Pure states, density operators, the qubit Bloch ball, and the bipartite
//! partial trace / partial transpose.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::linalg::{self, ComplexMatrix, DEFAULT_TOL, ONE, ZERO};

/// Normalised state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateWire", into = "PureStateWire")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PureStateWire {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<PureStateWire> for PureState {
    type Error = QuantumError;

    fn try_from(w: PureStateWire) -> Result<Self> {
        if w.dim != w.amplitudes.len() {
            return Err(QuantumError::Shape {
                op: "PureState",
                lhs: (w.dim, 1),
                rhs: (w.amplitudes.len(), 1),
            });
        }
        PureState::new(w.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<PureState> for PureStateWire {
    fn from(s: PureState) -> Self {
        PureStateWire {
            dim: s.dim(),
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl PureState {
    /// Accepts amplitudes whose squared norm is 1 within `1e-9`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QuantumError::Shape {
                op: "PureState",
                lhs: (1, 1),
                rhs: (0, 1),
            });
        }
        if let Some(index) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QuantumError::NonFinite { index });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > DEFAULT_TOL {
            return Err(QuantumError::Validation {
                what: "squared norm",
                measured: norm_sqr,
                expected: 1.0,
                tol: DEFAULT_TOL,
            });
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(QuantumError::Validation {
                what: "norm",
                measured: n,
                expected: 1.0,
                tol: DEFAULT_TOL,
            });
        }
        PureState::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        PureState::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        PureState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Applies a unitary. Fails on shape mismatch or if the result is not normalised.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<PureState> {
        let out = linalg::matmul(u, &ComplexMatrix::column(&self.amplitudes))?;
        PureState::new(out.col(0))
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }
}

/// `|0⟩ cos θ + |1⟩ e^{iφ} sin θ`.
pub fn qubit_from_angles(theta: f64, phi: f64) -> PureState {
    PureState {
        amplitudes: vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::from_polar(theta.sin(), phi),
        ],
    }
}

/// Which half of a bipartite system an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Trace-one, Hermitian, positive semidefinite operator, optionally tagged
/// with a bipartite split `(d_a, d_b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityWire", into = "DensityWire")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Option<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DensityWire {
    #[serde(flatten)]
    matrix: ComplexMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<[usize; 2]>,
}

impl TryFrom<DensityWire> for DensityOperator {
    type Error = QuantumError;

    fn try_from(w: DensityWire) -> Result<Self> {
        DensityOperator::new(w.matrix, w.dims.map(|[a, b]| (a, b)))
    }
}

impl From<DensityOperator> for DensityWire {
    fn from(d: DensityOperator) -> Self {
        DensityWire {
            matrix: d.matrix,
            dims: d.dims.map(|(a, b)| [a, b]),
        }
    }
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity, all at `1e-9`.
    pub fn new(matrix: ComplexMatrix, dims: Option<(usize, usize)>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QuantumError::NotSquare {
                op: "DensityOperator",
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if let Some((d_a, d_b)) = dims {
            if d_a == 0 || d_b == 0 || d_a * d_b != matrix.rows() {
                return Err(QuantumError::DimsMismatch {
                    d_a,
                    d_b,
                    dim: matrix.rows(),
                });
            }
        }
        let tr = linalg::trace(&matrix)?;
        if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
            return Err(QuantumError::Validation {
                what: "trace",
                measured: tr.re,
                expected: 1.0,
                tol: DEFAULT_TOL,
            });
        }
        let (psd, min_eigenvalue) = linalg::is_psd(&matrix, DEFAULT_TOL)?;
        if !psd {
            return Err(QuantumError::NotPositive {
                min_eigenvalue,
                tol: DEFAULT_TOL,
            });
        }
        Ok(DensityOperator { matrix, dims })
    }

    pub fn bipartite(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(matrix, Some((d_a, d_b)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            dims: None,
        }
    }

    /// `ρ_a ⊗ ρ_b`, tagged with dims `(dim a, dim b)`.
    pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Self {
        DensityOperator {
            matrix: linalg::kron(&a.matrix, &b.matrix),
            dims: Some((a.dim(), b.dim())),
        }
    }

    /// `Σ p_i ρ_i`. Weights must be nonnegative and sum to one; every
    /// component must share the same dimension. Dims are taken from the first.
    pub fn mixture(components: &[(f64, &DensityOperator)]) -> Result<Self> {
        let (_, first) = components.first().ok_or(QuantumError::Validation {
            what: "mixture weight total",
            measured: 0.0,
            expected: 1.0,
            tol: DEFAULT_TOL,
        })?;
        let d = first.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, rho) in components {
            if *p < 0.0 {
                return Err(QuantumError::Validation {
                    what: "mixture weight",
                    measured: *p,
                    expected: 0.0,
                    tol: 0.0,
                });
            }
            if rho.dim() != d {
                return Err(QuantumError::Shape {
                    op: "mixture",
                    lhs: (d, d),
                    rhs: (rho.dim(), rho.dim()),
                });
            }
            acc = &acc + &rho.matrix.scale_real(*p);
        }
        DensityOperator::new(acc, first.dims)
    }

    pub fn with_dims(self, d_a: usize, d_b: usize) -> Result<Self> {
        DensityOperator::new(self.matrix, Some((d_a, d_b)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn require_dims(&self, op: &'static str) -> Result<(usize, usize)> {
        self.dims.ok_or(QuantumError::MissingDims { op })
    }

    /// `Re tr(ρ M)`.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        Ok(linalg::trace(&linalg::matmul(&self.matrix, observable)?)?.re)
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &PureState) -> DensityOperator {
    DensityOperator {
        matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        dims: None,
    }
}

/// Same as [`density_from_pure`], tagged with a bipartite split.
pub fn density_from_pure_bipartite(psi: &PureState, d_a: usize, d_b: usize) -> Result<DensityOperator> {
    if d_a * d_b != psi.dim() {
        return Err(QuantumError::DimsMismatch {
            d_a,
            d_b,
            dim: psi.dim(),
        });
    }
    Ok(DensityOperator {
        matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()),
        dims: Some((d_a, d_b)),
    })
}

/// Real 3-vector inside the closed unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlochWire", into = "BlochWire")]
pub struct BlochVector {
    n: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct BlochWire {
    n: [f64; 3],
}

impl TryFrom<BlochWire> for BlochVector {
    type Error = QuantumError;

    fn try_from(w: BlochWire) -> Result<Self> {
        BlochVector::new(w.n)
    }
}

impl From<BlochVector> for BlochWire {
    fn from(b: BlochVector) -> Self {
        BlochWire { n: b.n }
    }
}

impl BlochVector {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        if n.iter().any(|x| !x.is_finite()) {
            return Err(QuantumError::NonFinite {
                index: n.iter().position(|x| !x.is_finite()).unwrap(),
            });
        }
        let norm = norm3(&n);
        if norm > 1.0 + DEFAULT_TOL {
            return Err(QuantumError::OutsideBlochBall { norm });
        }
        Ok(BlochVector { n })
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.n)
    }
}

/// Unit vector selecting a spin measurement direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct MeasurementAxis {
    a: [f64; 3],
}

impl TryFrom<[f64; 3]> for MeasurementAxis {
    type Error = QuantumError;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        MeasurementAxis::new(a)
    }
}

impl From<MeasurementAxis> for [f64; 3] {
    fn from(m: MeasurementAxis) -> Self {
        m.a
    }
}

impl MeasurementAxis {
    /// Requires `|a| = 1` within `1e-9`.
    pub fn new(a: [f64; 3]) -> Result<Self> {
        let norm = norm3(&a);
        if !norm.is_finite() || (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(QuantumError::Validation {
                what: "axis norm",
                measured: norm,
                expected: 1.0,
                tol: DEFAULT_TOL,
            });
        }
        Ok(MeasurementAxis { a })
    }

    /// Axis at polar angle `theta` from ẑ, rotated toward x̂ (the x–z plane).
    pub fn in_xz_plane(theta: f64) -> Self {
        MeasurementAxis {
            a: [theta.sin(), 0.0, theta.cos()],
        }
    }

    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        MeasurementAxis {
            a: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    pub fn x() -> Self {
        MeasurementAxis { a: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        MeasurementAxis { a: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        MeasurementAxis { a: [0.0, 0.0, 1.0] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.a
    }

    pub fn dot(&self, other: &MeasurementAxis) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    /// `â·σ⃗`.
    pub fn pauli_operator(&self) -> ComplexMatrix {
        pauli_combination(&self.a)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn pauli_combination(n: &[f64; 3]) -> ComplexMatrix {
    let x = ComplexMatrix::pauli_x().scale_real(n[0]);
    let y = ComplexMatrix::pauli_y().scale_real(n[1]);
    let z = ComplexMatrix::pauli_z().scale_real(n[2]);
    &(&x + &y) + &z
}

/// `½(I + n⃗·σ⃗)`.
pub fn bloch_to_density(n: &BlochVector) -> DensityOperator {
    let m = &ComplexMatrix::identity(2) + &pauli_combination(&n.n);
    DensityOperator {
        matrix: m.scale_real(0.5),
        dims: None,
    }
}

fn require_qubit(rho: &DensityOperator, op: &'static str) -> Result<()> {
    if rho.dim() != 2 {
        return Err(QuantumError::UnsupportedDimension {
            op,
            expected: 2,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// `n_i = tr(ρ σ_i)`.
pub fn density_to_bloch(rho: &DensityOperator) -> Result<BlochVector> {
    require_qubit(rho, "density_to_bloch")?;
    let n = [
        rho.expectation(&ComplexMatrix::pauli_x())?,
        rho.expectation(&ComplexMatrix::pauli_y())?,
        rho.expectation(&ComplexMatrix::pauli_z())?,
    ];
    // Validated density operators have |n| <= 1 up to rounding.
    let norm = norm3(&n);
    if norm > 1.0 + DEFAULT_TOL {
        return Err(QuantumError::OutsideBlochBall { norm });
    }
    Ok(BlochVector { n })
}

/// Qubit purity `μ = 2 tr(ρ²) − 1`, which equals `|n⃗|²`.
pub fn purity(rho: &DensityOperator) -> Result<f64> {
    require_qubit(rho, "purity")?;
    let sq = linalg::matmul(rho.matrix(), rho.matrix())?;
    Ok(2.0 * linalg::trace(&sq)?.re - 1.0)
}

pub fn linear_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(1.0 - purity(rho)?)
}

/// Reduced density operator on the kept subsystem.
pub fn partial_trace(rho: &DensityOperator, keep: Subsystem) -> Result<DensityOperator> {
    let (d_a, d_b) = rho.require_dims("partial_trace")?;
    DensityOperator::new(partial_trace_matrix(rho.matrix(), d_a, d_b, keep)?, None)
}

/// Partial trace of any `d_a*d_b` square matrix:
/// `out[k, m] = Σ_l a[k d_b + l, m d_b + l]` when keeping A, and the
/// symmetric contraction over A when keeping B.
pub fn partial_trace_matrix(m: &ComplexMatrix, d_a: usize, d_b: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    if !m.is_square() || d_a * d_b != m.rows() {
        return Err(QuantumError::DimsMismatch {
            d_a,
            d_b,
            dim: m.rows(),
        });
    }
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(d_a, d_a);
            for k in 0..d_a {
                for mm in 0..d_a {
                    out[(k, mm)] = (0..d_b).map(|l| m[(k * d_b + l, mm * d_b + l)]).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(d_b, d_b);
            for l in 0..d_b {
                for n in 0..d_b {
                    out[(l, n)] = (0..d_a).map(|k| m[(k * d_b + l, k * d_b + n)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

/// Transposes the B indices only. The result can fail positivity, so it is
/// returned as a plain matrix.
pub fn partial_transpose(rho: &DensityOperator) -> Result<ComplexMatrix> {
    let (d_a, d_b) = rho.require_dims("partial_transpose")?;
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for k in 0..d_a {
        for l in 0..d_b {
            for mm in 0..d_a {
                for n in 0..d_b {
                    out[(k * d_b + n, mm * d_b + l)] = m[(k * d_b + l, mm * d_b + n)];
                }
            }
        }
    }
    Ok(out)
}

/// `P_k(â) = ½(I + (−1)^k â·σ⃗)`. `outcome` must be 0 or 1.
pub fn projector_from_axis(axis: &MeasurementAxis, outcome: u8) -> DensityOperator {
    assert!(outcome < 2, "outcome must be 0 or 1");
    let sign = if outcome == 0 { 1.0 } else { -1.0 };
    let m = &ComplexMatrix::identity(2) + &axis.pauli_operator().scale_real(sign);
    DensityOperator {
        matrix: m.scale_real(0.5),
        dims: None,
    }
}

/// `(|0⟩ + |1⟩)/√2`.
pub fn plus_state() -> PureState {
    PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows)
    }

    #[test]
    fn qubit_from_angles_examples() {
        assert_eq!(qubit_from_angles(0.0, 1.234).amplitudes(), &[ONE, ZERO]);
        let h = FRAC_1_SQRT_2;
        let s = qubit_from_angles(FRAC_PI_4, 0.0);
        assert!((s.amplitudes()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(h, 0.0)).norm() < 1e-15);
        let s = qubit_from_angles(FRAC_PI_4, FRAC_PI_2);
        assert!((s.amplitudes()[1] - c(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn density_from_pure_examples() {
        let rho0 = density_from_pure(&PureState::basis(2, 0));
        assert_eq!(rho0.matrix(), &real(&[vec![1.0, 0.0], vec![0.0, 0.0]]));
        let plus = density_from_pure(&plus_state());
        assert!(plus.matrix().approx_eq(&real(&[vec![0.5, 0.5], vec![0.5, 0.5]]), 1e-15));

        let (theta, phi) = (0.37, 1.9);
        let rho = density_from_pure(&qubit_from_angles(theta, phi));
        let s2 = (2.0 * theta).sin();
        let c2 = (2.0 * theta).cos();
        let expected = ComplexMatrix::from_rows(&[
            vec![c(1.0 + c2, 0.0), Complex64::from_polar(s2, -phi)],
            vec![Complex64::from_polar(s2, phi), c(1.0 - c2, 0.0)],
        ])
        .scale_real(0.5);
        assert!(rho.matrix().approx_eq(&expected, 1e-12));
        assert!((purity(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let err = PureState::from_real(&[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, QuantumError::Validation { what: "squared norm", .. }));
    }

    #[test]
    fn bloch_to_density_examples() {
        let center = bloch_to_density(&BlochVector::new([0.0; 3]).unwrap());
        assert_eq!(center.matrix(), &ComplexMatrix::identity(2).scale_real(0.5));
        let up = bloch_to_density(&BlochVector::new([0.0, 0.0, 1.0]).unwrap());
        assert_eq!(up.matrix(), &real(&[vec![1.0, 0.0], vec![0.0, 0.0]]));
        let x = bloch_to_density(&BlochVector::new([1.0, 0.0, 0.0]).unwrap());
        assert_eq!(x.matrix(), &real(&[vec![0.5, 0.5], vec![0.5, 0.5]]));
        assert!(matches!(
            BlochVector::new([1.0, 0.1, 0.0]),
            Err(QuantumError::OutsideBlochBall { .. })
        ));
    }

    #[test]
    fn density_to_bloch_examples() {
        let n = density_to_bloch(&DensityOperator::maximally_mixed(2)).unwrap();
        assert_eq!(n.components(), [0.0, 0.0, 0.0]);
        let rho = DensityOperator::new(real(&[vec![0.75, 0.0], vec![0.0, 0.25]]), None).unwrap();
        assert_eq!(density_to_bloch(&rho).unwrap().components(), [0.0, 0.0, 0.5]);

        let (theta, phi) = (1.1, -0.4);
        let n = density_to_bloch(&density_from_pure(&qubit_from_angles(theta, phi)))
            .unwrap()
            .components();
        let s2 = (2.0 * theta).sin();
        let expected = [s2 * phi.cos(), s2 * phi.sin(), (2.0 * theta).cos()];
        for i in 0..3 {
            assert!((n[i] - expected[i]).abs() < 1e-12);
        }
        assert!(matches!(
            density_to_bloch(&DensityOperator::maximally_mixed(4)),
            Err(QuantumError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn purity_and_linear_entropy() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert_eq!(purity(&mixed).unwrap(), 0.0);
        assert_eq!(linear_entropy(&mixed).unwrap(), 1.0);
        let rho = DensityOperator::new(real(&[vec![0.75, 0.0], vec![0.0, 0.25]]), None).unwrap();
        // 2(9/16 + 1/16) − 1
        assert!((purity(&rho).unwrap() - 0.25).abs() < 1e-15);
        assert!((linear_entropy(&rho).unwrap() - 0.75).abs() < 1e-15);
        let pure = density_from_pure(&qubit_from_angles(0.2, 0.3));
        assert!(linear_entropy(&pure).unwrap().abs() < 1e-12);
        assert!(purity(&DensityOperator::maximally_mixed(3)).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let r1 = density_from_pure(&qubit_from_angles(0.3, 0.8));
        let r2 = bloch_to_density(&BlochVector::new([0.1, -0.2, 0.3]).unwrap());
        let prod = DensityOperator::tensor(&r1, &r2);
        assert!(partial_trace(&prod, Subsystem::A).unwrap().matrix().approx_eq(r1.matrix(), 1e-15));
        assert!(partial_trace(&prod, Subsystem::B).unwrap().matrix().approx_eq(r2.matrix(), 1e-15));

        let h = FRAC_1_SQRT_2;
        let phi_plus = PureState::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let rho = density_from_pure_bipartite(&phi_plus, 2, 2).unwrap();
        let red = partial_trace(&rho, Subsystem::B).unwrap();
        assert!(red.matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));

        assert_eq!(
            partial_trace(&DensityOperator::maximally_mixed(4), Subsystem::A).unwrap_err(),
            QuantumError::MissingDims { op: "partial_trace" }
        );
    }

    #[test]
    fn partial_trace_qutrit_qubit_shapes() {
        let rho = DensityOperator::maximally_mixed(6).with_dims(3, 2).unwrap();
        assert_eq!(partial_trace(&rho, Subsystem::A).unwrap().dim(), 3);
        assert_eq!(partial_trace(&rho, Subsystem::B).unwrap().dim(), 2);
    }

    #[test]
    fn partial_transpose_examples() {
        let r1 = density_from_pure(&qubit_from_angles(0.3, 0.8));
        let r2 = density_from_pure(&qubit_from_angles(1.0, -2.0));
        let prod = DensityOperator::tensor(&r1, &r2);
        let expected = linalg::kron(r1.matrix(), &r2.matrix().transpose());
        assert_eq!(partial_transpose(&prod).unwrap(), expected);

        let diag = DensityOperator::bipartite(
            ComplexMatrix::from_diag(&[c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)]),
            2,
            2,
        )
        .unwrap();
        assert_eq!(&partial_transpose(&diag).unwrap(), diag.matrix());

        let h = FRAC_1_SQRT_2;
        let phi_plus = PureState::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let pt = partial_transpose(&density_from_pure_bipartite(&phi_plus, 2, 2).unwrap()).unwrap();
        // ½(|00⟩⟨00| + |01⟩⟨10| + |10⟩⟨01| + |11⟩⟨11|)
        let oracle = real(&[
            vec![0.5, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.0],
            vec![0.0, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.5],
        ]);
        assert!(pt.approx_eq(&oracle, 1e-15));
        let (_, min) = linalg::is_psd(&pt, DEFAULT_TOL).unwrap();
        assert!((min + 0.5).abs() < 1e-12);
    }

    #[test]
    fn projector_examples() {
        let z0 = projector_from_axis(&MeasurementAxis::z(), 0);
        let z1 = projector_from_axis(&MeasurementAxis::z(), 1);
        assert_eq!(z0.matrix(), &real(&[vec![1.0, 0.0], vec![0.0, 0.0]]));
        assert_eq!(z1.matrix(), &real(&[vec![0.0, 0.0], vec![0.0, 1.0]]));
        let x0 = projector_from_axis(&MeasurementAxis::x(), 0);
        assert_eq!(x0.matrix(), &real(&[vec![0.5, 0.5], vec![0.5, 0.5]]));

        let axis = MeasurementAxis::from_spherical(0.7, 2.5);
        let p0 = projector_from_axis(&axis, 0);
        let p1 = projector_from_axis(&axis, 1);
        assert!((p0.matrix() + p1.matrix()).approx_eq(&ComplexMatrix::identity(2), 1e-15));
        assert!((p0.matrix() * p0.matrix()).approx_eq(p0.matrix(), 1e-12));
        assert!(MeasurementAxis::new([1.0, 1.0, 0.0]).is_err());
        assert!(MeasurementAxis::in_xz_plane(PI).dot(&MeasurementAxis::z()) + 1.0 < 1e-15);
    }

    #[test]
    fn density_validation_failures() {
        let bad_trace = real(&[vec![0.5, 0.0], vec![0.0, 0.48]]);
        let err = DensityOperator::new(bad_trace, None).unwrap_err();
        assert!(err.to_string().contains("trace = 0.98"));
        let not_psd = real(&[vec![1.5, 0.0], vec![0.0, -0.5]]);
        assert!(matches!(
            DensityOperator::new(not_psd, None),
            Err(QuantumError::NotPositive { .. })
        ));
        assert!(matches!(
            DensityOperator::new(ComplexMatrix::identity(4).scale_real(0.25), Some((3, 2))),
            Err(QuantumError::DimsMismatch { .. })
        ));
    }

    #[test]
    fn json_encodings() {
        let psi = qubit_from_angles(FRAC_PI_4, 0.0);
        let s = serde_json::to_string(&psi).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"amplitudes":[["#));
        assert_eq!(serde_json::from_str::<PureState>(&s).unwrap(), psi);

        let rho = DensityOperator::maximally_mixed(4).with_dims(2, 2).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert!(s.contains(r#""dims":[2,2]"#));
        assert_eq!(serde_json::from_str::<DensityOperator>(&s).unwrap(), rho);

        let plain = serde_json::to_string(&DensityOperator::maximally_mixed(2)).unwrap();
        assert!(!plain.contains("dims"));

        let b: BlochVector = serde_json::from_str(r#"{"n":[0.0,0.6,0.8]}"#).unwrap();
        assert_eq!(b.components(), [0.0, 0.6, 0.8]);
        assert!(serde_json::from_str::<BlochVector>(r#"{"n":[1.0,0.6,0.8]}"#).is_err());
    }
}
