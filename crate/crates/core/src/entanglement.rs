//! Schmidt decomposition of bipartite pure states and the positive partial
//! transpose test for mixed states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::linalg::{self, ComplexMatrix, DEFAULT_TOL};
use crate::states::{self, DensityOperator, PureState, Subsystem};

/// Coefficients at or below this are treated as zero when counting the
/// Schmidt number.
pub const SCHMIDT_THRESHOLD: f64 = 1e-10;

/// `|ψ⟩ = Σ_α √p_α |α_A⟩ ⊗ |α_B⟩`.
///
/// All `min(d_a, d_b)` coefficients are kept, including zeros, so the
/// reconstruction is exact; `schmidt_number` counts those above
/// [`SCHMIDT_THRESHOLD`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    /// The weights `p_α` (squared singular values), descending.
    pub coefficients: Vec<f64>,
    pub schmidt_number: usize,
    /// Columns are `|α_A⟩`.
    pub basis_a: ComplexMatrix,
    /// Columns are `|α_B⟩`.
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// Rebuilds the state vector from the decomposition.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let d_a = self.basis_a.rows();
        let d_b = self.basis_b.rows();
        let mut out = vec![Complex64::new(0.0, 0.0); d_a * d_b];
        for (alpha, &p) in self.coefficients.iter().enumerate() {
            let term = linalg::kron_vec(&self.basis_a.col(alpha), &self.basis_b.col(alpha));
            for (o, t) in out.iter_mut().zip(term) {
                *o += t * p.sqrt();
            }
        }
        out
    }
}

fn check_split(psi: &PureState, d_a: usize, d_b: usize) -> Result<()> {
    if d_a == 0 || d_b == 0 || d_a * d_b != psi.dim() {
        return Err(QuantumError::DimsMismatch {
            d_a,
            d_b,
            dim: psi.dim(),
        });
    }
    Ok(())
}

/// Reshapes `ψ` into the `d_a x d_b` coefficient matrix `ψ_kl`.
fn coefficient_matrix(psi: &PureState, d_b: usize) -> ComplexMatrix {
    let d_a = psi.dim() / d_b;
    ComplexMatrix::new(d_a, d_b, psi.amplitudes().to_vec()).expect("amplitudes are finite")
}

/// Schmidt decomposition from the SVD `ψ_kl = U S V†`: `|α_A⟩ = u_α`,
/// `|α_B⟩ = conj(v_α)`, `p_α = s_α²`.
///
/// Each `|α_A⟩` is rephased so its first non-negligible amplitude is real
/// positive, with `|α_B⟩` absorbing the compensating phase.
pub fn schmidt(psi: &PureState, d_a: usize, d_b: usize) -> Result<SchmidtDecomposition> {
    check_split(psi, d_a, d_b)?;
    let svd = linalg::svd(&coefficient_matrix(psi, d_b));
    let k = svd.singular_values.len();
    let mut basis_a = ComplexMatrix::zeros(d_a, k);
    let mut basis_b = ComplexMatrix::zeros(d_b, k);
    for alpha in 0..k {
        let u = svd.u.col(alpha);
        let v: Vec<Complex64> = svd.v.col(alpha).iter().map(|z| z.conj()).collect();
        let phase = u
            .iter()
            .find(|z| z.norm() > 1e-12)
            .map(|z| z / z.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        let u: Vec<Complex64> = u.iter().map(|z| z * phase.conj()).collect();
        let v: Vec<Complex64> = v.iter().map(|z| z * phase).collect();
        basis_a.set_col(alpha, &u);
        basis_b.set_col(alpha, &v);
    }
    let coefficients: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    let schmidt_number = coefficients.iter().filter(|&&p| p > SCHMIDT_THRESHOLD).count();
    Ok(SchmidtDecomposition {
        coefficients,
        schmidt_number,
        basis_a,
        basis_b,
    })
}

/// Pure-state entanglement via the Schmidt number.
pub fn is_entangled_pure(psi: &PureState, d_a: usize, d_b: usize) -> Result<bool> {
    Ok(schmidt(psi, d_a, d_b)?.schmidt_number > 1)
}

/// Pure-state entanglement via the purity of the reduced qubit state.
/// Only defined when subsystem A is a qubit.
pub fn is_entangled_pure_via_purity(psi: &PureState, d_a: usize, d_b: usize) -> Result<bool> {
    Ok(reduced_purity(psi, d_a, d_b)? < 1.0 - DEFAULT_TOL)
}

/// Purity of `tr_B |ψ⟩⟨ψ|` for a qubit A subsystem.
pub fn reduced_purity(psi: &PureState, d_a: usize, d_b: usize) -> Result<f64> {
    if d_a != 2 {
        return Err(QuantumError::UnsupportedDimension {
            op: "is_entangled_pure_via_purity",
            expected: 2,
            got: d_a,
        });
    }
    check_split(psi, d_a, d_b)?;
    let rho = states::density_from_pure_bipartite(psi, d_a, d_b)?;
    states::purity(&states::partial_trace(&rho, Subsystem::A)?)
}

/// `(ρ^{T_B} ≥ 0, min eigenvalue of ρ^{T_B})` at the default tolerance.
pub fn ppt_check(rho: &DensityOperator) -> Result<(bool, f64)> {
    ppt_check_with_tol(rho, DEFAULT_TOL)
}

pub fn ppt_check_with_tol(rho: &DensityOperator, tol: f64) -> Result<(bool, f64)> {
    let pt = states::partial_transpose(rho)?;
    linalg::is_psd(&pt, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Separable,
    Entangled,
    /// PPT holds but the dimensions are outside the range where PPT is
    /// sufficient for separability.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub verdict: Verdict,
    pub min_pt_eigenvalue: f64,
    pub dims: (usize, usize),
}

/// PPT is necessary for separability in general, and sufficient for 2x2,
/// 2x3 and 3x2 systems.
pub fn separability_decision(rho: &DensityOperator) -> Result<SeparabilityVerdict> {
    separability_decision_with_tol(rho, DEFAULT_TOL)
}

pub fn separability_decision_with_tol(rho: &DensityOperator, tol: f64) -> Result<SeparabilityVerdict> {
    let dims = rho.dims().ok_or(QuantumError::MissingDims {
        op: "separability_decision",
    })?;
    let (is_ppt, min_pt_eigenvalue) = ppt_check_with_tol(rho, tol)?;
    let ppt_is_sufficient = matches!(dims, (2, 2) | (2, 3) | (3, 2));
    let verdict = match (is_ppt, ppt_is_sufficient) {
        (false, _) => Verdict::Entangled,
        (true, true) => Verdict::Separable,
        (true, false) => Verdict::Inconclusive,
    };
    Ok(SeparabilityVerdict {
        verdict,
        min_pt_eigenvalue,
        dims,
    })
}

/// `p |ψ₋⟩⟨ψ₋| + (1 − p) I/4`, tagged 2x2.
pub fn werner_state(p: f64) -> Result<DensityOperator> {
    let singlet = states::density_from_pure(&crate::bell::singlet());
    let m = &singlet.matrix().scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityOperator::bipartite(m, 2, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{density_from_pure_bipartite, qubit_from_angles};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_6};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn vec_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn schmidt_product_state() {
        let h = FRAC_1_SQRT_2;
        let psi = PureState::from_real(&[h, h, 0.0, 0.0]).unwrap();
        let s = schmidt(&psi, 2, 2).unwrap();
        assert_eq!(s.schmidt_number, 1);
        assert!(close(&s.coefficients, &[1.0, 0.0], 1e-12));
        assert!(vec_close(&s.reconstruct(), psi.amplitudes(), 1e-12));
        assert!(!is_entangled_pure(&psi, 2, 2).unwrap());
    }

    #[test]
    fn schmidt_already_in_schmidt_form() {
        let t = FRAC_PI_6;
        let psi = PureState::from_real(&[t.cos(), 0.0, 0.0, t.sin()]).unwrap();
        let s = schmidt(&psi, 2, 2).unwrap();
        assert_eq!(s.schmidt_number, 2);
        assert!(close(&s.coefficients, &[0.75, 0.25], 1e-12));
    }

    #[test]
    fn schmidt_singlet_matches_reduced_spectrum() {
        let psi = crate::bell::singlet();
        let s = schmidt(&psi, 2, 2).unwrap();
        assert!(close(&s.coefficients, &[0.5, 0.5], 1e-12));
        assert_eq!(s.schmidt_number, 2);
        assert!(vec_close(&s.reconstruct(), psi.amplitudes(), 1e-12));
        // oracle: spectrum of tr_B |ψ⟩⟨ψ| = ½I
        let rho_a = states::partial_trace(&density_from_pure_bipartite(&psi, 2, 2).unwrap(), Subsystem::A).unwrap();
        let eig = linalg::hermitian_eig(rho_a.matrix(), DEFAULT_TOL).unwrap();
        assert!(close(&eig.eigenvalues, &[0.5, 0.5], 1e-12));
    }

    #[test]
    fn schmidt_phase_convention() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let psi = crate::random::pure_state(6, &mut rng);
        let s = schmidt(&psi, 2, 3).unwrap();
        for alpha in 0..s.coefficients.len() {
            let first = s.basis_a.col(alpha).into_iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
        assert!(vec_close(&s.reconstruct(), psi.amplitudes(), 1e-12));
    }

    #[test]
    fn schmidt_errors() {
        let psi = qubit_from_angles(0.1, 0.2);
        assert!(matches!(schmidt(&psi, 2, 2), Err(QuantumError::DimsMismatch { .. })));
    }

    #[test]
    fn entangled_pure_examples() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        for _ in 0..20 {
            let a = crate::random::pure_state(2, &mut rng);
            let b = crate::random::pure_state(2, &mut rng);
            let prod = a.tensor(&b);
            assert!(!is_entangled_pure(&prod, 2, 2).unwrap());
            assert!(!is_entangled_pure_via_purity(&prod, 2, 2).unwrap());
        }
        assert!(is_entangled_pure(&crate::bell::singlet(), 2, 2).unwrap());
        let t: f64 = 1e-3;
        let weak = PureState::from_real(&[t.cos(), 0.0, 0.0, t.sin()]).unwrap();
        assert!(t.sin().powi(2) > SCHMIDT_THRESHOLD);
        assert!(is_entangled_pure(&weak, 2, 2).unwrap());
    }

    #[test]
    fn entangled_via_purity_examples() {
        let singlet = crate::bell::singlet();
        assert!(is_entangled_pure_via_purity(&singlet, 2, 2).unwrap());
        assert!(reduced_purity(&singlet, 2, 2).unwrap().abs() < 1e-12);
        let t = FRAC_PI_6;
        let psi = PureState::from_real(&[t.cos(), 0.0, 0.0, t.sin()]).unwrap();
        assert!((reduced_purity(&psi, 2, 2).unwrap() - 0.25).abs() < 1e-12);
        let psi3 = crate::random::pure_state(6, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1));
        assert!(matches!(
            is_entangled_pure_via_purity(&psi3, 3, 2),
            Err(QuantumError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn ppt_examples() {
        let r1 = states::density_from_pure(&qubit_from_angles(0.4, 0.1));
        let r2 = states::density_from_pure(&qubit_from_angles(1.3, 2.0));
        let (ok, min) = ppt_check(&DensityOperator::tensor(&r1, &r2)).unwrap();
        assert!(ok && min >= -1e-9);

        let h = FRAC_1_SQRT_2;
        let phi_plus = PureState::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let (ok, min) = ppt_check(&density_from_pure_bipartite(&phi_plus, 2, 2).unwrap()).unwrap();
        assert!(!ok);
        assert!((min + 0.5).abs() < 1e-12);

        // PT spectrum of the Werner state: (1 − 3p)/4 and (1 + p)/4 (x3)
        let (ok, min) = ppt_check(&werner_state(0.5).unwrap()).unwrap();
        assert!(!ok);
        assert!((min + 0.125).abs() < 1e-12);

        assert!(matches!(
            ppt_check(&DensityOperator::maximally_mixed(4)),
            Err(QuantumError::MissingDims { .. })
        ));
    }

    #[test]
    fn separability_examples() {
        let mixed = DensityOperator::maximally_mixed(4).with_dims(2, 2).unwrap();
        assert_eq!(separability_decision(&mixed).unwrap().verdict, Verdict::Separable);
        let singlet = density_from_pure_bipartite(&crate::bell::singlet(), 2, 2).unwrap();
        assert_eq!(separability_decision(&singlet).unwrap().verdict, Verdict::Entangled);
        for i in 0..=5 {
            let p = 0.2 * i as f64;
            let v = separability_decision(&werner_state(p).unwrap()).unwrap();
            let oracle = (1.0 - 3.0 * p) / 4.0;
            assert!((v.min_pt_eigenvalue - oracle.min((1.0 + p) / 4.0)).abs() < 1e-12);
            let expected = if p <= 1.0 / 3.0 + 1e-9 { Verdict::Separable } else { Verdict::Entangled };
            assert_eq!(v.verdict, expected, "p = {p}");
        }
    }

    #[test]
    fn separability_inconclusive_outside_small_dims() {
        let mixed = DensityOperator::maximally_mixed(9).with_dims(3, 3).unwrap();
        let v = separability_decision(&mixed).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert_eq!(v.dims, (3, 3));

        let mut amps = vec![Complex64::new(0.0, 0.0); 9];
        amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[8] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ent = density_from_pure_bipartite(&PureState::new(amps).unwrap(), 3, 3).unwrap();
        assert_eq!(separability_decision(&ent).unwrap().verdict, Verdict::Entangled);

        let qutrit_qubit = DensityOperator::maximally_mixed(6).with_dims(3, 2).unwrap();
        assert_eq!(separability_decision(&qutrit_qubit).unwrap().verdict, Verdict::Separable);
    }

    #[test]
    fn verdict_json() {
        let v = separability_decision(&werner_state(1.0).unwrap()).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with(r#"{"verdict":"entangled","min_pt_eigenvalue":"#));
        assert!(s.ends_with(r#""dims":[2,2]}"#));
    }
}
