//! CHSH analysis: outcome probabilities and correlations for spin
//! measurements on two-qubit states, the classical bound from deterministic
//! local strategies, and a seeded Monte Carlo estimator.
//!
//! Outcome `k ∈ {0, 1}` corresponds to the spin value `(−1)^k`. The CHSH
//! combination used throughout is
//!
//! ```text
//! S = C(a2, b2) − C(a1, b1) − C(a1, b2) − C(a2, b1)
//! ```

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::linalg::{self, DEFAULT_TOL};
use crate::sampling;
use crate::states::{projector_from_axis, DensityOperator, MeasurementAxis, PureState};

/// `|S| > CLASSICAL_BOUND + DEFAULT_TOL` counts as a violation.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> PureState {
    PureState::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("singlet is normalised")
}

/// The singlet as a density operator with dims `(2, 2)`.
pub fn singlet_density() -> DensityOperator {
    crate::states::density_from_pure_bipartite(&singlet(), 2, 2).expect("dims match")
}

fn require_two_qubits(rho: &DensityOperator) -> Result<()> {
    match rho.dims() {
        Some((2, 2)) => Ok(()),
        Some((d_a, d_b)) => Err(QuantumError::DimsMismatch { d_a, d_b, dim: 4 }),
        None if rho.dim() == 4 => Err(QuantumError::MissingDims { op: "joint_probability" }),
        None => Err(QuantumError::UnsupportedDimension {
            op: "joint_probability",
            expected: 4,
            got: rho.dim(),
        }),
    }
}

fn probability_unchecked(rho: &DensityOperator, a: &MeasurementAxis, b: &MeasurementAxis, k: u8, l: u8) -> f64 {
    let pa = projector_from_axis(a, k);
    let pb = projector_from_axis(b, l);
    let joint = linalg::kron(pa.matrix(), pb.matrix());
    let p = rho.expectation(&joint).expect("4x4 shapes agree");
    p.clamp(0.0, 1.0)
}

/// `p_kl(â, b̂) = tr(ρ P_k(â) ⊗ P_l(b̂))` for a two-qubit state.
pub fn joint_probability(rho: &DensityOperator, a: &MeasurementAxis, b: &MeasurementAxis, k: u8, l: u8) -> Result<f64> {
    require_two_qubits(rho)?;
    Ok(probability_unchecked(rho, a, b, k, l))
}

/// The four outcome probabilities in the order (0,0), (0,1), (1,0), (1,1).
pub fn outcome_distribution(rho: &DensityOperator, a: &MeasurementAxis, b: &MeasurementAxis) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    Ok([
        probability_unchecked(rho, a, b, 0, 0),
        probability_unchecked(rho, a, b, 0, 1),
        probability_unchecked(rho, a, b, 1, 0),
        probability_unchecked(rho, a, b, 1, 1),
    ])
}

/// Closed form `¼[1 − (−1)^{k+l} â·b̂]` for the singlet.
pub fn singlet_probability_closed_form(a: &MeasurementAxis, b: &MeasurementAxis, k: u8, l: u8) -> f64 {
    let sign = if (k + l).is_multiple_of(2) { 1.0 } else { -1.0 };
    0.25 * (1.0 - sign * a.dot(b))
}

/// `C(â, b̂) = Σ_kl p_kl (−1)^{k+l}`.
pub fn correlation(rho: &DensityOperator, a: &MeasurementAxis, b: &MeasurementAxis) -> Result<f64> {
    let [p00, p01, p10, p11] = outcome_distribution(rho, a, b)?;
    Ok(p00 - p01 - p10 + p11)
}

/// Alice's axes `a1`, `a2` and Bob's axes `b1`, `b2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSetting {
    pub a1: MeasurementAxis,
    pub a2: MeasurementAxis,
    pub b1: MeasurementAxis,
    pub b2: MeasurementAxis,
}

impl ChshSetting {
    /// Rotates all four axes rigidly about ŷ, staying in the x–z plane when
    /// they start there.
    pub fn rotated_about_y(&self, angle: f64) -> ChshSetting {
        let rot = |m: &MeasurementAxis| {
            let [x, y, z] = m.components();
            let (s, c) = angle.sin_cos();
            MeasurementAxis::new([c * x + s * z, y, -s * x + c * z]).expect("rotation preserves norm")
        };
        ChshSetting {
            a1: rot(&self.a1),
            a2: rot(&self.a2),
            b1: rot(&self.b1),
            b2: rot(&self.b2),
        }
    }
}

/// Coplanar x–z axes at angles from ẑ: `a2 = 0°`, `b1 = 45°`, `a1 = 90°`,
/// `b2 = 135°`. Each consecutive pair is 45° apart, so on the singlet
/// `C11 = C12 = C21 = −1/√2` and `C22 = +1/√2`.
pub fn optimal_setting() -> ChshSetting {
    // Exact components rather than sin/cos of the angles, so no 1e-17 residue.
    let h = FRAC_1_SQRT_2;
    let axis = |a: [f64; 3]| MeasurementAxis::new(a).expect("unit axis");
    ChshSetting {
        a2: axis([0.0, 0.0, 1.0]),
        b1: axis([h, 0.0, h]),
        a1: axis([1.0, 0.0, 0.0]),
        b2: axis([h, 0.0, -h]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub c11: f64,
    pub c12: f64,
    pub c21: f64,
    pub c22: f64,
    pub s_value: f64,
    pub violates_classical: bool,
}

impl ChshReport {
    pub fn from_correlations(c11: f64, c12: f64, c21: f64, c22: f64) -> Self {
        let s_value = c22 - c11 - c12 - c21;
        ChshReport {
            c11,
            c12,
            c21,
            c22,
            s_value,
            violates_classical: s_value.abs() > CLASSICAL_BOUND + DEFAULT_TOL,
        }
    }
}

pub fn chsh_value(rho: &DensityOperator, setting: &ChshSetting) -> Result<ChshReport> {
    Ok(ChshReport::from_correlations(
        correlation(rho, &setting.a1, &setting.b1)?,
        correlation(rho, &setting.a1, &setting.b2)?,
        correlation(rho, &setting.a2, &setting.b1)?,
        correlation(rho, &setting.a2, &setting.b2)?,
    ))
}

/// Fixed ±1 answers for each of the four local settings: a local hidden
/// variable model reduced to the outcomes it induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub a1_out: i8,
    pub a2_out: i8,
    pub b1_out: i8,
    pub b2_out: i8,
}

impl DeterministicStrategy {
    /// `F = a2·b2 − a1·b1 − a1·b2 − a2·b1`.
    pub fn chsh_functional(&self) -> i32 {
        let (a1, a2, b1, b2) = (
            self.a1_out as i32,
            self.a2_out as i32,
            self.b1_out as i32,
            self.b2_out as i32,
        );
        a2 * b2 - a1 * b1 - a1 * b2 - a2 * b1
    }

    /// All 16 strategies. Bit `i` of the index set to 1 means −1, with bits
    /// assigned to `a1, a2, b1, b2` from most to least significant.
    pub fn all() -> Vec<DeterministicStrategy> {
        let v = |bit: u8| if bit == 0 { 1 } else { -1 };
        (0u8..16)
            .map(|i| DeterministicStrategy {
                a1_out: v((i >> 3) & 1),
                a2_out: v((i >> 2) & 1),
                b1_out: v((i >> 1) & 1),
                b2_out: v(i & 1),
            })
            .collect()
    }
}

/// Maximum of `F` over the 16 deterministic strategies, with the first
/// strategy attaining it.
pub fn lhv_max_chsh() -> (f64, DeterministicStrategy) {
    let mut best = None;
    for s in DeterministicStrategy::all() {
        let f = s.chsh_functional();
        if best.is_none_or(|(bf, _)| f > bf) {
            best = Some((f, s));
        }
    }
    let (f, s) = best.expect("strategy set is nonempty");
    (f as f64, s)
}

/// Expected `F` for a probability distribution over [`DeterministicStrategy::all`].
pub fn lhv_mixture_value(weights: &[f64; 16]) -> f64 {
    DeterministicStrategy::all()
        .iter()
        .zip(weights)
        .map(|(s, w)| w * s.chsh_functional() as f64)
        .sum()
}

/// Monte Carlo outcome statistics for one pair of axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledCorrelation {
    pub empirical_correlation: f64,
    /// Counts for (0,0), (0,1), (1,0), (1,1).
    pub counts: [u64; 4],
}

/// Draws `n` outcome pairs from the joint distribution with a private
/// generator seeded by `seed`.
pub fn sample_outcomes(
    rho: &DensityOperator,
    a: &MeasurementAxis,
    b: &MeasurementAxis,
    n: u64,
    seed: u64,
) -> Result<SampledCorrelation> {
    if n == 0 {
        return Err(QuantumError::Validation {
            what: "sample count",
            measured: 0.0,
            expected: 1.0,
            tol: 0.0,
        });
    }
    let probs = outcome_distribution(rho, a, b)?;
    let mut rng = sampling::rng_from_seed(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        counts[sampling::draw_index(&probs, &mut rng)] += 1;
    }
    let signed = counts[0] as f64 - counts[1] as f64 - counts[2] as f64 + counts[3] as f64;
    Ok(SampledCorrelation {
        empirical_correlation: signed / n as f64,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{density_from_pure_bipartite, DensityOperator};
    use crate::linalg::ComplexMatrix;
    use std::f64::consts::SQRT_2;

    fn z() -> MeasurementAxis {
        MeasurementAxis::z()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn singlet_amplitudes_and_density() {
        let s = singlet();
        let re: Vec<f64> = s.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(re, vec![0.0, 0.7071067811865476, -0.7071067811865476, 0.0]);
        let rho = singlet_density();
        assert!((rho.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);

        // ¼(I⊗I − σx⊗σx − σy⊗σy − σz⊗σz)
        let (x, y, zz) = (ComplexMatrix::pauli_x(), ComplexMatrix::pauli_y(), ComplexMatrix::pauli_z());
        let sum = &(&linalg::kron(&x, &x) + &linalg::kron(&y, &y)) + &linalg::kron(&zz, &zz);
        let expected = (&ComplexMatrix::identity(4) - &sum).scale_real(0.25);
        assert!(rho.matrix().approx_eq(&expected, 1e-15));

        let red = crate::states::partial_trace(&rho, crate::states::Subsystem::A).unwrap();
        assert!(red.matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn joint_probability_examples() {
        let rho = singlet_density();
        assert!(joint_probability(&rho, &z(), &z(), 0, 0).unwrap().abs() < 1e-15);
        assert!((joint_probability(&rho, &z(), &z(), 0, 1).unwrap() - 0.5).abs() < 1e-15);
        let up = crate::states::density_from_pure(&PureState::basis(2, 0));
        let prod = DensityOperator::tensor(&up, &up);
        assert_eq!(joint_probability(&prod, &z(), &z(), 0, 0).unwrap(), 1.0);
        assert!(matches!(
            joint_probability(&DensityOperator::maximally_mixed(4), &z(), &z(), 0, 0),
            Err(QuantumError::MissingDims { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(singlet_probability_closed_form(&z(), &z(), 0, 0), 0.0);
        for (k, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(singlet_probability_closed_form(&z(), &MeasurementAxis::x(), k, l), 0.25);
        }
        let down = MeasurementAxis::new([0.0, 0.0, -1.0]).unwrap();
        assert_eq!(singlet_probability_closed_form(&z(), &down, 0, 0), 0.5);
    }

    #[test]
    fn correlation_examples() {
        let rho = singlet_density();
        let a = MeasurementAxis::from_spherical(0.3, 1.2);
        assert!((correlation(&rho, &a, &a).unwrap() + 1.0).abs() < 1e-12);
        assert!(correlation(&rho, &MeasurementAxis::x(), &z()).unwrap().abs() < 1e-15);
        let h = FRAC_1_SQRT_2;
        let phi_plus = density_from_pure_bipartite(&PureState::from_real(&[h, 0.0, 0.0, h]).unwrap(), 2, 2).unwrap();
        assert!((correlation(&phi_plus, &z(), &z()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chsh_optimal_violation() {
        let set = optimal_setting();
        assert_eq!(set.a2.components(), [0.0, 0.0, 1.0]);
        let b1 = set.b1.components();
        assert!((b1[0] - FRAC_1_SQRT_2).abs() < 1e-15 && b1[1] == 0.0 && (b1[2] - FRAC_1_SQRT_2).abs() < 1e-15);
        let r = chsh_value(&singlet_density(), &set).unwrap();
        assert!((r.s_value - 2.0 * SQRT_2).abs() < 1e-12);
        for c in [r.c11, r.c12, r.c21] {
            assert!((c + FRAC_1_SQRT_2).abs() < 1e-12);
        }
        assert!((r.c22 - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r.violates_classical);
    }

    #[test]
    fn optimal_setting_matches_angles() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        let set = optimal_setting();
        for (axis, deg) in [(set.a2, 0.0), (set.b1, FRAC_PI_4), (set.a1, FRAC_PI_2), (set.b2, 3.0 * FRAC_PI_4)] {
            let want = MeasurementAxis::in_xz_plane(deg).components();
            for (x, y) in axis.components().iter().zip(want) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn chsh_degenerate_settings() {
        let a = MeasurementAxis::from_spherical(0.9, 0.1);
        let same = ChshSetting { a1: a, a2: a, b1: a, b2: a };
        let r = chsh_value(&singlet_density(), &same).unwrap();
        assert!((r.s_value - 2.0).abs() < 1e-12);
        assert!(!r.violates_classical);

        let mixed = DensityOperator::tensor(&DensityOperator::maximally_mixed(2), &DensityOperator::maximally_mixed(2));
        let r = chsh_value(&mixed, &optimal_setting()).unwrap();
        assert!(r.s_value.abs() < 1e-15);
    }

    #[test]
    fn lhv_enumeration() {
        let all = DeterministicStrategy::all();
        assert_eq!(all.len(), 16);
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 16);
        let (max, arg) = lhv_max_chsh();
        assert_eq!(max, 2.0);
        assert_eq!(arg.chsh_functional(), 2);
        assert!(all.iter().all(|s| s.chsh_functional().abs() == 2));

        let plus = DeterministicStrategy { a1_out: 1, a2_out: 1, b1_out: 1, b2_out: 1 };
        assert_eq!(plus.chsh_functional(), -2);
        let flipped = DeterministicStrategy { a1_out: -1, ..plus };
        assert_eq!(flipped.chsh_functional(), 2);
    }

    #[test]
    fn sampling_examples() {
        let rho = singlet_density();
        for seed in [0, 1, 42, u64::MAX] {
            let s = sample_outcomes(&rho, &z(), &z(), 1000, seed).unwrap();
            assert_eq!(s.counts[0], 0);
            assert_eq!(s.counts[3], 0);
            assert_eq!(s.counts.iter().sum::<u64>(), 1000);
            assert_eq!(s.empirical_correlation, -1.0);
        }
        let n = 100_000;
        let s = sample_outcomes(&rho, &MeasurementAxis::x(), &z(), n, 7).unwrap();
        assert!(s.empirical_correlation.abs() <= 4.0 / (n as f64).sqrt());

        let a = sample_outcomes(&rho, &MeasurementAxis::x(), &z(), 1, 123).unwrap();
        let b = sample_outcomes(&rho, &MeasurementAxis::x(), &z(), 1, 123).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 1);
        assert!(sample_outcomes(&rho, &z(), &z(), 0, 1).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = chsh_value(&singlet_density(), &optimal_setting()).unwrap();
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        for key in ["c11", "c12", "c21", "c22", "s_value", "violates_classical"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let setting: ChshSetting =
            serde_json::from_str(r#"{"a1":[1,0,0],"a2":[0,0,1],"b1":[0,1,0],"b2":[0,0,-1]}"#).unwrap();
        assert_eq!(setting.b1, MeasurementAxis::y());
        assert!(serde_json::from_str::<ChshSetting>(r#"{"a1":[2,0,0],"a2":[0,0,1],"b1":[0,1,0],"b2":[0,0,-1]}"#).is_err());
    }
}
