//! Single-qubit teleportation over a shared `|Φ+⟩` pair.
//!
//! Qubit order in the three-qubit register is (Alice's input, Alice's half of
//! the pair, Bob's half). Alice measures her two qubits in the Bell basis,
//! sends two classical bits, and Bob applies a Pauli correction.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuantumError, Result};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::sampling;
use crate::states::{self, DensityOperator, PureState, Subsystem};

/// Branches with probability at or below this cannot be forced.
const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
        }
    }

    /// Two-bit message: first bit picks the φ/ψ family, second the sign.
    pub fn bits(self) -> [u8; 2] {
        match self {
            BellLabel::PhiPlus => [0, 0],
            BellLabel::PhiMinus => [0, 1],
            BellLabel::PsiPlus => [1, 0],
            BellLabel::PsiMinus => [1, 1],
        }
    }

    pub fn from_bits(bits: [u8; 2]) -> BellLabel {
        match bits {
            [0, 0] => BellLabel::PhiPlus,
            [0, _] => BellLabel::PhiMinus,
            [_, 0] => BellLabel::PsiPlus,
            _ => BellLabel::PsiMinus,
        }
    }

    pub fn state(self) -> PureState {
        let h = FRAC_1_SQRT_2;
        let amps = match self {
            BellLabel::PhiPlus => [h, 0.0, 0.0, h],
            BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
            BellLabel::PsiPlus => [0.0, h, h, 0.0],
            BellLabel::PsiMinus => [0.0, h, -h, 0.0],
        };
        PureState::from_real(&amps).expect("Bell states are normalised")
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BellLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BellLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown Bell state {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellState {
    pub label: BellLabel,
    pub state: PureState,
}

pub fn bell_states() -> [BellState; 4] {
    BellLabel::ALL.map(|label| BellState {
        label,
        state: label.state(),
    })
}

/// `|φ⟩ ⊗ |Φ+⟩`.
pub fn compose_initial(phi: &PureState) -> Result<PureState> {
    if phi.dim() != 2 {
        return Err(QuantumError::UnsupportedDimension {
            op: "compose_initial",
            expected: 2,
            got: phi.dim(),
        });
    }
    Ok(phi.tensor(&BellLabel::PhiPlus.state()))
}

/// Unnormalised conditional state of Bob's qubit for one Bell outcome:
/// `(⟨B| ⊗ I)|Ψ⟩`.
fn project_branch(state3: &PureState, label: BellLabel) -> Vec<Complex64> {
    let bell = label.state();
    let amps = state3.amplitudes();
    let mut bob = vec![ZERO; 2];
    for (ab, b) in bell.amplitudes().iter().enumerate() {
        for (j, out) in bob.iter_mut().enumerate() {
            *out += b.conj() * amps[ab * 2 + j];
        }
    }
    bob
}

/// Probabilities of Alice's four Bell outcomes, in [`BellLabel::ALL`] order.
pub fn outcome_probabilities(state3: &PureState) -> Result<[f64; 4]> {
    require_three_qubits(state3)?;
    Ok(BellLabel::ALL.map(|l| linalg::norm(&project_branch(state3, l)).powi(2)))
}

fn require_three_qubits(state3: &PureState) -> Result<()> {
    if state3.dim() != 8 {
        return Err(QuantumError::UnsupportedDimension {
            op: "bell_measure_alice",
            expected: 8,
            got: state3.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellMeasurement {
    pub outcome: BellLabel,
    /// Bob's renormalised post-measurement qubit.
    pub bob_post: PureState,
    pub probability: f64,
}

/// Projective Bell-basis measurement on Alice's two qubits. The outcome is
/// drawn with a generator seeded by `seed` unless `forced` names it.
pub fn bell_measure_alice(state3: &PureState, seed: u64, forced: Option<BellLabel>) -> Result<BellMeasurement> {
    let probs = outcome_probabilities(state3)?;
    let outcome = match forced {
        Some(label) => label,
        None => BellLabel::ALL[sampling::draw_index(&probs, &mut sampling::rng_from_seed(seed))],
    };
    let idx = BellLabel::ALL.iter().position(|&l| l == outcome).unwrap();
    let probability = probs[idx];
    if probability <= MIN_BRANCH_PROBABILITY {
        return Err(QuantumError::DegenerateBranch {
            label: outcome.to_string(),
            probability,
        });
    }
    let bob_post = PureState::normalized(project_branch(state3, outcome))?;
    Ok(BellMeasurement {
        outcome,
        bob_post,
        probability,
    })
}

/// Pauli correction Bob applies after learning the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Correction {
    I,
    Z,
    X,
    Y,
}

impl Correction {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Correction::I => ComplexMatrix::identity(2),
            Correction::Z => ComplexMatrix::pauli_z(),
            Correction::X => ComplexMatrix::pauli_x(),
            Correction::Y => ComplexMatrix::pauli_y(),
        }
    }
}

/// Φ+ → I, Φ− → σz, Ψ+ → σx, Ψ− → σy. The Ψ− branch carries `−iσy|φ⟩`,
/// which σy maps to `−i|φ⟩`: the input up to a global phase.
pub fn correction_for(outcome: BellLabel) -> Correction {
    match outcome {
        BellLabel::PhiPlus => Correction::I,
        BellLabel::PhiMinus => Correction::Z,
        BellLabel::PsiPlus => Correction::X,
        BellLabel::PsiMinus => Correction::Y,
    }
}

/// `|⟨x|y⟩|²`, insensitive to global phase.
pub fn fidelity(x: &PureState, y: &PureState) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(QuantumError::Shape {
            op: "fidelity",
            lhs: (x.dim(), 1),
            rhs: (y.dim(), 1),
        });
    }
    Ok(x.inner(y).norm_sqr().min(1.0))
}

/// Everything observable about one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportTranscript {
    #[serde(rename = "input")]
    pub input_state: PureState,
    #[serde(rename = "outcome")]
    pub measured_bell: BellLabel,
    #[serde(rename = "bits", serialize_with = "serialize_bits")]
    pub classical_bits: [u8; 2],
    pub correction: Correction,
    pub probability: f64,
    /// Bob's reduced state before any message arrives.
    pub bob_pre_message: DensityOperator,
    #[serde(rename = "output")]
    pub output_state: PureState,
    pub fidelity: f64,
}

fn serialize_bits<S: serde::Serializer>(bits: &[u8; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}{}", bits[0], bits[1]))
}

/// Runs the full protocol on `phi`, sampling Alice's outcome from `seed`.
pub fn teleport(phi: &PureState, seed: u64) -> Result<TeleportTranscript> {
    teleport_with_outcome(phi, seed, None)
}

pub fn teleport_with_outcome(phi: &PureState, seed: u64, forced: Option<BellLabel>) -> Result<TeleportTranscript> {
    let state3 = compose_initial(phi)?;
    let joint = states::density_from_pure_bipartite(&state3, 4, 2)?;
    let bob_pre_message = states::partial_trace(&joint, Subsystem::B)?;

    let m = bell_measure_alice(&state3, seed, forced)?;
    let classical_bits = m.outcome.bits();
    // Bob only sees the two bits.
    let correction = correction_for(BellLabel::from_bits(classical_bits));
    let output_state = m.bob_post.apply(&correction.matrix())?;
    let fidelity = fidelity(phi, &output_state)?;

    Ok(TeleportTranscript {
        input_state: phi.clone(),
        measured_bell: m.outcome,
        classical_bits,
        correction,
        probability: m.probability,
        bob_pre_message,
        output_state,
        fidelity,
    })
}
