use std::fmt;
use std::str::FromStr;

use super::restriction::{LocalSpan, OperationSets};
use super::{
    dephase_control_process, switch_process, ProcessMatrix, A_IN, A_OUT, B_IN, B_OUT,
    CONTROL_FUTURE, TARGET_FUTURE, TARGET_PAST,
};
use crate::error::{Error, Result};
use crate::qcore::{pauli, ComplexMatrix, C64, I, ONE, ZERO};

/// Witness scenarios: the unrestricted ideal switch and two laboratory
/// operation sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Any operation at every party.
    Ideal,
    /// Target prepared in `H, D, R`; measure-and-prepare instruments at A
    /// (effects `H, V, D, R` by repreparations `H, D, R`); ten unitaries at B;
    /// control measured in the `±` basis.
    Rubino,
    /// Target prepared in `H, V, D, R`; six Pauli-type unitaries at both A
    /// and B; control measured in the `±` basis.
    Goswami,
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ideal" => Ok(Self::Ideal),
            "rubino" => Ok(Self::Rubino),
            "goswami" => Ok(Self::Goswami),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Ideal => "ideal",
            Self::Rubino => "rubino",
            Self::Goswami => "goswami",
        };
        f.write_str(name)
    }
}

fn projector(a: C64, b: C64) -> ComplexMatrix {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let v = [a / n, b / n];
    ComplexMatrix::outer(&v, &v)
}

/// Polarization projectors `H, V, D, R`.
fn polarization_states() -> [ComplexMatrix; 4] {
    [
        projector(ONE, ZERO),
        projector(ZERO, ONE),
        projector(ONE, ONE),
        projector(ONE, I),
    ]
}

/// Born-rule operator `(|U⟩⟩⟨⟨U|)ᵀ` of a unitary instrument.
pub fn unitary_operation(u: &ComplexMatrix) -> ComplexMatrix {
    let d = u.rows();
    let v: Vec<C64> = (0..d)
        .flat_map(|i| (0..d).map(move |o| (i, o)))
        .map(|(i, o)| u[(o, i)])
        .collect();
    ComplexMatrix::outer(&v, &v).transpose()
}

/// Born-rule operator `E ⊗ φᵀ` of measuring effect `E` and preparing `φ`.
pub fn measure_prepare_operation(effect: &ComplexMatrix, prepared: &ComplexMatrix) -> ComplexMatrix {
    effect.tensor(&prepared.transpose()).without_dims()
}

fn half_turn(k: usize) -> ComplexMatrix {
    // (I - iσ_k)/√2
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (&ComplexMatrix::identity(2) - &pauli(k).scale(I)).scale_real(s)
}

fn pauli_sum(j: usize, k: usize) -> ComplexMatrix {
    (&pauli(j) + &pauli(k)).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// Six Pauli-type unitaries `I, σx, σy, σz, (σy+σz)/√2, (σx+σz)/√2`.
pub fn six_pauli_unitaries() -> Vec<ComplexMatrix> {
    vec![
        pauli(0),
        pauli(1),
        pauli(2),
        pauli(3),
        pauli_sum(2, 3),
        pauli_sum(1, 3),
    ]
}

fn ten_unitaries() -> Vec<ComplexMatrix> {
    vec![
        pauli(0),
        pauli(1),
        pauli(2),
        pauli(3),
        half_turn(1),
        half_turn(2),
        half_turn(3),
        pauli_sum(1, 2),
        pauli_sum(2, 3),
        pauli_sum(3, 1),
    ]
}

fn control_readout() -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    [projector(ONE, ONE), projector(ONE, -ONE)]
        .iter()
        .map(|p| p.tensor(&id).without_dims())
        .collect()
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Ideal, Scenario::Rubino, Scenario::Goswami];

    /// Operations per party; `None` means unrestricted.
    pub fn operation_sets(&self) -> Option<OperationSets> {
        let [h, v, d, r] = polarization_states();
        let sets = match self {
            Self::Ideal => return None,
            Self::Rubino => {
                let effects = [&h, &v, &d, &r];
                let preps = [&h, &d, &r];
                let a_ops = effects
                    .iter()
                    .flat_map(|e| preps.iter().map(move |p| measure_prepare_operation(e, p)))
                    .collect();
                OperationSets::new()
                    .with_group(&[TARGET_PAST], vec![h.transpose(), d.transpose(), r.transpose()])
                    .with_group(&[A_IN, A_OUT], a_ops)
                    .with_group(&[B_IN, B_OUT], ten_unitaries().iter().map(unitary_operation).collect())
            }
            Self::Goswami => {
                let unitaries: Vec<ComplexMatrix> =
                    six_pauli_unitaries().iter().map(unitary_operation).collect();
                OperationSets::new()
                    .with_group(
                        &[TARGET_PAST],
                        vec![h.transpose(), v.transpose(), d.transpose(), r.transpose()],
                    )
                    .with_group(&[A_IN, A_OUT], unitaries.clone())
                    .with_group(&[B_IN, B_OUT], unitaries)
            }
        };
        Some(sets.with_group(&[CONTROL_FUTURE, TARGET_FUTURE], control_readout()))
    }

    pub fn restriction(&self, w: &ProcessMatrix) -> Result<Option<LocalSpan>> {
        self.operation_sets()
            .map(|s| LocalSpan::new(w.slots(), &s))
            .transpose()
    }

    /// Qubit switch process with control coherence `v`.
    pub fn process(&self, v: f64) -> Result<ProcessMatrix> {
        dephase_control_process(&switch_process(2), v)
    }
}
