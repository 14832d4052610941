use serde::Serialize;

use super::serialize_matrix;
use crate::error::Result;
use crate::qcore::{chsh_max, concurrence, pauli, ComplexMatrix, DensityMatrix, PureState, C64, I, ZERO};

/// Ideal statistics of two switches fed by path-entangled controls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalBell {
    /// CHSH value of the control pair before the switches act.
    pub control_bell: f64,
    /// Target pair after an even-parity diagonal readout of the controls.
    #[serde(serialize_with = "serialize_matrix_of")]
    pub target_state: DensityMatrix,
    pub target_bell: f64,
    pub target_concurrence: f64,
    /// Fidelity of the target pair to `(|ll⟩ - |rr⟩)/√2`.
    pub target_fidelity: f64,
    /// Joint control outcome probabilities, indexed `[first][second]` with `0 = +`.
    pub control_outcomes: [[f64; 2]; 2],
}

fn serialize_matrix_of<S: serde::Serializer>(rho: &DensityMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serialize_matrix(rho.matrix(), s)
}

/// `U_A = σ_z` and `U_B = (I + iσ_x)/√2`.
fn local_gates() -> (ComplexMatrix, ComplexMatrix) {
    let ub = (&ComplexMatrix::identity(2) + &pauli(1).scale(I)).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    (pauli(3), ub)
}

/// One switch on (control, target): `|0⟩` runs `U_A` first, `|1⟩` runs `U_B` first.
fn local_switch() -> ComplexMatrix {
    let (ua, ub) = local_gates();
    let first = &ub * &ua;
    let second = &ua * &ub;
    ComplexMatrix::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
        (true, true) => first[(i, j)],
        (false, false) => second[(i - 2, j - 2)],
        _ => ZERO,
    })
}

/// `(|00⟩ - |11⟩)/√2`.
fn control_pair() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![C64::new(s, 0.0), ZERO, ZERO, C64::new(-s, 0.0)], vec![2, 2]).expect("normalized")
}

/// Joint state of (control 1, control 2, target 1, target 2) after both
/// switches, from targets `|00⟩`.
///
/// Each switch acts on its own control and target only.
pub fn temporal_bell_joint_state() -> Result<PureState> {
    let input = control_pair().tensor(&PureState::basis(4, 0));
    // (c1, t1, c2, t2) ordering, then back to (c1, c2, t1, t2)
    let local = local_switch().tensor(&local_switch()).with_dims(vec![2, 2, 2, 2])?;
    let joint = local.permute_subsystems(&[0, 2, 1, 3])?;
    let amps = joint.apply(input.amplitudes())?;
    PureState::new(amps, vec![2, 2, 2, 2])
}

fn diagonal(sign: f64) -> [C64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(s, 0.0), C64::new(sign * s, 0.0)]
}

pub fn temporal_bell_experiment() -> Result<TemporalBell> {
    let joint = temporal_bell_joint_state()?;
    let amps = joint.amplitudes();
    let mut control_outcomes = [[0.0; 2]; 2];
    let mut even = ComplexMatrix::zeros(4, 4);
    let signs = [1.0, -1.0];
    for (a, &sa) in signs.iter().enumerate() {
        for (b, &sb) in signs.iter().enumerate() {
            let (ea, eb) = (diagonal(sa), diagonal(sb));
            // target amplitudes conditioned on the control pair |±±⟩
            let t: Vec<C64> = (0..4)
                .map(|k| {
                    (0..4).fold(ZERO, |acc, c| {
                        acc + (ea[c >> 1] * eb[c & 1]).conj() * amps[c * 4 + k]
                    })
                })
                .collect();
            let p: f64 = t.iter().map(|z| z.norm_sqr()).sum();
            control_outcomes[a][b] = p;
            if a == b {
                even += &ComplexMatrix::outer(&t, &t);
            }
        }
    }
    let p_even = even.trace().re;
    let target_state = DensityMatrix::with_dims(even.scale_real(1.0 / p_even).hermitian_part(), vec![2, 2])?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let l = [C64::new(s, 0.0), C64::new(0.0, s)];
    let r = [C64::new(s, 0.0), C64::new(0.0, -s)];
    let ideal: Vec<C64> = (0..4)
        .map(|k| (l[k >> 1] * l[k & 1] - r[k >> 1] * r[k & 1]) * s)
        .collect();
    let ideal = PureState::new(ideal, vec![2, 2])?;
    Ok(TemporalBell {
        control_bell: chsh_max(&control_pair().density())?,
        target_bell: chsh_max(&target_state)?,
        target_concurrence: concurrence(&target_state)?,
        target_fidelity: target_state.fidelity_with_pure(&ideal),
        target_state,
        control_outcomes,
    })
}
