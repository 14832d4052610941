//! Switch-based protocols: commuting/anticommuting gate discrimination, the
//! exchange-evaluation game, the Hadamard promise problem and the two-switch
//! temporal Bell experiment.

mod bell;
mod discrimination;
mod exchange;
mod hadamard;

pub use bell::{temporal_bell_experiment, temporal_bell_joint_state, TemporalBell};
pub use discrimination::{
    commute_or_anticommute, discriminate, random_anticommuting_pair, random_commuting_pair, Discrimination,
    GateRelation,
};
pub use exchange::{ee_encode, ee_game, EEInstance, EEOutcome, MAX_EE_BITS};
pub use hadamard::{
    laboratory_unit_sets, make_promise_instance, solve_hadamard_promise, sylvester_hadamard, verify_promise,
    HadamardInstance,
    HadamardOutcome,
};

use serde::Serializer;

use crate::qcore::ComplexMatrix;

/// Best success probability of a fixed-order circuit for the commuting versus
/// anticommuting task, stored rather than derived.
pub const FIXED_ORDER_DISCRIMINATION_BOUND: f64 = 0.9288;

/// Oracle queries of the best known fixed-order circuit for the `d = 4`
/// Hadamard promise problem, stored rather than derived.
pub const FIXED_ORDER_HADAMARD_QUERIES: usize = 9;

/// Rows of `[re, im]` pairs.
fn serialize_matrix<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        let row: Vec<[f64; 2]> = m.row(i).iter().map(|z| [z.re, z.im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Probability that the control of a (control ⊗ target) pure state is found
/// in `|±⟩` after a Hadamard, `[p(+), p(-)]`.
fn control_pm_probabilities(amps: &[crate::qcore::C64], dt: usize) -> [f64; 2] {
    let (zero, one) = amps.split_at(dt);
    let plus: f64 = zero.iter().zip(one).map(|(a, b)| (a + b).norm_sqr()).sum::<f64>() / 2.0;
    let minus: f64 = zero.iter().zip(one).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / 2.0;
    [plus, minus]
}
