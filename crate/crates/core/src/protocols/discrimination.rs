use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qcore::random::random_unitary;
use crate::qcore::{pauli, ComplexMatrix, DensityMatrix, PureState, C64};
use crate::switch::{switch_output, SwitchSpec};

const PROMISE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateRelation {
    Commuting,
    Anticommuting,
}

/// Control readout after the switch: `p(+)` heralds commuting gates, `p(-)`
/// anticommuting ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrimination {
    pub relation: GateRelation,
    pub p_plus: f64,
    pub p_minus: f64,
    pub visibility: f64,
}

impl Discrimination {
    pub fn success_probability(&self) -> f64 {
        self.p_plus.max(self.p_minus)
    }
}

/// Ideal switch discrimination with control `|+⟩`.
pub fn commute_or_anticommute(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    psi_t: &PureState,
) -> Result<Discrimination> {
    discriminate(u1, u2, psi_t, 1.0)
}

/// Switch discrimination with the control coherence scaled by `visibility`.
///
/// Under the promise the winning probability is `(1 + v)/2`; without
/// dephasing one outcome must occur with probability at least `1 - 1e-6`.
pub fn discriminate(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    psi_t: &PureState,
    visibility: f64,
) -> Result<Discrimination> {
    if visibility <= 0.0 {
        return Err(Error::OutOfRange("a fully dephased control carries no order information".into()));
    }
    let spec = SwitchSpec::kraus(KrausChannel::unitary(u1.clone())?, KrausChannel::unitary(u2.clone())?)?
        .with_visibility(visibility)?;
    let out = switch_output(&spec, &psi_t.density())?;
    let [p_plus, p_minus] = plus_minus(&out, spec.target_dim());
    let expected = (1.0 + visibility) / 2.0;
    let relation = if (p_plus - expected).abs() <= PROMISE_TOL {
        GateRelation::Commuting
    } else if (p_minus - expected).abs() <= PROMISE_TOL {
        GateRelation::Anticommuting
    } else {
        return Err(Error::PromiseViolated(format!(
            "outcome probabilities {p_plus:.6} and {p_minus:.6}, neither equals {expected:.6}"
        )));
    };
    Ok(Discrimination {
        relation,
        p_plus,
        p_minus,
        visibility,
    })
}

/// `[p(+), p(-)]` for the control of a control ⊗ target state.
fn plus_minus(rho: &DensityMatrix, d: usize) -> [f64; 2] {
    let m = rho.matrix();
    let (mut diag, mut coh) = (0.0, 0.0);
    for i in 0..d {
        diag += m[(i, i)].re + m[(i + d, i + d)].re;
        coh += m[(i, i + d)].re;
    }
    [0.5 * diag + coh, 0.5 * diag - coh]
}

/// `V diag(e^{iα}, e^{iβ}) V†` and a second unitary diagonal in the same basis.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R) -> (ComplexMatrix, ComplexMatrix) {
    let v = random_unitary(2, rng);
    let mut diag = || {
        let phases = [rng.random::<f64>() * TAU, rng.random::<f64>() * TAU];
        let d = ComplexMatrix::diagonal(&phases.map(|a| C64::from_polar(1.0, a)));
        &(&v * &d) * &v.dagger()
    };
    let a = diag();
    (a, diag())
}

/// `e^{iα} n·σ` and `e^{iβ} m·σ` with `n ⊥ m`, which anticommute.
pub fn random_anticommuting_pair<R: Rng + ?Sized>(rng: &mut R) -> (ComplexMatrix, ComplexMatrix) {
    let frame = random_unitary(2, rng);
    // rotating σ_x and σ_y by one unitary keeps them orthogonal Bloch axes
    let axis = |k: usize, rng: &mut R| {
        (&(&frame * &pauli(k)) * &frame.dagger()).scale(C64::from_polar(1.0, rng.random::<f64>() * TAU))
    };
    let a = axis(1, rng);
    (a, axis(2, rng))
}
