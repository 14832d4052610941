use serde::{Deserialize, Serialize};

use super::KrausChannel;
use crate::error::{Error, Result};
use crate::qcore::pauli;

const SUM_TOL: f64 = 1e-12;

/// Weights `(p0, p1, p2, p3)` of `ρ ↦ Σ p_i σ_i ρ σ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliDistribution([f64; 4]);

impl PauliDistribution {
    /// Entries nonnegative and summing to one within `1e-12`.
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(format!("negative weight in {probs:?}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Ok(Self(probs))
    }

    pub fn identity() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    /// `(1 - 3q/4, q/4, q/4, q/4)`; `q = 1` is fully depolarizing.
    pub fn depolarizing(q: f64) -> Result<Self> {
        unit_interval("depolarizing strength", q)?;
        Ok(Self([1.0 - 0.75 * q, q / 4.0, q / 4.0, q / 4.0]))
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        unit_interval("bit-flip probability", p)?;
        Ok(Self([1.0 - p, p, 0.0, 0.0]))
    }

    pub fn phase_flip(q: f64) -> Result<Self> {
        unit_interval("phase-flip probability", q)?;
        Ok(Self([1.0 - q, 0.0, 0.0, q]))
    }

    /// `ρ ↦ (σ1 ρ σ1 + σ2 ρ σ2) / 2`.
    pub fn entanglement_breaking() -> Self {
        Self([0.0, 0.5, 0.5, 0.0])
    }

    /// Deterministic conjugation by `σ_k`.
    pub fn pauli_unitary(k: usize) -> Self {
        let mut p = [0.0; 4];
        p[k] = 1.0;
        Self(p)
    }

    pub fn probs(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Kraus operators `{√p_i σ_i}`, zero-weight terms omitted.
    pub fn channel(&self) -> KrausChannel {
        let ops = (0..4)
            .filter(|&i| self.0[i] > 0.0)
            .map(|i| pauli(i).scale_real(self.0[i].sqrt()))
            .collect();
        KrausChannel::new(ops).expect("Pauli weights sum to one")
    }

    /// Distribution of the composed channel; Pauli products are abelian up to phase.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i ^ j] += self.0[i] * other.0[j];
            }
        }
        Self(out)
    }
}

/// Builds a Kraus channel from a Pauli distribution.
pub fn pauli_channel(p: &PauliDistribution) -> KrausChannel {
    p.channel()
}

fn unit_interval(what: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("{what} {x} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, kraus_to_choi};
    use crate::qcore::random::{random_density, random_simplex, seeded};
    use crate::qcore::{ComplexMatrix, DensityMatrix, PureState, C64};

    #[test]
    fn named_channel_weights() {
        assert_eq!(PauliDistribution::depolarizing(0.0).unwrap(), PauliDistribution::identity());
        assert_eq!(PauliDistribution::depolarizing(1.0).unwrap().probs(), [0.25; 4]);
        assert_eq!(PauliDistribution::phase_flip(0.3).unwrap().probs(), [0.7, 0.0, 0.0, 0.3]);
        assert!(PauliDistribution::bit_flip(1.5).is_err());
        assert!(PauliDistribution::new([0.5, 0.5, 0.1, -0.1]).is_err());
        assert!(PauliDistribution::new([0.5, 0.5, 0.1, 0.0]).is_err());
    }

    #[test]
    fn fully_depolarizing_maps_pure_to_mixed() {
        let ch = PauliDistribution::depolarizing(1.0).unwrap().channel();
        let psi = PureState::bloch(0.7, 2.1);
        let out = ch.apply(&psi.density()).unwrap();
        assert!(out.matrix().approx_eq(DensityMatrix::maximally_mixed(2).matrix(), 1e-15));
    }

    #[test]
    fn half_phase_flip_dephases_plus() {
        let ch = PauliDistribution::new([0.5, 0.0, 0.0, 0.5]).unwrap().channel();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::qubit(C64::new(s, 0.0), C64::new(s, 0.0)).unwrap();
        let out = ch.apply(&plus.density()).unwrap();
        assert!(out.matrix().approx_eq(DensityMatrix::maximally_mixed(2).matrix(), 1e-15));
    }

    #[test]
    fn entanglement_breaking_choi_is_ppt() {
        let c = kraus_to_choi(&PauliDistribution::entanglement_breaking().channel());
        let pt = c.matrix().partial_transpose(&[1]).unwrap();
        assert!(crate::qcore::eigh(&pt).unwrap().min_value() > -1e-12);
    }

    #[test]
    fn composition_matches_convolution() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let p = PauliDistribution::new(to4(random_simplex(4, &mut rng))).unwrap();
            let q = PauliDistribution::new(to4(random_simplex(4, &mut rng))).unwrap();
            let rho = random_density(2, &mut rng);
            let direct = compose(&q.channel(), &p.channel()).unwrap().apply(&rho).unwrap();
            let conv = p.convolve(&q).channel().apply(&rho).unwrap();
            let swapped = compose(&p.channel(), &q.channel()).unwrap().apply(&rho).unwrap();
            assert!(direct.matrix().approx_eq(conv.matrix(), 1e-12));
            assert!(direct.matrix().approx_eq(swapped.matrix(), 1e-9));
        }
    }

    #[test]
    fn pauli_channels_are_unital() {
        let mut rng = seeded(12);
        let p = PauliDistribution::new(to4(random_simplex(4, &mut rng))).unwrap();
        let id = ComplexMatrix::identity(2).scale_real(0.5);
        let out = p.channel().apply_operator(&id).unwrap();
        assert!(out.approx_eq(&id, 1e-15));
    }

    fn to4(v: Vec<f64>) -> [f64; 4] {
        v.try_into().unwrap()
    }
}
