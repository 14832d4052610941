//! One-shot capacities of switched channels: Holevo quantity and capacity,
//! coherent information, heralded and corrected switch channels, and sweep
//! tables over noise strength.

mod herald;
mod optimize;
mod sweep;

pub use herald::{
    corrected_pauli_channel, heralded_channel, heralded_pauli_mixtures, switch_effective_channel,
    CorrectedChannel, HeraldedChannel, MINUS, PLUS,
};
pub use optimize::{holevo_capacity, max_coherent_information, nelder_mead, OptimizerConfig};
pub use sweep::{capacity_sweep, Annotation, CapacityScenario, SweepRow, SweepTable, CSV_HEADER};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qcore::{eigh, vn_entropy, ComplexMatrix, DensityMatrix, C64};

/// Probability-weighted input states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    /// Weights must be nonnegative and sum to one within `1e-12`.
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let dim = items
            .first()
            .ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?
            .1
            .dim();
        if items.iter().any(|(p, _)| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDistribution("negative ensemble weight".into()));
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("ensemble weights sum to {total}")));
        }
        if items.iter().any(|(_, r)| r.dim() != dim) {
            return Err(Error::DimensionMismatch("ensemble states of mixed dimension".into()));
        }
        Ok(Self { items })
    }

    /// Equal weights.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let p = 1.0 / states.len() as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }
}

/// Optimum of a capacity search and where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// Bits.
    pub value: f64,
    /// Objective evaluations across all restarts.
    pub evaluations: usize,
    pub restarts: usize,
    /// Maximizing ensemble; a single state for coherent information.
    pub best: Ensemble,
    pub herald_probability: Option<f64>,
}

fn check_input(ch: &KrausChannel, dim: usize) -> Result<()> {
    if ch.d_in() != dim {
        return Err(Error::DimensionMismatch(format!(
            "channel input dimension {} for states of dimension {dim}",
            ch.d_in()
        )));
    }
    Ok(())
}

/// `S(Σ p 𝒩(ρ)) - Σ p S(𝒩(ρ))` in bits.
pub fn holevo_quantity(ch: &KrausChannel, ens: &Ensemble) -> Result<f64> {
    check_input(ch, ens.dim())?;
    let mut avg = ComplexMatrix::zeros(ch.d_out(), ch.d_out());
    let mut conditional = 0.0;
    for (p, rho) in ens.items() {
        let out = ch.apply_operator(rho.matrix())?.hermitian_part();
        conditional += p * vn_entropy(&out)?;
        avg.axpy(C64::new(*p, 0.0), &out);
    }
    Ok(vn_entropy(&avg)? - conditional)
}

/// `S(𝒩(ρ)) - S((𝒩 ⊗ 1)(|ψ_ρ⟩⟨ψ_ρ|))` with `|ψ_ρ⟩ = Σ √λ_m |λ_m⟩|m⟩`.
pub fn coherent_information(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    check_input(ch, d)?;
    let e = eigh(rho.matrix())?;
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    for (m, &lam) in e.values.iter().enumerate() {
        let amp = lam.max(0.0).sqrt();
        for (i, v) in e.vector(m).iter().enumerate() {
            psi[i * d + m] += v * amp;
        }
    }
    let joint_in = ComplexMatrix::outer(&psi, &psi);
    let id = ComplexMatrix::identity(d);
    let mut joint = ComplexMatrix::zeros(ch.d_out() * d, ch.d_out() * d);
    for k in ch.ops() {
        let kk = k.tensor(&id).without_dims();
        joint += &kk.conjugate(&joint_in)?;
    }
    let out = ch.apply_operator(rho.matrix())?.hermitian_part();
    Ok(vn_entropy(&out)? - vn_entropy(&joint.hermitian_part())?)
}

#[cfg(test)]
mod tests;
