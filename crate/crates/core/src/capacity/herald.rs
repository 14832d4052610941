use crate::channels::{KrausChannel, PauliDistribution};
use crate::error::{Error, Result};
use crate::qcore::{pauli, ComplexMatrix, C64};
use crate::switch::{aux_maps, ChannelPair, PauliMixture, SwitchSpec};

const HERALD_TOL: f64 = 1e-9;

/// Control readout `|+⟩`.
pub const PLUS: [C64; 2] = [
    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
];
/// Control readout `|-⟩`.
pub const MINUS: [C64; 2] = [
    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
];

/// Target → control ⊗ target channel of the switch with its control input
/// fixed, followed by control dephasing.
pub fn switch_effective_channel(spec: &SwitchSpec) -> Result<KrausChannel> {
    let (np, nq) = spec.channels().kraus_pair();
    let d = spec.target_dim();
    let [c0, c1] = spec.control_amplitudes();
    let mut ops = Vec::with_capacity(np.ops().len() * nq.ops().len());
    for kq in nq.ops() {
        for kp in np.ops() {
            let first = kq * kp;
            let second = kp * kq;
            ops.push(ComplexMatrix::from_fn(2 * d, d, |i, j| {
                if i < d {
                    first[(i, j)] * c0
                } else {
                    second[(i - d, j)] * c1
                }
            }));
        }
    }
    let v = spec.visibility();
    if v < 1.0 {
        // control dephasing with Kraus pair √((1±v)/2) (I or Z) ⊗ I
        let id = ComplexMatrix::identity(d);
        let keep = ComplexMatrix::identity(2 * d).scale_real(((1.0 + v) / 2.0).sqrt());
        let flip = pauli(3).tensor(&id).without_dims().scale_real(((1.0 - v) / 2.0).sqrt());
        ops = ops
            .iter()
            .flat_map(|k| [&keep * k, &flip * k])
            .collect();
    }
    KrausChannel::new(ops)
}

/// Post-selected target channel and its input-independent success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedChannel {
    pub channel: KrausChannel,
    pub probability: f64,
}

/// Conditions the effective switch channel on the control outcome `outcome`.
pub fn heralded_channel(spec: &SwitchSpec, outcome: &[C64; 2]) -> Result<HeraldedChannel> {
    let norm = (outcome[0].norm_sqr() + outcome[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!("control outcome has norm {norm}")));
    }
    let eff = switch_effective_channel(spec)?;
    let d = spec.target_dim();
    let ops: Vec<ComplexMatrix> = eff
        .ops()
        .iter()
        .map(|k| {
            ComplexMatrix::from_fn(d, d, |i, j| {
                outcome[0].conj() * k[(i, j)] + outcome[1].conj() * k[(i + d, j)]
            })
        })
        .collect();
    let mut completeness = ComplexMatrix::zeros(d, d);
    for m in &ops {
        completeness += &(&m.dagger() * m);
    }
    let probability = completeness.trace().re / d as f64;
    if probability < HERALD_TOL {
        return Err(Error::ZeroProbability);
    }
    let spread = completeness.max_abs_diff(&ComplexMatrix::identity(d).scale_real(probability));
    if spread > HERALD_TOL {
        return Err(Error::InputDependentHerald(spread));
    }
    let s = 1.0 / probability.sqrt();
    let channel = KrausChannel::new(ops.iter().map(|m| m.scale_real(s)).collect())?;
    Ok(HeraldedChannel {
        channel,
        probability,
    })
}

fn pauli_pair(spec: &SwitchSpec) -> Result<(PauliDistribution, PauliDistribution)> {
    match spec.channels() {
        ChannelPair::Pauli { p, q } => Ok((*p, *q)),
        ChannelPair::Kraus { .. } => Err(Error::Unsupported(
            "closed-form heralding needs a Pauli channel pair".into(),
        )),
    }
}

/// Unnormalized target maps heralded by `|+⟩` and `|-⟩`:
/// `½(ε₊ + ε₋) ± v√(γ(1-γ)) (ε₊ - ε₋)`.
pub fn heralded_pauli_mixtures(spec: &SwitchSpec) -> Result<[PauliMixture; 2]> {
    let (p, q) = pauli_pair(spec)?;
    let aux = aux_maps(&p, &q);
    let c = spec.visibility() * (spec.gamma() * (1.0 - spec.gamma())).sqrt();
    let mix = |sign: f64| {
        PauliMixture(std::array::from_fn(|k| {
            let (a, b) = (aux.eps_plus.0[k], aux.eps_minus.0[k]);
            0.5 * (a + b) + sign * c * (a - b)
        }))
    };
    Ok([mix(1.0), mix(-1.0)])
}

/// Deterministic channel obtained by reading the control in the `±` basis
/// and undoing the dominant Pauli of each outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedChannel {
    pub channel: PauliDistribution,
    /// Pauli index applied after outcomes `+` and `-`.
    pub corrections: [usize; 2],
}

pub fn corrected_pauli_channel(spec: &SwitchSpec) -> Result<CorrectedChannel> {
    let mixtures = heralded_pauli_mixtures(spec)?;
    let mut weights = [0.0; 4];
    let mut corrections = [0; 2];
    for (m, c) in mixtures.iter().zip(&mut corrections) {
        *c = (0..4)
            .max_by(|&a, &b| m.0[a].total_cmp(&m.0[b]).then(b.cmp(&a)))
            .expect("four weights");
        // σ_c σ_k ∝ σ_{c xor k}
        for (k, w) in m.0.iter().enumerate() {
            weights[k ^ *c] += w;
        }
    }
    let total: f64 = weights.iter().sum();
    let channel = PauliDistribution::new(weights.map(|w| (w / total).max(0.0)))?;
    Ok(CorrectedChannel {
        channel,
        corrections,
    })
}
