//! The quantum switch: Kraus form, Pauli closed form with its auxiliary maps,
//! and the n-party switch on unitaries.

mod nswitch;

pub use nswitch::{n_switch_apply, ordered_products, PermutationSet};

use crate::channels::{KrausChannel, PauliDistribution};
use crate::error::{Error, Result};
use crate::qcore::{pauli, ComplexMatrix, DensityMatrix, C64, ZERO};

/// The two channels fed into a switch.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelPair {
    Pauli {
        p: PauliDistribution,
        q: PauliDistribution,
    },
    Kraus {
        p: KrausChannel,
        q: KrausChannel,
    },
}

impl ChannelPair {
    pub fn kraus_pair(&self) -> (KrausChannel, KrausChannel) {
        match self {
            Self::Pauli { p, q } => (p.channel(), q.channel()),
            Self::Kraus { p, q } => (p.clone(), q.clone()),
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            Self::Pauli { .. } => 2,
            Self::Kraus { p, .. } => p.d_in(),
        }
    }
}

/// Switch configuration: control `√γ|0⟩ + √(1-γ)|1⟩`, control coherence
/// retained with factor `visibility`, and channels `p`, `q`.
///
/// Control `|0⟩` runs `p` first, then `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchSpec {
    gamma: f64,
    visibility: f64,
    channels: ChannelPair,
}

impl SwitchSpec {
    pub fn new(gamma: f64, visibility: f64, channels: ChannelPair) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::OutOfRange(format!("gamma {gamma} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::OutOfRange(format!("visibility {visibility} outside [0, 1]")));
        }
        if let ChannelPair::Kraus { p, q } = &channels {
            let d = p.d_in();
            if p.d_out() != d || q.d_in() != d || q.d_out() != d {
                return Err(Error::DimensionMismatch(
                    "switched channels must act on one common target space".into(),
                ));
            }
        }
        Ok(Self {
            gamma,
            visibility,
            channels,
        })
    }

    /// Balanced, fully coherent switch of two Pauli channels.
    pub fn pauli(p: PauliDistribution, q: PauliDistribution) -> Self {
        Self {
            gamma: 0.5,
            visibility: 1.0,
            channels: ChannelPair::Pauli { p, q },
        }
    }

    pub fn kraus(p: KrausChannel, q: KrausChannel) -> Result<Self> {
        Self::new(0.5, 1.0, ChannelPair::Kraus { p, q })
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.visibility, self.channels)
    }

    pub fn with_visibility(self, visibility: f64) -> Result<Self> {
        Self::new(self.gamma, visibility, self.channels)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn channels(&self) -> &ChannelPair {
        &self.channels
    }

    pub fn target_dim(&self) -> usize {
        self.channels.target_dim()
    }

    /// Control amplitudes `(√γ, √(1-γ))`.
    pub fn control_amplitudes(&self) -> [C64; 2] {
        [
            C64::new(self.gamma.sqrt(), 0.0),
            C64::new((1.0 - self.gamma).sqrt(), 0.0),
        ]
    }
}

/// Kraus operators `|0⟩⟨0| ⊗ Q_i P_j + |1⟩⟨1| ⊗ P_j Q_i` on control ⊗ target.
pub fn switch_kraus(np: &KrausChannel, nq: &KrausChannel) -> Result<KrausChannel> {
    let d = np.d_in();
    if np.d_out() != d || nq.d_in() != d || nq.d_out() != d {
        return Err(Error::DimensionMismatch(
            "switched channels must act on one common target space".into(),
        ));
    }
    let mut ops = Vec::with_capacity(np.ops().len() * nq.ops().len());
    for kq in nq.ops() {
        for kp in np.ops() {
            let first = kq * kp;
            let second = kp * kq;
            ops.push(block_diag(&first, &second));
        }
    }
    KrausChannel::new(ops)
}

fn block_diag(top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
    let d = top.rows();
    ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| match (i < d, j < d) {
        (true, true) => top[(i, j)],
        (false, false) => bottom[(i - d, j - d)],
        _ => ZERO,
    })
}

fn blocks(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, e: &ComplexMatrix) -> ComplexMatrix {
    let d = a.rows();
    ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| match (i < d, j < d) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - d)],
        (false, true) => c[(i - d, j)],
        (false, false) => e[(i - d, j - d)],
    })
}

/// Joint control ⊗ target output of the switch for target input `rho_t`.
///
/// Pauli pairs use the block form `[[A, vB], [vB, Ã]]`; other channels go
/// through [`switch_kraus`] with the control coherences scaled by `v`.
pub fn switch_output(spec: &SwitchSpec, rho_t: &DensityMatrix) -> Result<DensityMatrix> {
    let d = spec.target_dim();
    if rho_t.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "target state of dimension {} for a {d}-dimensional switch",
            rho_t.dim()
        )));
    }
    let g = spec.gamma;
    let v = spec.visibility;
    let out = match &spec.channels {
        ChannelPair::Pauli { p, q } => {
            let (np, nq) = (p.channel(), q.channel());
            let rho = rho_t.matrix();
            let a = nq.apply_operator(&np.apply_operator(rho)?)?.scale_real(g);
            let a_tilde = np.apply_operator(&nq.apply_operator(rho)?)?.scale_real(1.0 - g);
            let aux = aux_maps(p, q);
            let b = aux
                .coherence(rho)
                .scale_real((g * (1.0 - g)).sqrt() * v);
            blocks(&a, &b, &b.dagger(), &a_tilde)
        }
        ChannelPair::Kraus { p, q } => {
            let sk = switch_kraus(p, q)?;
            let c = spec.control_amplitudes();
            let control = ComplexMatrix::outer(&c, &c);
            let input = control.tensor(rho_t.matrix());
            let full = sk.apply_operator(&input)?;
            dephase_blocks(&full, d, v)
        }
    };
    let out = out.hermitian_part().with_dims(vec![2, d])?;
    Ok(DensityMatrix::from_trusted(out))
}

/// Scales the off-diagonal control blocks of a control ⊗ target operator.
pub fn dephase_blocks(m: &ComplexMatrix, d: usize, v: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if (i < d) == (j < d) {
            m[(i, j)]
        } else {
            m[(i, j)] * v
        }
    })
}

/// Weighted Pauli conjugation `ρ ↦ Σ w_k σ_k ρ σ_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliMixture(pub [f64; 4]);

impl PauliMixture {
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2, 2);
        for (k, &w) in self.0.iter().enumerate() {
            if w != 0.0 {
                let s = pauli(k);
                out.axpy(C64::new(w, 0.0), &(&(&s * rho) * &s));
            }
        }
        out
    }

    /// Trace scaling factor `Σ w_k`.
    pub fn weight(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Kraus form `{√w_k σ_k}` of the (trace-nonincreasing) map.
    pub fn to_kraus(&self) -> KrausChannel {
        let paulis: Vec<ComplexMatrix> = (0..4).map(pauli).collect();
        let parts: Vec<(f64, &ComplexMatrix)> = self.0.iter().copied().zip(&paulis).collect();
        KrausChannel::from_weighted(&parts).expect("four Pauli terms")
    }
}

/// The auxiliary maps `ε₊`, `ε₋` of a Pauli pair; `ε₊ + ε₋` is the definite-order
/// composition and `ε₊ - ε₋` the control-coherence block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxMaps {
    pub eps_plus: PauliMixture,
    pub eps_minus: PauliMixture,
}

impl AuxMaps {
    /// `(ε₊ - ε₋)(ρ)`.
    pub fn coherence(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &self.eps_plus.apply(rho) - &self.eps_minus.apply(rho)
    }

    /// `(ε₊ + ε₋)(ρ)`.
    pub fn sum(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &self.eps_plus.apply(rho) + &self.eps_minus.apply(rho)
    }
}

/// `r_ij = p_i q_j + p_j q_i`.
fn symmetric_weight(p: &PauliDistribution, q: &PauliDistribution, i: usize, j: usize) -> f64 {
    p.get(i) * q.get(j) + p.get(j) * q.get(i)
}

pub fn aux_maps(p: &PauliDistribution, q: &PauliDistribution) -> AuxMaps {
    let r = |i, j| symmetric_weight(p, q, i, j);
    let diag: f64 = (0..4).map(|i| p.get(i) * q.get(i)).sum();
    AuxMaps {
        eps_plus: PauliMixture([diag, r(0, 1), r(0, 2), r(0, 3)]),
        eps_minus: PauliMixture([0.0, r(2, 3), r(3, 1), r(1, 2)]),
    }
}
