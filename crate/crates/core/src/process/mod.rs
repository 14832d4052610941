//! Process matrices on labelled slots, the generalised Born rule, the switch
//! process, and causal witnesses.

mod cone;
mod io;
mod restriction;
mod sample;
mod scenario;
mod sdp;
pub(crate) mod slots;
mod sweep;

pub use cone::{CausalOrder, OrderedProcessCone, Party};
pub use io::{MatrixRecord, SlotRecord};
pub use restriction::{decompose_witness, LocalSpan, OperationSets, WitnessTerm};
pub use sample::{random_ordered_process, random_separable_process};
pub use scenario::Scenario;
pub use sdp::{
    is_causally_separable, optimal_witness, SdpConfig, SeparabilityVerdict, WitnessSolution,
};
pub use sweep::{bisect_crossing, visibility_sweep, VisibilityPoint, VisibilitySweep};

use crate::error::{Error, Result};
use crate::qcore::{eigh, ComplexMatrix, C64, NORM_TOL, ZERO};
use slots::{embed, SlotSplit};

/// Global past of the target.
pub const TARGET_PAST: &str = "T";
/// Global past of the control, present only in the controlled switch process.
pub const CONTROL_PAST: &str = "T_c";
pub const A_IN: &str = "A_I";
pub const A_OUT: &str = "A_O";
pub const B_IN: &str = "B_I";
pub const B_OUT: &str = "B_O";
/// Control system received by the final party.
pub const CONTROL_FUTURE: &str = "C_c";
/// Target system received by the final party.
pub const TARGET_FUTURE: &str = "C_t";

/// A labelled tensor factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub label: String,
    pub dim: usize,
}

impl Slot {
    pub fn new(label: &str, dim: usize) -> Self {
        Self {
            label: label.to_string(),
            dim,
        }
    }
}

fn slot_dims(slots: &[Slot]) -> Vec<usize> {
    slots.iter().map(|s| s.dim).collect()
}

fn validate_shape(matrix: &ComplexMatrix, slots: &[Slot]) -> Result<ComplexMatrix> {
    let n: usize = slots.iter().map(|s| s.dim).product();
    if matrix.shape() != (n, n) {
        return Err(Error::SlotMismatch(format!(
            "{:?} matrix for slots of total dimension {n}",
            matrix.shape()
        )));
    }
    for (i, s) in slots.iter().enumerate() {
        if slots[..i].iter().any(|t| t.label == s.label) {
            return Err(Error::SlotMismatch(format!("duplicate slot label {}", s.label)));
        }
    }
    if !matrix.is_hermitian(NORM_TOL * matrix.max_abs().max(1.0)) {
        return Err(Error::InvalidState("operator is not Hermitian".into()));
    }
    matrix.clone().with_dims(slot_dims(slots))
}

/// Positive semidefinite operator on labelled slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    matrix: ComplexMatrix,
    slots: Vec<Slot>,
}

impl ProcessMatrix {
    /// Validates Hermiticity and positivity (eigenvalues above `-1e-9` relative to the norm).
    pub fn new(matrix: ComplexMatrix, slots: Vec<Slot>) -> Result<Self> {
        let matrix = validate_shape(&matrix, &slots)?;
        let min = eigh(&matrix)?.min_value();
        if min < -NORM_TOL * matrix.max_abs().max(1.0) {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix, slots })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix, slots: Vec<Slot>) -> Self {
        let matrix = matrix.with_dims(slot_dims(&slots)).expect("slot dims match");
        Self { matrix, slots }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dims(&self) -> Vec<usize> {
        slot_dims(&self.slots)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn slot_index(&self, label: &str) -> Result<usize> {
        self.slots
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::SlotMismatch(format!("no slot labelled {label}")))
    }

    fn same_slots(&self, other: &[Slot]) -> Result<()> {
        if self.slots != other {
            return Err(Error::SlotMismatch("operators live on different slots".into()));
        }
        Ok(())
    }

    /// Convex combination `Σ w_i W_i` of processes on identical slots.
    pub fn mixture(parts: &[(f64, &ProcessMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?
            .1;
        let mut acc = ComplexMatrix::zeros(first.matrix.rows(), first.matrix.cols());
        for (w, p) in parts {
            first.same_slots(&p.slots)?;
            if *w < 0.0 {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
            acc.axpy(C64::new(*w, 0.0), &p.matrix);
        }
        Ok(Self::from_trusted(acc, first.slots.clone()))
    }
}

/// A local operator placed on named slots of a process.
#[derive(Debug, Clone)]
pub struct PartyOperator {
    pub slots: Vec<String>,
    pub operator: ComplexMatrix,
}

impl PartyOperator {
    pub fn new(slots: &[&str], operator: ComplexMatrix) -> Self {
        Self {
            slots: slots.iter().map(|s| s.to_string()).collect(),
            operator,
        }
    }
}

fn resolve(w: &ProcessMatrix, ops: &[PartyOperator]) -> Result<(Vec<usize>, ComplexMatrix)> {
    let mut group = Vec::new();
    let mut joint: Option<ComplexMatrix> = None;
    for op in ops {
        for label in &op.slots {
            group.push(w.slot_index(label)?);
        }
        let local = op.operator.clone().without_dims();
        joint = Some(match joint {
            None => local,
            Some(j) => j.tensor(&local).without_dims(),
        });
    }
    let joint = joint.unwrap_or_else(|| ComplexMatrix::identity(1));
    let d: usize = group.iter().map(|&k| w.slots[k].dim).product();
    if joint.shape() != (d, d) {
        return Err(Error::SlotMismatch(format!(
            "operators of total shape {:?} on slots of dimension {d}",
            joint.shape()
        )));
    }
    Ok((group, joint))
}

/// `tr_S[(⊗ ops) W]`, a process on the slots not covered by `ops`.
///
/// Operators enter as transposed Choi matrices: `ρᵀ` for a state prepared
/// in a past slot, `E ⊗ φᵀ` for measuring `E` and preparing `φ`, and `E` for
/// an effect measured in a future slot. Uncontracted future slots carry the
/// output state itself.
pub fn contract(w: &ProcessMatrix, ops: &[PartyOperator]) -> Result<(ComplexMatrix, Vec<Slot>)> {
    let (group, joint) = resolve(w, ops)?;
    let split = SlotSplit::new(&w.dims(), &group)?;
    let out = split.contract(&w.matrix, &joint);
    let rest: Vec<Slot> = w
        .slots
        .iter()
        .enumerate()
        .filter(|(k, _)| !group.contains(k))
        .map(|(_, s)| s.clone())
        .collect();
    Ok((out, rest))
}

/// Generalised Born rule `tr[(⊗ ops) W]`; the operators must cover every slot.
pub fn born_probability(w: &ProcessMatrix, ops: &[PartyOperator]) -> Result<f64> {
    let (out, rest) = contract(w, ops)?;
    if !rest.is_empty() {
        let labels: Vec<&str> = rest.iter().map(|s| s.label.as_str()).collect();
        return Err(Error::SlotMismatch(format!("slots {labels:?} left uncontracted")));
    }
    Ok(out[(0, 0)].re)
}

fn switch_slots(d: usize) -> Vec<Slot> {
    vec![
        Slot::new(TARGET_PAST, d),
        Slot::new(A_IN, d),
        Slot::new(A_OUT, d),
        Slot::new(B_IN, d),
        Slot::new(B_OUT, d),
        Slot::new(CONTROL_FUTURE, 2),
        Slot::new(TARGET_FUTURE, d),
    ]
}

/// Digits `(t, ai, ao, bi, bo, cc, ct)` of a 7-slot switch basis index.
fn switch_digits(mut idx: usize, d: usize) -> [usize; 7] {
    let dims = [d, d, d, d, d, 2, d];
    let mut out = [0; 7];
    for k in (0..7).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Branch vectors of the switch: control `|0⟩` wires `T→A→B→C`, control
/// `|1⟩` wires `T→B→A→C`; every wire is an unnormalized `|1⟩⟩`.
fn switch_branches(d: usize) -> (Vec<C64>, Vec<C64>) {
    let n = d.pow(6) * 2;
    let mut a = vec![ZERO; n];
    let mut b = vec![ZERO; n];
    for idx in 0..n {
        let [t, ai, ao, bi, bo, cc, ct] = switch_digits(idx, d);
        if cc == 0 && t == ai && ao == bi && bo == ct {
            a[idx] = C64::new(1.0, 0.0);
        }
        if cc == 1 && t == bi && bo == ai && ao == ct {
            b[idx] = C64::new(1.0, 0.0);
        }
    }
    (a, b)
}

/// Switch process with control amplitudes `(√γ, √(1-γ))` on slots
/// `T, A_I, A_O, B_I, B_O, C_c, C_t`; rank one with trace `d³`.
pub fn switch_process_weighted(d: usize, gamma: f64) -> Result<ProcessMatrix> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange(format!("gamma {gamma} outside [0, 1]")));
    }
    let (a, b) = switch_branches(d);
    let (ga, gb) = (gamma.sqrt(), (1.0 - gamma).sqrt());
    let w: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x * ga + y * gb).collect();
    Ok(ProcessMatrix::from_trusted(ComplexMatrix::outer(&w, &w), switch_slots(d)))
}

/// Switch process with the control prepared in `|+⟩`.
pub fn switch_process(d: usize) -> ProcessMatrix {
    switch_process_weighted(d, 0.5).expect("gamma in range")
}

/// The definite-order branches `(W^{A≺B≺C}, W^{B≺A≺C})` of the switch, each
/// with its control fixed and normalized as a process.
pub fn ordered_switch_processes(d: usize) -> (ProcessMatrix, ProcessMatrix) {
    let (a, b) = switch_branches(d);
    (
        ProcessMatrix::from_trusted(ComplexMatrix::outer(&a, &a), switch_slots(d)),
        ProcessMatrix::from_trusted(ComplexMatrix::outer(&b, &b), switch_slots(d)),
    )
}

/// Switch process whose control enters through an extra past slot `T_c`
/// (slot 0) and is wired to `C_c`; contracting `ρ_cᵀ` on `T_c` yields the
/// switch with control state `ρ_c`.
pub fn controlled_switch_process(d: usize) -> ProcessMatrix {
    let (a, b) = switch_branches(d);
    let half = a.len();
    // |0⟩_{T_c}|a⟩ + |1⟩_{T_c}|b⟩
    let mut w = a;
    w.extend(b);
    debug_assert_eq!(w.len(), 2 * half);
    let mut slots = vec![Slot::new(CONTROL_PAST, 2)];
    slots.extend(switch_slots(d));
    ProcessMatrix::from_trusted(ComplexMatrix::outer(&w, &w), slots)
}

/// Scales coherences between different values of the `C_c` slot by `v`.
pub fn dephase_control_process(w: &ProcessMatrix, v: f64) -> Result<ProcessMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange(format!("visibility {v} outside [0, 1]")));
    }
    let k = w.slot_index(CONTROL_FUTURE)?;
    let dims = w.dims();
    let split = SlotSplit::new(&dims, &[k])?;
    let out = split.apply_local(&w.matrix, |block| {
        ComplexMatrix::from_fn(block.rows(), block.cols(), |i, j| {
            if i == j {
                block[(i, j)]
            } else {
                block[(i, j)] * v
            }
        })
    });
    Ok(ProcessMatrix::from_trusted(out, w.slots.clone()))
}

/// Hermitian operator on process slots, optionally confined to the span of
/// locally implementable operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    matrix: ComplexMatrix,
    slots: Vec<Slot>,
}

impl Witness {
    pub fn new(matrix: ComplexMatrix, slots: Vec<Slot>) -> Result<Self> {
        let matrix = validate_shape(&matrix, &slots)?.hermitian_part();
        let matrix = matrix.with_dims(slot_dims(&slots))?;
        Ok(Self { matrix, slots })
    }

    pub fn zero(slots: Vec<Slot>) -> Self {
        let n: usize = slots.iter().map(|s| s.dim).product();
        Self::from_trusted(ComplexMatrix::zeros(n, n), slots)
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix, slots: Vec<Slot>) -> Self {
        let matrix = matrix.with_dims(slot_dims(&slots)).expect("slot dims match");
        Self { matrix, slots }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }
}

/// `tr[S W]`; negative values certify nonseparability when `S` is a valid witness.
pub fn witness_value(s: &Witness, w: &ProcessMatrix) -> Result<f64> {
    w.same_slots(&s.slots)?;
    Ok(s.matrix.trace_product(&w.matrix).re)
}

/// Embeds local operators given on slot labels into a full operator.
pub fn place_operators(slots: &[Slot], ops: &[PartyOperator]) -> Result<ComplexMatrix> {
    let dims = slot_dims(slots);
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(ops.len());
    for op in ops {
        let mut g = Vec::with_capacity(op.slots.len());
        for label in &op.slots {
            g.push(
                slots
                    .iter()
                    .position(|s| &s.label == label)
                    .ok_or_else(|| Error::SlotMismatch(format!("no slot labelled {label}")))?,
            );
        }
        groups.push(g);
    }
    let factors: Vec<(&[usize], &ComplexMatrix)> = groups
        .iter()
        .zip(ops)
        .map(|(g, op)| (g.as_slice(), &op.operator))
        .collect();
    embed(&dims, &factors)
}

#[cfg(test)]
mod tests;
