use super::slots::SlotSplit;
use super::{
    ProcessMatrix, Slot, A_IN, A_OUT, B_IN, B_OUT, CONTROL_FUTURE, CONTROL_PAST, TARGET_FUTURE,
    TARGET_PAST,
};
use crate::error::{Error, Result};
use crate::qcore::{eigh, ComplexMatrix};

/// Input and output slot indices of one party in a causal chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// Which of the two switch parties acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CausalOrder {
    AThenB,
    BThenA,
}

impl std::fmt::Display for CausalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::AThenB => write!(f, "A<B<C"),
            Self::BThenA => write!(f, "B<A<C"),
        }
    }
}

/// Linear span of processes compatible with one fixed causal order, as an
/// orthogonal projector, intersected with the positive cone.
///
/// For a chain of parties the span is the common kernel of the commuting
/// projectors `E_k = T_later(k) ∘ (1 - T_out(k))`, where `T_S` traces out the
/// slots `S` and replaces them by the normalized identity.
#[derive(Debug, Clone)]
pub struct OrderedProcessCone {
    label: String,
    dims: Vec<usize>,
    chain: Vec<Party>,
    /// `(later, later ∪ outputs)` trace-and-replace maps per constrained party.
    steps: Vec<(Option<SlotSplit>, SlotSplit)>,
}

impl OrderedProcessCone {
    /// `chain` lists parties from the global past to the global future.
    pub fn new(label: &str, dims: Vec<usize>, chain: Vec<Party>) -> Result<Self> {
        let mut seen = vec![false; dims.len()];
        for p in &chain {
            for &s in p.inputs.iter().chain(&p.outputs) {
                if s >= dims.len() || seen[s] {
                    return Err(Error::SlotMismatch(format!("slot {s} misassigned in causal chain")));
                }
                seen[s] = true;
            }
        }
        if seen.iter().any(|x| !x) {
            return Err(Error::SlotMismatch("causal chain leaves slots unassigned".into()));
        }
        let mut steps = Vec::new();
        for (k, p) in chain.iter().enumerate() {
            if p.outputs.is_empty() {
                continue;
            }
            let later: Vec<usize> = chain[k + 1..]
                .iter()
                .flat_map(|q| q.inputs.iter().chain(&q.outputs).copied())
                .collect();
            let mut with_out = later.clone();
            with_out.extend(&p.outputs);
            let later_split = if later.is_empty() {
                None
            } else {
                Some(SlotSplit::new(&dims, &later)?)
            };
            steps.push((later_split, SlotSplit::new(&dims, &with_out)?));
        }
        Ok(Self {
            label: label.to_string(),
            dims,
            chain,
            steps,
        })
    }

    /// The two definite orders of the switch parties, built from slot labels.
    pub fn switch_cones(slots: &[Slot]) -> Result<[Self; 2]> {
        Ok([
            Self::for_switch(slots, CausalOrder::AThenB)?,
            Self::for_switch(slots, CausalOrder::BThenA)?,
        ])
    }

    pub fn for_switch(slots: &[Slot], order: CausalOrder) -> Result<Self> {
        let find = |label: &str| -> Result<usize> {
            slots
                .iter()
                .position(|s| s.label == label)
                .ok_or_else(|| Error::SlotMismatch(format!("no slot labelled {label}")))
        };
        let mut past = vec![find(TARGET_PAST)?];
        if let Some(c) = slots.iter().position(|s| s.label == CONTROL_PAST) {
            past.insert(0, c);
        }
        let a = Party {
            inputs: vec![find(A_IN)?],
            outputs: vec![find(A_OUT)?],
        };
        let b = Party {
            inputs: vec![find(B_IN)?],
            outputs: vec![find(B_OUT)?],
        };
        let future = Party {
            inputs: vec![find(CONTROL_FUTURE)?, find(TARGET_FUTURE)?],
            outputs: vec![],
        };
        let past = Party {
            inputs: vec![],
            outputs: past,
        };
        let (first, second) = match order {
            CausalOrder::AThenB => (a, b),
            CausalOrder::BThenA => (b, a),
        };
        let dims = slots.iter().map(|s| s.dim).collect();
        Self::new(&order.to_string(), dims, vec![past, first, second, future])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chain(&self) -> &[Party] {
        &self.chain
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Orthogonal projection onto the span of this order.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut cur = x.clone().without_dims();
        for (later, with_out) in &self.steps {
            let mut next = cur.clone();
            match later {
                Some(split) => next -= &split.trace_replace(&cur),
                None => next -= &cur,
            }
            next += &with_out.trace_replace(&cur);
            cur = next;
        }
        cur
    }

    /// `x - project(x)`.
    pub fn project_complement(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &x.clone().without_dims() - &self.project(x)
    }

    /// Distance of `w` from the span in Frobenius norm.
    pub fn span_residual(&self, w: &ComplexMatrix) -> f64 {
        self.project_complement(w).frobenius_norm()
    }

    /// Membership: positive semidefinite and inside the span, both within `tol`.
    pub fn contains(&self, w: &ProcessMatrix, tol: f64) -> Result<bool> {
        if w.dims() != self.dims {
            return Err(Error::SlotMismatch("process does not match cone slots".into()));
        }
        if self.span_residual(w.matrix()) > tol {
            return Ok(false);
        }
        Ok(eigh(w.matrix())?.min_value() >= -tol)
    }
}
