use super::slots::{embed, SlotSplit};
use super::{Slot, Witness};
use crate::error::{Error, Result};
use crate::qcore::{eigh, ComplexMatrix, C64};

const SPAN_CUTOFF: f64 = 1e-10;

/// Implementable operations per slot group, as they enter the Born rule.
#[derive(Debug, Clone)]
pub struct OperationSets {
    groups: Vec<(Vec<String>, Vec<ComplexMatrix>)>,
}

impl OperationSets {
    pub fn new() -> Self {
        Self { groups: Vec::new() }
    }

    /// Adds the operations available on the slots `labels` (in that order).
    pub fn with_group(mut self, labels: &[&str], ops: Vec<ComplexMatrix>) -> Self {
        self.groups.push((labels.iter().map(|s| s.to_string()).collect(), ops));
        self
    }

    pub fn groups(&self) -> &[(Vec<String>, Vec<ComplexMatrix>)] {
        &self.groups
    }

    /// Number of joint operation tuples.
    pub fn tuple_count(&self) -> usize {
        self.groups.iter().map(|(_, ops)| ops.len()).product()
    }

    fn resolve(&self, slots: &[Slot]) -> Result<Vec<Vec<usize>>> {
        let mut covered = vec![false; slots.len()];
        let mut out = Vec::with_capacity(self.groups.len());
        for (labels, ops) in &self.groups {
            let mut idx = Vec::with_capacity(labels.len());
            for l in labels {
                let k = slots
                    .iter()
                    .position(|s| &s.label == l)
                    .ok_or_else(|| Error::SlotMismatch(format!("no slot labelled {l}")))?;
                if covered[k] {
                    return Err(Error::SlotMismatch(format!("slot {l} in two operation groups")));
                }
                covered[k] = true;
                idx.push(k);
            }
            let d: usize = idx.iter().map(|&k| slots[k].dim).product();
            if ops.is_empty() || ops.iter().any(|o| o.shape() != (d, d)) {
                return Err(Error::SlotMismatch(format!(
                    "operations on {labels:?} must be nonempty and {d}x{d}"
                )));
            }
            out.push(idx);
        }
        if covered.iter().any(|c| !c) {
            return Err(Error::SlotMismatch("operation groups must cover every slot".into()));
        }
        Ok(out)
    }
}

impl Default for OperationSets {
    fn default() -> Self {
        Self::new()
    }
}

/// Real Gram matrix `⟨A_j, A_l⟩` of Hermitian operators.
fn gram(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let n = ops.len();
    ComplexMatrix::from_fn(n, n, |j, l| C64::new(ops[j].inner(&ops[l]), 0.0))
}

/// Orthonormal Hermitian basis of the real span of `ops`.
fn orthonormal_basis(ops: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let e = eigh(&gram(ops))?;
    let top = e.values.last().copied().unwrap_or(0.0);
    let mut basis = Vec::new();
    for (k, &lam) in e.values.iter().enumerate() {
        if lam <= SPAN_CUTOFF * top.max(1.0) {
            continue;
        }
        let v = e.vector(k);
        let mut b = ComplexMatrix::zeros(ops[0].rows(), ops[0].cols());
        for (c, op) in v.iter().zip(ops) {
            b.axpy(C64::new(c.re / lam.sqrt(), 0.0), op);
        }
        basis.push(b.hermitian_part());
    }
    Ok(basis)
}

/// Dual frame `Ã_j = Σ_l (G⁺)_{jl} A_l`, so that `X = Σ_j ⟨Ã_j, X⟩ A_j` on the span.
fn dual_frame(ops: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let e = eigh(&gram(ops))?;
    let top = e.values.last().copied().unwrap_or(0.0);
    let n = ops.len();
    let mut pinv = vec![0.0; n * n];
    for (k, &lam) in e.values.iter().enumerate() {
        if lam <= SPAN_CUTOFF * top.max(1.0) {
            continue;
        }
        let v = e.vector(k);
        for j in 0..n {
            for l in 0..n {
                pinv[j * n + l] += v[j].re * v[l].re / lam;
            }
        }
    }
    Ok((0..n)
        .map(|j| {
            let mut d = ComplexMatrix::zeros(ops[0].rows(), ops[0].cols());
            for (l, op) in ops.iter().enumerate() {
                d.axpy(C64::new(pinv[j * n + l], 0.0), op);
            }
            d
        })
        .collect())
}

/// Tensor product of local operator spans: the operators whose value on any
/// process can be estimated from the given local operations.
#[derive(Debug, Clone)]
pub struct LocalSpan {
    groups: Vec<(SlotSplit, Vec<ComplexMatrix>)>,
    dimension: usize,
}

impl LocalSpan {
    pub fn new(slots: &[Slot], sets: &OperationSets) -> Result<Self> {
        let idx = sets.resolve(slots)?;
        let dims: Vec<usize> = slots.iter().map(|s| s.dim).collect();
        let mut groups = Vec::with_capacity(idx.len());
        let mut dimension = 1;
        for (g, (_, ops)) in idx.iter().zip(&sets.groups) {
            let basis = orthonormal_basis(ops)?;
            dimension *= basis.len();
            groups.push((SlotSplit::new(&dims, g)?, basis));
        }
        Ok(Self { groups, dimension })
    }

    /// Real dimension of the span.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Local dimensions of each group's span.
    pub fn local_dimensions(&self) -> Vec<usize> {
        self.groups.iter().map(|(_, b)| b.len()).collect()
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut cur = x.clone().without_dims();
        for (split, basis) in &self.groups {
            cur = split.apply_local(&cur, |block| {
                let mut out = ComplexMatrix::zeros(block.rows(), block.cols());
                for b in basis {
                    out.axpy(b.trace_product(block), b);
                }
                out
            });
        }
        cur
    }
}

/// One term `coefficient · (⊗_g ops_g[indices_g])` of a witness decomposition.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WitnessTerm {
    pub coefficient: f64,
    pub indices: Vec<usize>,
}

/// Expands a witness over joint operation tuples, so that its value is the
/// coefficient-weighted sum of the tuples' Born probabilities.
pub fn decompose_witness(s: &Witness, sets: &OperationSets) -> Result<Vec<WitnessTerm>> {
    let slots = s.slots();
    let idx = sets.resolve(slots)?;
    let dims: Vec<usize> = slots.iter().map(|s| s.dim).collect();
    let duals: Vec<Vec<ComplexMatrix>> = sets
        .groups
        .iter()
        .map(|(_, ops)| dual_frame(ops))
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = sets.groups.iter().map(|(_, ops)| ops.len()).collect();
    let total = sets.tuple_count();
    let mut terms = Vec::with_capacity(total);
    let mut recon = ComplexMatrix::zeros(s.matrix().rows(), s.matrix().cols());
    let mut tuple = vec![0usize; sizes.len()];
    for _ in 0..total {
        let dual_factors: Vec<(&[usize], &ComplexMatrix)> = idx
            .iter()
            .zip(&duals)
            .zip(&tuple)
            .map(|((g, d), &t)| (g.as_slice(), &d[t]))
            .collect();
        let coefficient = embed(&dims, &dual_factors)?.inner(s.matrix());
        if coefficient != 0.0 {
            let op_factors: Vec<(&[usize], &ComplexMatrix)> = idx
                .iter()
                .zip(&sets.groups)
                .zip(&tuple)
                .map(|((g, (_, ops)), &t)| (g.as_slice(), &ops[t]))
                .collect();
            recon.axpy(C64::new(coefficient, 0.0), &embed(&dims, &op_factors)?);
        }
        terms.push(WitnessTerm {
            coefficient,
            indices: tuple.clone(),
        });
        for k in (0..tuple.len()).rev() {
            tuple[k] += 1;
            if tuple[k] < sizes[k] {
                break;
            }
            tuple[k] = 0;
        }
    }
    let err = recon.max_abs_diff(&s.matrix().clone().without_dims());
    if err > 1e-7 * s.matrix().max_abs().max(1.0) {
        return Err(Error::NotMeasurable);
    }
    Ok(terms)
}
