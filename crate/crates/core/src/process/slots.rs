//! Index bookkeeping for operators on labelled tensor slots.

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, C64, ONE, ZERO};

/// Splits full basis indices into a slot group (in the listed order) and the
/// remaining slots (in ascending order).
#[derive(Debug, Clone)]
pub(crate) struct SlotSplit {
    pub group_dim: usize,
    pub rest_dim: usize,
    /// `full[s * rest_dim + r]` is the full index with group part `s` and rest part `r`.
    pub full: Vec<usize>,
}

impl SlotSplit {
    pub fn new(dims: &[usize], group: &[usize]) -> Result<Self> {
        let mut seen = vec![false; dims.len()];
        for &g in group {
            if g >= dims.len() || seen[g] {
                return Err(Error::SlotMismatch(format!(
                    "slot group {group:?} invalid for {} slots",
                    dims.len()
                )));
            }
            seen[g] = true;
        }
        let rest: Vec<usize> = (0..dims.len()).filter(|&k| !seen[k]).collect();
        let group_dim: usize = group.iter().map(|&k| dims[k]).product();
        let rest_dim: usize = rest.iter().map(|&k| dims[k]).product();
        let n = group_dim * rest_dim;
        let mut full = vec![0usize; n];
        let mut digits = vec![0usize; dims.len()];
        for (idx, _) in (0..n).enumerate() {
            let mut x = idx;
            for k in (0..dims.len()).rev() {
                digits[k] = x % dims[k];
                x /= dims[k];
            }
            let s = group.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            let r = rest.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            full[s * rest_dim + r] = idx;
        }
        Ok(Self {
            group_dim,
            rest_dim,
            full,
        })
    }

    #[inline]
    fn at(&self, s: usize, r: usize) -> usize {
        self.full[s * self.rest_dim + r]
    }

    /// `(tr_group X) ⊗ I / d_group`, written back in the original slot order.
    pub fn trace_replace(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = x.rows();
        let (gd, rd) = (self.group_dim, self.rest_dim);
        let data = x.data();
        let mut reduced = vec![ZERO; rd * rd];
        for s in 0..gd {
            for r in 0..rd {
                let row = self.at(s, r) * n;
                for c in 0..rd {
                    reduced[r * rd + c] += data[row + self.at(s, c)];
                }
            }
        }
        let scale = 1.0 / gd as f64;
        let mut out = ComplexMatrix::zeros(n, n);
        let od = out.data_mut();
        for s in 0..gd {
            for r in 0..rd {
                let row = self.at(s, r) * n;
                for c in 0..rd {
                    od[row + self.at(s, c)] = reduced[r * rd + c] * scale;
                }
            }
        }
        out
    }

    /// Applies a linear map to every group block `X[(s, r), (s', r')]` with `r, r'` fixed.
    pub fn apply_local(&self, x: &ComplexMatrix, mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
        let n = x.rows();
        let (gd, rd) = (self.group_dim, self.rest_dim);
        let mut out = ComplexMatrix::zeros(n, n);
        let mut block = ComplexMatrix::zeros(gd, gd);
        for r in 0..rd {
            for c in 0..rd {
                for s in 0..gd {
                    for t in 0..gd {
                        block[(s, t)] = x[(self.at(s, r), self.at(t, c))];
                    }
                }
                let mapped = f(&block);
                for s in 0..gd {
                    for t in 0..gd {
                        out[(self.at(s, r), self.at(t, c))] = mapped[(s, t)];
                    }
                }
            }
        }
        out
    }

    /// `tr_group[(op ⊗ I) X]` on the remaining slots.
    pub fn contract(&self, x: &ComplexMatrix, op: &ComplexMatrix) -> ComplexMatrix {
        let (gd, rd) = (self.group_dim, self.rest_dim);
        let mut out = ComplexMatrix::zeros(rd, rd);
        for s in 0..gd {
            for t in 0..gd {
                let o = op[(s, t)];
                if o == ZERO {
                    continue;
                }
                for r in 0..rd {
                    let xi = self.at(t, r);
                    for c in 0..rd {
                        out[(r, c)] += o * x[(xi, self.at(s, c))];
                    }
                }
            }
        }
        out
    }
}

/// Product operator with each factor acting on its listed slots (in the
/// listed order) and the identity on unlisted slots.
pub(crate) fn embed(dims: &[usize], factors: &[(&[usize], &ComplexMatrix)]) -> Result<ComplexMatrix> {
    let n: usize = dims.iter().product();
    let mut covered = vec![false; dims.len()];
    let mut local: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    for (slots, op) in factors {
        let d: usize = slots.iter().map(|&k| dims.get(k).copied().unwrap_or(0)).product();
        if op.shape() != (d, d) {
            return Err(Error::SlotMismatch(format!(
                "operator of shape {:?} on slots {slots:?}",
                op.shape()
            )));
        }
        for &k in slots.iter() {
            if covered[k] {
                return Err(Error::SlotMismatch(format!("slot {k} covered twice")));
            }
            covered[k] = true;
        }
        local.push(Vec::with_capacity(n));
    }
    let idle: Vec<usize> = (0..dims.len()).filter(|&k| !covered[k]).collect();
    let mut idle_idx = Vec::with_capacity(n);
    let mut digits = vec![0usize; dims.len()];
    for idx in 0..n {
        let mut x = idx;
        for k in (0..dims.len()).rev() {
            digits[k] = x % dims[k];
            x /= dims[k];
        }
        for ((slots, _), loc) in factors.iter().zip(local.iter_mut()) {
            loc.push(slots.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]));
        }
        idle_idx.push(idle.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if idle_idx[i] != idle_idx[j] {
                continue;
            }
            let mut v: C64 = ONE;
            for ((_, op), loc) in factors.iter().zip(&local) {
                v *= op[(loc[i], loc[j])];
                if v == ZERO {
                    break;
                }
            }
            out[(i, j)] = v;
        }
    }
    out.with_dims(dims.to_vec())
}
