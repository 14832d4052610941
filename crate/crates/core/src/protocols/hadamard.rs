use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{pauli, ComplexMatrix, PureState, C64, ZERO};
use crate::switch::{n_switch_apply, ordered_products, PermutationSet};

/// Entrywise tolerance for `Π_x = m_{x,y} Π_0`.
const PROMISE_TOL: f64 = 1e-12;
/// Gate count above which the `n!` orderings are not enumerated.
const MAX_GATES: usize = 8;

/// Sylvester Hadamard matrix of order `d`, a power of two.
pub fn sylvester_hadamard(d: usize) -> Result<Vec<Vec<i32>>> {
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::OutOfRange(format!("Sylvester order {d} is not a power of two")));
    }
    Ok((0..d)
        .map(|i| {
            (0..d)
                .map(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect())
}

/// `±1` entries, first row and column `+1`, and `M Mᵀ = d I` exactly.
fn check_hadamard(m: &[Vec<i32>]) -> Result<()> {
    let d = m.len();
    if d == 0 || m.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidInstance("Hadamard matrix must be square and nonempty".into()));
    }
    if m.iter().flatten().any(|&e| e != 1 && e != -1) {
        return Err(Error::InvalidInstance("Hadamard entries must be ±1".into()));
    }
    if m[0].iter().any(|&e| e != 1) || m.iter().any(|r| r[0] != 1) {
        return Err(Error::InvalidInstance("first row and column must be all +1".into()));
    }
    for i in 0..d {
        for j in 0..d {
            let dot: i32 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
            let want = if i == j { d as i32 } else { 0 };
            if dot != want {
                return Err(Error::InvalidInstance(format!("rows {i} and {j} have inner product {dot}")));
            }
        }
    }
    Ok(())
}

/// Checks `Π_x = m_{x,y} Π_0` for every ordering in `perms`.
pub fn verify_promise(units: &[ComplexMatrix], perms: &PermutationSet, matrix: &[Vec<i32>], y: usize) -> Result<()> {
    if perms.len() != matrix.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} orderings for a Hadamard matrix of order {}",
            perms.len(),
            matrix.len()
        )));
    }
    if y >= matrix.len() {
        return Err(Error::OutOfRange(format!("column {y} of an order-{} matrix", matrix.len())));
    }
    let prods = ordered_products(units, perms)?;
    for (x, pi) in prods.iter().enumerate() {
        let want = prods[0].scale_real(f64::from(matrix[x][y]));
        let err = pi.max_abs_diff(&want);
        if err > PROMISE_TOL {
            return Err(Error::PromiseViolated(format!(
                "ordering {x} deviates from m[{x}][{y}]·Π_0 by {err:e}"
            )));
        }
    }
    Ok(())
}

/// Oracle gates, their orderings and the hidden column they encode.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardInstance {
    matrix: Vec<Vec<i32>>,
    units: Vec<ComplexMatrix>,
    perms: PermutationSet,
    hidden_column: usize,
}

impl HadamardInstance {
    /// Rejects anything that is not a Hadamard matrix or violates the promise.
    pub fn new(
        matrix: Vec<Vec<i32>>,
        units: Vec<ComplexMatrix>,
        perms: PermutationSet,
        hidden_column: usize,
    ) -> Result<Self> {
        check_hadamard(&matrix)?;
        verify_promise(&units, &perms, &matrix, hidden_column)?;
        Ok(Self {
            matrix,
            units,
            perms,
            hidden_column,
        })
    }

    pub fn d(&self) -> usize {
        self.matrix.len()
    }

    /// Number of oracle gates.
    pub fn n(&self) -> usize {
        self.units.len()
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }

    pub fn units(&self) -> &[ComplexMatrix] {
        &self.units
    }

    pub fn perms(&self) -> &PermutationSet {
        &self.perms
    }

    pub fn hidden_column(&self) -> usize {
        self.hidden_column
    }
}

/// Searches the `n!` orderings for `d` of them whose products follow the sign
/// pattern of column `y` of the Sylvester matrix.
///
/// Ordering `0` is tried as every possible reference `Π_0`, in lexicographic
/// order; the remaining rows take the first unused ordering of the right sign.
pub fn make_promise_instance(units: Vec<ComplexMatrix>, d: usize, y: usize) -> Result<HadamardInstance> {
    let n = units.len();
    if n == 0 || n > MAX_GATES {
        return Err(Error::OutOfRange(format!("{n} gates, expected 1..={MAX_GATES}")));
    }
    let matrix = sylvester_hadamard(d)?;
    if y >= d {
        return Err(Error::OutOfRange(format!("column {y} of an order-{d} matrix")));
    }
    let all = PermutationSet::all(n);
    if d > all.len() {
        return Err(Error::InvalidInstance(format!("{d} orderings requested from {n} gates")));
    }
    let prods = ordered_products(&units, &all)?;
    let column: Vec<i32> = matrix.iter().map(|r| r[y]).collect();
    for (r, reference) in prods.iter().enumerate() {
        let negated = reference.scale_real(-1.0);
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (k, p) in prods.iter().enumerate() {
            if k == r {
                continue;
            }
            if p.max_abs_diff(reference) <= PROMISE_TOL {
                plus.push(k);
            } else if p.max_abs_diff(&negated) <= PROMISE_TOL {
                minus.push(k);
            }
        }
        let need_plus = column[1..].iter().filter(|&&m| m == 1).count();
        if plus.len() < need_plus || minus.len() < d - 1 - need_plus {
            continue;
        }
        let (mut ip, mut im) = (plus.into_iter(), minus.into_iter());
        let mut chosen = vec![all.perms()[r].clone()];
        for &m in &column[1..] {
            let k = if m == 1 { ip.next() } else { im.next() }.expect("counts checked");
            chosen.push(all.perms()[k].clone());
        }
        let perms = PermutationSet::new(n, chosen)?;
        return HadamardInstance::new(matrix, units, perms, y);
    }
    Err(Error::NoPromiseInstance(y))
}

/// Readout of the control after `H⁻¹ T_n H` on `|0⟩ ⊗ |0⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HadamardOutcome {
    pub d: usize,
    pub n: usize,
    pub hidden_column: usize,
    pub perms: Vec<Vec<usize>>,
    /// Most likely control outcome.
    pub guess: usize,
    /// Probability of reading the hidden column.
    pub success_probability: f64,
    pub probabilities: Vec<f64>,
    /// Oracle gate uses; each gate enters `T_n` once.
    pub query_count: usize,
}

pub fn solve_hadamard_promise(inst: &HadamardInstance) -> Result<HadamardOutcome> {
    verify_promise(&inst.units, &inst.perms, &inst.matrix, inst.hidden_column)?;
    let d = inst.d();
    let dt = inst.units[0].rows();
    let norm = 1.0 / (d as f64).sqrt();
    // first column of M is all +1
    let control = PureState::new(vec![C64::new(norm, 0.0); d], vec![d])?;
    let state = n_switch_apply(&inst.units, &inst.perms, &control, &PureState::basis(dt, 0))?;
    let amps = state.amplitudes();
    let probabilities: Vec<f64> = (0..d)
        .map(|k| {
            (0..dt)
                .map(|t| {
                    (0..d)
                        .fold(ZERO, |acc, x| acc + amps[x * dt + t] * f64::from(inst.matrix[x][k]) * norm)
                        .norm_sqr()
                })
                .sum()
        })
        .collect();
    let guess = (0..d)
        .max_by(|&a, &b| probabilities[a].total_cmp(&probabilities[b]))
        .expect("nonempty control");
    Ok(HadamardOutcome {
        d,
        n: inst.n(),
        hidden_column: inst.hidden_column,
        perms: inst.perms.perms().to_vec(),
        guess,
        success_probability: probabilities[inst.hidden_column],
        probabilities,
        query_count: inst.n(),
    })
}

/// Four-gate oracles drawn from `{I, Z, X}` and from `{I, Z, X, (Z+X)/√2}`.
pub fn laboratory_unit_sets() -> [(&'static str, Vec<ComplexMatrix>); 2] {
    let (id, z, x) = (ComplexMatrix::identity(2), pauli(3), pauli(1));
    let h = (&z + &x).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    [
        ("I,Z,X,Z", vec![id.clone(), z.clone(), x.clone(), z.clone()]),
        ("I,Z,X,(Z+X)/sqrt2", vec![id, z, x, h]),
    ]
}
