use rand::Rng;
use serde::Serialize;

use super::control_pm_probabilities;
use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, PureState, C64, ONE};
use crate::switch::{n_switch_apply, PermutationSet};

/// Largest bit-string length accepted by the encoder.
pub const MAX_EE_BITS: usize = 6;

/// Exchange-evaluation inputs: Alice holds `(x, f)`, Bob holds `(y, g)`.
/// Bit strings are read as integers, truth tables are indexed by them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EEInstance {
    n: usize,
    x: usize,
    y: usize,
    f: Vec<bool>,
    g: Vec<bool>,
}

fn check_half(n: usize, bits: usize, table: &[bool]) -> Result<()> {
    if n == 0 || n > MAX_EE_BITS {
        return Err(Error::OutOfRange(format!("bit-string length {n} outside 1..={MAX_EE_BITS}")));
    }
    if bits >> n != 0 {
        return Err(Error::InvalidInstance(format!("{bits} is not an {n}-bit string")));
    }
    if table.len() != 1 << n {
        return Err(Error::InvalidInstance(format!(
            "truth table of length {} for {n}-bit inputs",
            table.len()
        )));
    }
    if table[0] {
        return Err(Error::InvalidInstance("function must vanish on the all-zero input".into()));
    }
    Ok(())
}

impl EEInstance {
    pub fn new(n: usize, x: usize, y: usize, f: Vec<bool>, g: Vec<bool>) -> Result<Self> {
        check_half(n, x, &f)?;
        check_half(n, y, &g)?;
        Ok(Self { n, x, y, f, g })
    }

    /// Uniform bit strings and uniform truth tables subject to `f(0) = g(0) = 0`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let table = |rng: &mut R| -> Vec<bool> {
            (0..1usize << n).map(|z| z != 0 && rng.random::<bool>()).collect()
        };
        let f = table(rng);
        let g = table(rng);
        let x = rng.random_range(0..1usize << n);
        let y = rng.random_range(0..1usize << n);
        Self::new(n, x, y, f, g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn f(&self) -> &[bool] {
        &self.f
    }

    pub fn g(&self) -> &[bool] {
        &self.g
    }

    /// `f(y) ⊕ g(x)` evaluated classically.
    pub fn classical_value(&self) -> bool {
        self.f[self.y] ^ self.g[self.x]
    }

    /// Dimension `2^(n+1)` of the transmitted qudit.
    pub fn qudit_dim(&self) -> usize {
        2 << self.n
    }
}

/// `U|z⟩ = (-1)^{f(z mod 2ⁿ)} |z + bits mod 2^(n+1)⟩`.
pub fn ee_encode(bits: usize, table: &[bool], n: usize) -> Result<ComplexMatrix> {
    check_half(n, bits, table)?;
    let d = 2 << n;
    let mask = (1 << n) - 1;
    let mut u = ComplexMatrix::zeros(d, d);
    for z in 0..d {
        u[((z + bits) % d, z)] = if table[z & mask] { -ONE } else { ONE };
    }
    Ok(u)
}

/// Referee's readout of the switched encodings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EEOutcome {
    pub value: bool,
    /// Probability of the reported value.
    pub probability: f64,
    pub qudit_dim: usize,
}

/// Switches Alice's and Bob's encodings on `|0⟩` with control `|+⟩` and reads
/// the control in the `±` basis; `-` signals `f(y) ⊕ g(x) = 1`.
pub fn ee_game(inst: &EEInstance) -> Result<EEOutcome> {
    let ua = ee_encode(inst.x, &inst.f, inst.n)?;
    let ub = ee_encode(inst.y, &inst.g, inst.n)?;
    let d = inst.qudit_dim();
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let control = PureState::new(vec![s, s], vec![2])?;
    let out = n_switch_apply(&[ua, ub], &PermutationSet::all(2), &control, &PureState::basis(d, 0))?;
    let [plus, minus] = control_pm_probabilities(out.amplitudes(), d);
    let (value, probability) = if plus >= minus { (false, plus) } else { (true, minus) };
    Ok(EEOutcome {
        value,
        probability,
        qudit_dim: d,
    })
}
