//! Quantum channels in Kraus, Choi and Pauli-probability form.

mod pauli;

pub use pauli::{pauli_channel, PauliDistribution};

use crate::error::{Error, Result};
use crate::qcore::random::random_unitary;
use crate::qcore::{eigh, ComplexMatrix, DensityMatrix, C64, NORM_TOL, PSD_TOL, ZERO};

/// Eigenvalues of a Choi matrix below this are dropped when extracting Kraus operators.
pub const KRAUS_RANK_CUTOFF: f64 = 1e-10;

/// A completely positive map as a list of `d_out x d_in` Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    /// Trace-preserving channel: `Σ K†K = I` within `1e-9`.
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::unchecked(ops)?;
        let dev = ch.completeness_deviation();
        if dev > NORM_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(ch)
    }

    /// Trace-nonincreasing map: `Σ K†K ≤ I` within `1e-9`.
    pub fn trace_nonincreasing(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::unchecked(ops)?;
        let slack = &ComplexMatrix::identity(ch.d_in) - &ch.completeness();
        let min = eigh(&slack)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators increase trace (min slack eigenvalue {min:e})"
            )));
        }
        Ok(ch)
    }

    fn unchecked(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (d_out, d_in) = first.shape();
        if ops.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch("Kraus operators of mixed shape".into()));
        }
        let ops = ops.into_iter().map(ComplexMatrix::without_dims).collect();
        Ok(Self { ops, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            ops: vec![ComplexMatrix::identity(d)],
            d_in: d,
            d_out: d,
        }
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.d_in, self.d_in);
        for k in &self.ops {
            acc += &(&k.dagger() * k);
        }
        acc
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.completeness()
            .max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.completeness_deviation() <= NORM_TOL
    }

    /// `Σ K X K†` on an arbitrary operator.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "channel input dimension {} applied to {}x{} operator",
                self.d_in,
                x.rows(),
                x.cols()
            )));
        }
        let x = x.clone().without_dims();
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.ops {
            out += &k.conjugate(&x)?;
        }
        Ok(out)
    }

    /// Output state; the result is validated only when the map is not trace preserving.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?.hermitian_part();
        if self.is_trace_preserving() {
            Ok(DensityMatrix::from_trusted(out))
        } else {
            DensityMatrix::new(out)
        }
    }

    /// `second ∘ self`.
    pub fn then(&self, second: &Self) -> Result<Self> {
        compose(second, self)
    }

    /// `id_d ⊗ self`, acting on the second factor.
    pub fn extend_left(&self, d: usize) -> Self {
        let id = ComplexMatrix::identity(d);
        Self {
            ops: self.ops.iter().map(|k| id.tensor(k).without_dims()).collect(),
            d_in: d * self.d_in,
            d_out: d * self.d_out,
        }
    }

    /// Weighted sum of maps given as Kraus lists with nonnegative weights.
    pub(crate) fn from_weighted(parts: &[(f64, &ComplexMatrix)]) -> Result<Self> {
        let ops: Vec<ComplexMatrix> = parts
            .iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, k)| k.scale_real(w.sqrt()))
            .collect();
        if ops.is_empty() {
            let (r, c) = parts
                .first()
                .map(|(_, k)| k.shape())
                .ok_or_else(|| Error::InvalidChannel("empty weighted map".into()))?;
            return Self::unchecked(vec![ComplexMatrix::zeros(r, c)]);
        }
        Self::unchecked(ops)
    }
}

/// `second ∘ first` with Kraus set `{K²_i K¹_j}`.
pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
    if first.d_out != second.d_in {
        return Err(Error::DimensionMismatch(format!(
            "cannot feed output dimension {} into input dimension {}",
            first.d_out, second.d_in
        )));
    }
    let mut ops = Vec::with_capacity(first.ops.len() * second.ops.len());
    for k2 in &second.ops {
        for k1 in &first.ops {
            ops.push(k2 * k1);
        }
    }
    Ok(KrausChannel {
        ops,
        d_in: first.d_in,
        d_out: second.d_out,
    })
}

/// Positive operator `N` on input ⊗ output with `N = [1 ⊗ 𝒩(|1⟩⟩⟨⟨1|)]ᵀ`,
/// the transposed Choi matrix that enters the generalised Born rule directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    /// Validates positivity; trace preservation is checked separately.
    pub fn new(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if matrix.shape() != (d_in * d_out, d_in * d_out) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix of shape {:?} for {d_in} -> {d_out}",
                matrix.shape()
            )));
        }
        if !matrix.is_hermitian(NORM_TOL) {
            return Err(Error::InvalidChannel("Choi matrix is not Hermitian".into()));
        }
        let min = eigh(&matrix)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        let matrix = matrix.with_dims(vec![d_in, d_out])?;
        Ok(Self { matrix, d_in, d_out })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `tr_out N`, equal to the identity for trace-preserving maps.
    pub fn input_marginal(&self) -> ComplexMatrix {
        self.matrix.partial_trace(&[0]).expect("Choi matrices carry dims")
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.input_marginal()
            .max_abs_diff(&ComplexMatrix::identity(self.d_in))
            <= NORM_TOL
    }

    /// Channel action through the Choi contraction `𝒩(ρ) = (tr_in[N (ρ ⊗ 1)])ᵀ`.
    pub fn apply_operator(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "Choi input dimension {} applied to {}x{} operator",
                self.d_in,
                rho.rows(),
                rho.cols()
            )));
        }
        let (di, dout) = (self.d_in, self.d_out);
        let n = self.matrix.data();
        let mut out = ComplexMatrix::zeros(dout, dout);
        // out[b][a] = Σ_{i,j} N[(i,a),(j,b)] ρ[j][i]
        for i in 0..di {
            for j in 0..di {
                let r = rho[(j, i)];
                if r == ZERO {
                    continue;
                }
                for a in 0..dout {
                    for b in 0..dout {
                        out[(b, a)] += n[(i * dout + a) * di * dout + j * dout + b] * r;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?.hermitian_part();
        if self.is_trace_preserving() {
            Ok(DensityMatrix::from_trusted(out))
        } else {
            DensityMatrix::new(out)
        }
    }
}

/// Transposed Choi matrix of a Kraus channel.
pub fn kraus_to_choi(ch: &KrausChannel) -> ChoiMatrix {
    let (di, dout) = (ch.d_in, ch.d_out);
    let dim = di * dout;
    let mut std = ComplexMatrix::zeros(dim, dim);
    for k in &ch.ops {
        // |K⟩⟩ = Σ_i |i⟩ ⊗ K|i⟩
        let v: Vec<C64> = (0..di)
            .flat_map(|i| (0..dout).map(move |o| (i, o)))
            .map(|(i, o)| k[(o, i)])
            .collect();
        std += &ComplexMatrix::outer(&v, &v);
    }
    ChoiMatrix {
        matrix: std
            .transpose()
            .with_dims(vec![di, dout])
            .expect("square Choi"),
        d_in: di,
        d_out: dout,
    }
}

/// Kraus operators from the eigendecomposition of the Choi matrix.
pub fn choi_to_kraus(c: &ChoiMatrix) -> Result<KrausChannel> {
    let (di, dout) = (c.d_in, c.d_out);
    let std = c.matrix.transpose().without_dims();
    let e = eigh(&std)?;
    if e.min_value() < -PSD_TOL {
        return Err(Error::NotPsd(e.min_value()));
    }
    let mut ops = Vec::new();
    for (k, &lam) in e.values.iter().enumerate().rev() {
        if lam <= KRAUS_RANK_CUTOFF {
            continue;
        }
        let v = e.vector(k);
        let s = lam.sqrt();
        ops.push(ComplexMatrix::from_fn(dout, di, |o, i| v[i * dout + o] * s));
    }
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(dout, di));
    }
    KrausChannel::unchecked(ops)
}

/// Checks complete positivity (through the Choi spectrum) and trace preservation.
pub fn validate_cptp(ch: &KrausChannel) -> Result<()> {
    let choi = kraus_to_choi(ch);
    let min = eigh(choi.matrix())?.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    if !choi.is_trace_preserving() {
        return Err(Error::InvalidChannel(format!(
            "not trace preserving (deviation {:e})",
            ch.completeness_deviation()
        )));
    }
    Ok(())
}

/// Random channel from the first `d` columns of a Haar unitary on `d * rank`.
pub fn random_channel<R: rand::Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> KrausChannel {
    let u = random_unitary(d * rank, rng);
    let ops = (0..rank)
        .map(|k| ComplexMatrix::from_fn(d, d, |o, i| u[(k * d + o, i)]))
        .collect();
    KrausChannel::new(ops).expect("isometry columns form a channel")
}
