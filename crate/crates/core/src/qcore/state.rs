use super::eigen::eigh;
use super::matrix::{ComplexMatrix, C64, ZERO};
use super::{NORM_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// A normalized state vector with subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates the squared norm to within `1e-9`; amplitudes are stored as given.
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if prod != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} for {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm}")));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect(), dims)
    }

    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::normalized(vec![alpha, beta], vec![2])
    }

    /// Computational basis state `|index>` of a `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Self {
            amplitudes: amps,
            dims: vec![dim],
        }
    }

    /// Qubit on the Bloch sphere at polar angle `theta`, azimuth `phi`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self {
            amplitudes: vec![
                C64::new((theta / 2.0).cos(), 0.0),
                C64::from_polar((theta / 2.0).sin(), phi),
            ],
            dims: vec![2],
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amplitudes: amps,
            dims,
        }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
            .with_dims(self.dims.clone())
            .expect("state dims factor its length")
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace (all to `1e-9`).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        let matrix = if matrix.dims().is_some() {
            matrix
        } else {
            let n = matrix.rows();
            matrix.with_dims(vec![n])?
        };
        Ok(Self { matrix })
    }

    pub fn with_dims(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::new(matrix.with_dims(dims)?)
    }

    /// Skips validation; for results of maps already known to be CPTP.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let matrix = if matrix.dims().is_some() {
            matrix
        } else {
            let n = matrix.rows();
            matrix.with_dims(vec![n]).expect("square")
        };
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn dims(&self) -> &[usize] {
        self.matrix.dims().expect("density matrices always carry dims")
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Self {
        let reduced = self
            .matrix
            .partial_trace(keep)
            .expect("density matrices always carry dims");
        Self::from_trusted(reduced)
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &PureState) -> f64 {
        let amps = psi.amplitudes();
        let rv = self.matrix.apply(amps).expect("dimension checked by caller");
        amps.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

pub(crate) fn validate_density(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidState("density matrix must be square".into()));
    }
    let herm = m.hermiticity_error();
    if herm > NORM_TOL {
        return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("trace {tr}")));
    }
    let min = eigh(m)?.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}
