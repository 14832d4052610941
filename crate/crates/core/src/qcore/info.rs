//! Entropies, entanglement and correlation measures.

use super::eigen::{eigh, psd_sqrt};
use super::matrix::{ComplexMatrix, C64};
use super::state::DensityMatrix;
use super::{pauli, PSD_TOL};
use crate::error::{Error, Result};

/// `-Σ λ log2 λ` over the spectrum. Eigenvalues below `-1e-9` are an error;
/// the rest are clipped at zero.
pub fn vn_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let e = eigh(rho)?;
    let min = e.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(shannon_bits(&e.values))
}

/// Shannon entropy in bits; nonpositive entries contribute nothing.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    if m.rows() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit state, got dimension {}",
            m.rows()
        )));
    }
    let yy = pauli(2).tensor(&pauli(2));
    let tilde = &(&yy * &m.conj()) * &yy;
    let s = psd_sqrt(m)?;
    let r = (&(&s * &tilde) * &s).hermitian_part();
    let mut lam: Vec<f64> = eigh(&r)?.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Correlation tensor `T[i][j] = tr(ρ σ_i ⊗ σ_j)` of a two-qubit state.
pub fn correlation_tensor(rho: &ComplexMatrix) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let op = pauli(i + 1).tensor(&pauli(j + 1));
            *x = rho.trace_product(&op).re;
        }
    }
    t
}

/// Largest CHSH value over all measurement settings, `2 sqrt(m1 + m2)` with
/// `m1, m2` the two largest eigenvalues of `TᵀT`.
pub fn chsh_max(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "CHSH needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let t = correlation_tensor(rho.matrix());
    let m = ComplexMatrix::from_fn(3, 3, |a, b| {
        C64::new((0..3).map(|k| t[k][a] * t[k][b]).sum(), 0.0)
    });
    let v = eigh(&m)?.values;
    Ok(2.0 * (v[1] + v[2]).max(0.0).sqrt())
}

/// Uhlmann fidelity `(tr sqrt(sqrt(ρ) σ sqrt(ρ)))²`.
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch("fidelity of differently sized states".into()));
    }
    let s = psd_sqrt(rho)?;
    let inner = (&(&s * sigma) * &s).hermitian_part();
    let tr: f64 = eigh(&inner)?.values.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok(tr * tr)
}

/// Trace distance `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let d = (rho - sigma).hermitian_part();
    Ok(0.5 * eigh(&d)?.values.iter().map(|x| x.abs()).sum::<f64>())
}
