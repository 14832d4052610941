//! Hermitian eigendecomposition by the cyclic complex Jacobi method.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V†`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        for (k, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let col = v.column(k);
            for i in 0..n {
                let a = col[i] * w;
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * col[j].conj();
                }
            }
        }
        out
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Diagonalizes a Hermitian matrix. Input is symmetrized first; a deviation
/// from Hermiticity beyond `1e-9` (relative to the largest entry) is an error.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(1.0);
    if m.hermiticity_error() > 1e-9 * scale {
        return Err(Error::InvalidState(format!(
            "matrix is not Hermitian (deviation {:e})",
            m.hermiticity_error()
        )));
    }
    let n = m.rows();
    let mut a = m.hermitian_part().without_dims().into_data();
    let mut v = ComplexMatrix::identity(n).into_data();

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let eps = f64::EPSILON * f64::EPSILON * total.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[i * n + order[k]]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Phase rotation makes the pivot real, then a real Jacobi rotation.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] acting on columns (p, q).
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * g_pp + vkq * g_qp;
        v[k * n + q] = vkp * g_pq + vkq * g_qq;
    }
}

/// Principal square root of a positive semidefinite matrix; small negative
/// eigenvalues are clipped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eigh(m)?.reconstruct(|x| x.max(0.0).sqrt()))
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn psd_projection(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eigh(m)?.reconstruct(|x| x.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::{random_hermitian, seeded};

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::real_diagonal(&[3.0, -1.0, 2.0]);
        let e = eigh(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = ComplexMatrix::from_rows(&[&[ZERO, C64::new(0.0, -1.0)], &[C64::new(0.0, 1.0), ZERO]]);
        let e = eigh(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        let mut rng = seeded(21);
        for n in [1, 2, 5, 16, 33] {
            let m = random_hermitian(n, &mut rng);
            let e = eigh(&m).unwrap();
            assert!(e.reconstruct(|x| x).approx_eq(&m, 1e-11), "n = {n}");
            let vtv = &e.vectors.dagger() * &e.vectors;
            assert!(vtv.approx_eq(&ComplexMatrix::identity(n), 1e-12));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(eigh(&m).is_err());
    }

    #[test]
    fn degenerate_spectrum() {
        let m = ComplexMatrix::identity(6).scale_real(2.5);
        let e = eigh(&m).unwrap();
        assert!(e.values.iter().all(|&x| (x - 2.5).abs() < 1e-15));
    }
}
