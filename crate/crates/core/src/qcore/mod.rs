//! Dense complex linear algebra and quantum-state primitives.

pub mod eigen;
pub mod info;
pub mod matrix;
pub mod random;
pub mod state;

pub use eigen::{eigh, psd_projection, psd_sqrt, HermitianEigen};
pub use info::{chsh_max, concurrence, fidelity, shannon_bits, trace_distance, vn_entropy};
pub use matrix::{ComplexMatrix, C64, I, ONE, ZERO};
pub use state::{DensityMatrix, PureState};

/// Tolerance on norms, traces and Hermiticity of validated objects.
pub const NORM_TOL: f64 = 1e-9;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;

/// Pauli matrix `σ_k` with `σ_0 = I`.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Projector onto a normalized qubit vector.
pub fn qubit_projector(alpha: C64, beta: C64) -> ComplexMatrix {
    ComplexMatrix::outer(&[alpha, beta], &[alpha, beta])
}
