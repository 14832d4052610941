//! Causal-witness semidefinite program.
//!
//! Primal (robustness): maximize `r` such that `W - rΩ ≡ X₁ + X₂` on the
//! measurable span, with `X_i` positive and inside the span of causal order `i`.
//! Dual (witness): minimize `tr[S W]` over `S` in the measurable span with
//! `S ∈ PSD + span_i^⊥` for both orders and `tr[S Ω] = 1`.
//!
//! The dual is solved by ADMM on the splitting `S = Q_i + Y_i`,
//! `Q_i ⊥ span_i`, `Y_i ⪰ 0`. Scaled multipliers of the splitting give the
//! primal decomposition `X_i = -ρ U_i`.

use nalgebra::DMatrix;

use super::cone::OrderedProcessCone;
use super::restriction::LocalSpan;
use super::{ProcessMatrix, Witness};
use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, C64};

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpConfig {
    pub max_iterations: usize,
    /// Bound on the relative primal and dual residuals and the relative duality gap.
    pub tolerance: f64,
    /// Initial ADMM penalty; adapted by residual balancing.
    pub penalty: f64,
    /// Over-relaxation factor in `[1, 2)`.
    pub relaxation: f64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5_000,
            tolerance: 1e-6,
            penalty: 1.0,
            relaxation: 1.6,
        }
    }
}

/// Optimal witness together with the robustness decomposition.
#[derive(Debug, Clone)]
pub struct WitnessSolution {
    /// Witness shifted into the exact feasible set and renormalized.
    pub witness: Witness,
    /// `tr[S W]` of the returned witness.
    pub value: f64,
    /// Robustness `r` from the multipliers; a lower bound on `value` up to solver accuracy.
    pub dual_value: f64,
    /// Ordered components `X₁, X₂` with `W - rΩ ≈ X₁ + X₂`.
    pub components: [ComplexMatrix; 2],
    pub iterations: usize,
    pub residual: f64,
}

/// Outcome of a causal-separability test.
#[derive(Debug, Clone)]
pub enum SeparabilityVerdict {
    /// `W = Σ p_i W_i` with each `W_i` in the cone of order `i`.
    Separable {
        weights: [f64; 2],
        components: [ProcessMatrix; 2],
        residual: f64,
    },
    /// A witness with `tr[S W] < -tol`.
    Nonseparable { witness: Witness, value: f64 },
    /// The solver stopped before either conclusion was reached.
    Indeterminate { value: f64, residual: f64 },
}

impl SeparabilityVerdict {
    pub fn is_separable(&self) -> bool {
        matches!(self, Self::Separable { .. })
    }

    pub fn is_nonseparable(&self) -> bool {
        matches!(self, Self::Nonseparable { .. })
    }
}

/// Nearest positive semidefinite matrix of a Hermitian input.
///
/// Row-major data read as column-major is the transpose, which for a
/// Hermitian matrix is its conjugate; projecting the conjugate and reading the
/// result back undoes both.
fn psd_part(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows();
    let m = DMatrix::from_vec(n, n, x.data().to_vec());
    let eig = m.symmetric_eigen();
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    if keep.is_empty() {
        return ComplexMatrix::zeros(n, n);
    }
    let mut b = DMatrix::<C64>::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        for r in 0..n {
            b[(r, c)] = eig.eigenvectors[(r, k)] * s;
        }
    }
    let p = &b * b.adjoint();
    ComplexMatrix::from_vec(n, n, p.as_slice().to_vec())
        .expect("square")
        .hermitian_part()
}

struct Engine<'a> {
    cones: [OrderedProcessCone; 2],
    span: Option<&'a LocalSpan>,
}

impl Engine<'_> {
    fn restrict(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match self.span {
            Some(s) => s.project(x),
            None => x.clone().without_dims(),
        }
    }

    /// `K X = Π_V (P₁ + P₂) X` on the measurable span.
    fn normal_op(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut y = self.cones[0].project(x);
        y += &self.cones[1].project(x);
        self.restrict(&y)
    }

    /// Conjugate gradients for `K X = rhs`, warm-started at `x0`.
    fn solve(&self, rhs: &ComplexMatrix, x0: ComplexMatrix, tol: f64, max_iter: usize) -> ComplexMatrix {
        let mut x = x0;
        let mut r = rhs - &self.normal_op(&x);
        let mut p = r.clone();
        let mut rr = r.inner(&r);
        let target = (tol * rhs.frobenius_norm()).powi(2).max(1e-300);
        for _ in 0..max_iter {
            if rr <= target {
                break;
            }
            let kp = self.normal_op(&p);
            let pkp = p.inner(&kp);
            if pkp <= 0.0 {
                break;
            }
            let alpha = rr / pkp;
            x.axpy(C64::new(alpha, 0.0), &p);
            r.axpy(C64::new(-alpha, 0.0), &kp);
            let rr_new = r.inner(&r);
            let beta = rr_new / rr;
            rr = rr_new;
            p = &r + &p.scale_real(beta);
        }
        x
    }
}

/// White-noise process `tr(W) I / n` used for normalization.
fn white_noise(w: &ProcessMatrix) -> ComplexMatrix {
    let n = w.matrix().rows();
    ComplexMatrix::identity(n).scale_real(w.trace() / n as f64)
}

/// Minimizes `tr[S W]` over normalized witnesses in `restriction` (or all
/// Hermitian operators).
pub fn optimal_witness(
    w: &ProcessMatrix,
    restriction: Option<&LocalSpan>,
    cfg: &SdpConfig,
) -> Result<WitnessSolution> {
    let engine = Engine {
        cones: OrderedProcessCone::switch_cones(w.slots())?,
        span: restriction,
    };
    let n = w.matrix().rows();
    let omega = white_noise(w);
    let wm = engine.restrict(w.matrix());
    let omega_v = engine.restrict(&omega);
    if omega_v.frobenius_norm() < 1e-12 {
        return Err(Error::InfeasibleRestriction(
            "normalization cannot be met inside the measurable span".into(),
        ));
    }
    let zero = ComplexMatrix::zeros(n, n);
    let g = engine.solve(&omega_v, zero.clone(), 1e-13, 2000);
    let g_omega = g.inner(&omega);
    if g_omega <= 1e-14 {
        return Err(Error::InfeasibleRestriction("degenerate normalization direction".into()));
    }

    let mut rho = cfg.penalty;
    let alpha = cfg.relaxation;
    let mut s = g.scale_real(1.0 / g_omega);
    let mut s0 = s.clone();
    let mut y = [zero.clone(), zero.clone()];
    let mut u = [zero.clone(), zero.clone()];
    let mut shift = 0.0;
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let w_norm = wm.frobenius_norm().max(1.0);

    while iterations < cfg.max_iterations {
        iterations += 1;
        let m = [&y[0] - &u[0], &y[1] - &u[1]];
        let mut rhs = engine.cones[0].project(&m[0]);
        rhs += &engine.cones[1].project(&m[1]);
        let mut rhs = engine.restrict(&rhs);
        rhs.axpy(C64::new(-1.0 / rho, 0.0), &wm);
        s0 = engine.solve(&rhs, s0, 1e-10, 200);
        shift = (s0.inner(&omega) - 1.0) / g_omega;
        s = &s0 - &g.scale_real(shift);

        let mut primal = 0.0;
        let mut dual = 0.0;
        let mut y_scale: f64 = 0.0;
        for i in 0..2 {
            // S - Q_i with Q_i the component of S - M_i orthogonal to the order span
            let sq = &engine.cones[i].project(&(&s - &m[i])) + &m[i];
            let relaxed = &sq.scale_real(alpha) + &y[i].scale_real(1.0 - alpha);
            let a = &relaxed + &u[i];
            let y_new = psd_part(&a);
            u[i] = &a - &y_new;
            primal += (&sq - &y_new).frobenius_norm().powi(2);
            dual += (&y_new - &y[i]).frobenius_norm().powi(2);
            y_scale = y_scale.max(y_new.frobenius_norm());
            y[i] = y_new;
        }
        let primal = primal.sqrt() / (1.0 + s.frobenius_norm().max(y_scale));
        let dual = rho * dual.sqrt() / w_norm;
        let value = s.inner(&wm);
        let robustness = -rho * shift;
        let gap = (value - robustness).abs() / (1.0 + value.abs());
        residual = primal.max(dual).max(gap);
        if residual <= cfg.tolerance {
            converged = true;
            break;
        }
        if iterations % 10 == 0 {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u[0] = u[0].scale_real(0.5);
                u[1] = u[1].scale_real(0.5);
            } else if dual > 10.0 * primal {
                rho *= 0.5;
                u[0] = u[0].scale_real(2.0);
                u[1] = u[1].scale_real(2.0);
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }

    let witness = certify(&engine, &s, &y, &omega, n)?;
    let value = witness.inner(w.matrix());
    let components = [u[0].scale_real(-rho), u[1].scale_real(-rho)];
    Ok(WitnessSolution {
        witness: Witness::from_trusted(witness, w.slots().to_vec()),
        value,
        dual_value: -rho * shift,
        components,
        iterations,
        residual,
    })
}

/// Moves `S` into the exact dual cone: `S + δN` with `N ≡ I` modulo both
/// order complements, where `δ` bounds the splitting residual in operator
/// norm, then restores `tr[S Ω] = 1`.
fn certify(
    engine: &Engine<'_>,
    s: &ComplexMatrix,
    y: &[ComplexMatrix; 2],
    omega: &ComplexMatrix,
    n: usize,
) -> Result<ComplexMatrix> {
    let id = ComplexMatrix::identity(n);
    let mut target = engine.cones[0].project(&id);
    target += &engine.cones[1].project(&id);
    let target = engine.restrict(&target);
    let nn = engine.solve(&target, ComplexMatrix::zeros(n, n), 1e-14, 5000);
    let mut leak: f64 = 0.0;
    let mut delta: f64 = 0.0;
    for (cone, yi) in engine.cones.iter().zip(y) {
        leak = leak.max(cone.project(&(&nn - &id)).frobenius_norm());
        delta = delta.max(cone.project(&(s - yi)).frobenius_norm());
    }
    if leak >= 0.5 {
        return Err(Error::InfeasibleRestriction(
            "measurable span has no strictly feasible witness".into(),
        ));
    }
    // margin for rounding in the positive parts
    let delta = delta / (1.0 - leak) + 1e-12 * s.frobenius_norm().max(1.0);
    let mut out = s.clone();
    out.axpy(C64::new(delta, 0.0), &nn);
    let norm = out.inner(omega);
    Ok(out.scale_real(1.0 / norm).hermitian_part())
}

/// Decides causal separability of `w` (unrestricted witnesses).
pub fn is_causally_separable(w: &ProcessMatrix, tol: f64, cfg: &SdpConfig) -> Result<SeparabilityVerdict> {
    let sol = match optimal_witness(w, None, cfg) {
        Ok(sol) => sol,
        Err(Error::NonConvergence { residual, .. }) => {
            return Ok(SeparabilityVerdict::Indeterminate {
                value: f64::NAN,
                residual,
            })
        }
        Err(e) => return Err(e),
    };
    if sol.value < -tol {
        return Ok(SeparabilityVerdict::Nonseparable {
            witness: sol.witness,
            value: sol.value,
        });
    }
    if sol.dual_value < -tol {
        return Ok(SeparabilityVerdict::Indeterminate {
            value: sol.value,
            residual: sol.residual,
        });
    }
    let cones = OrderedProcessCone::switch_cones(w.slots())?;
    // absorb the white-noise slack, which lies in both orders
    let slack = white_noise(w).scale_real(sol.dual_value.max(0.0) / 2.0);
    let mut parts = Vec::with_capacity(2);
    for (cone, x) in cones.iter().zip(&sol.components) {
        let mut c = cone.project(&(x + &slack)).hermitian_part();
        // clip rounding-level negativity
        c = psd_part(&c);
        parts.push(cone.project(&c).hermitian_part());
    }
    let total = &parts[0] + &parts[1];
    let residual = total.max_abs_diff(&w.matrix().clone().without_dims());
    if residual > tol {
        return Ok(SeparabilityVerdict::Indeterminate {
            value: sol.value,
            residual,
        });
    }
    let traces = [parts[0].trace().re, parts[1].trace().re];
    let sum = traces[0] + traces[1];
    let weights = [traces[0] / sum, traces[1] / sum];
    let norm = w.trace();
    let components = [0, 1].map(|i| {
        let scale = if traces[i] > 0.0 { norm / traces[i] } else { 0.0 };
        ProcessMatrix::from_trusted(parts[i].scale_real(scale), w.slots().to_vec())
    });
    Ok(SeparabilityVerdict::Separable {
        weights,
        components,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{dephase_control_process, ordered_switch_processes, switch_process};
    use crate::qcore::psd_projection;
    use crate::qcore::random::{random_hermitian, seeded};

    #[test]
    fn fast_psd_part_matches_jacobi() {
        let x = random_hermitian(24, &mut seeded(14));
        assert!(psd_part(&x).approx_eq(&psd_projection(&x).unwrap(), 1e-10));
    }

    #[test]
    fn ordered_branch_is_separable() {
        let (a, _) = ordered_switch_processes(2);
        let verdict = is_causally_separable(&a, 1e-6, &SdpConfig::default()).unwrap();
        let SeparabilityVerdict::Separable { weights, components, .. } = verdict else {
            panic!("expected a decomposition, got {verdict:?}");
        };
        assert!((weights[0] - 1.0).abs() < 1e-6);
        let cones = OrderedProcessCone::switch_cones(a.slots()).unwrap();
        assert!(cones[0].contains(&components[0], 1e-6).unwrap());
    }

    #[test]
    fn dephased_switch_splits_evenly() {
        let w = dephase_control_process(&switch_process(2), 0.0).unwrap();
        let verdict = is_causally_separable(&w, 1e-6, &SdpConfig::default()).unwrap();
        let SeparabilityVerdict::Separable { weights, components, residual } = verdict else {
            panic!("expected a decomposition, got {verdict:?}");
        };
        assert!(residual <= 1e-6);
        assert!((weights[0] - 0.5).abs() < 1e-6 && (weights[1] - 0.5).abs() < 1e-6);
        let cones = OrderedProcessCone::switch_cones(w.slots()).unwrap();
        for (cone, c) in cones.iter().zip(&components) {
            assert!(cone.contains(c, 1e-6).unwrap());
            assert!((c.trace() - 8.0).abs() < 1e-6);
        }
    }

    #[test]
    fn iteration_cap_is_reported() {
        let cfg = SdpConfig {
            max_iterations: 3,
            ..SdpConfig::default()
        };
        let err = optimal_witness(&switch_process(2), None, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 3, .. }));
        let verdict = is_causally_separable(&switch_process(2), 1e-6, &cfg).unwrap();
        assert!(matches!(verdict, SeparabilityVerdict::Indeterminate { .. }));
    }
}
