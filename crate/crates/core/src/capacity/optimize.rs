use rand::Rng;

use super::{coherent_information, holevo_quantity, CapacityResult, Ensemble};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qcore::random::seeded;
use crate::qcore::{ComplexMatrix, DensityMatrix, PureState, C64};

/// Multi-start simplex search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evaluations: usize,
    /// Spread of objective values across the simplex at convergence.
    pub tolerance: f64,
    pub seed: u64,
    /// Bloch-ball grid spacing for coherent-information searches.
    pub grid_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_evaluations: 4000,
            tolerance: 1e-7,
            seed: 0x5eed,
            grid_step: 0.05,
        }
    }
}

/// Nelder–Mead minimization from `x0` with initial edge `step`.
///
/// Returns the best point, its value and the number of evaluations.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tolerance: f64,
    max_evaluations: usize,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let mut evals = n + 1;
    let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    while evals < max_evaluations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        values = order.iter().map(|&k| values[k]).collect();
        if values[n] - values[0] <= tolerance {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|x| x[j]).sum::<f64>() / n as f64)
            .collect();
        let reflected = blend(&centroid, &simplex[n], -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = blend(&centroid, &simplex[n], -2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (target, ft) = if fr < values[n] {
                (blend(&centroid, &reflected, 0.5), fr)
            } else {
                (blend(&centroid, &simplex[n], 0.5), values[n])
            };
            let fc = f(&target);
            evals += 1;
            if fc < ft {
                simplex[n] = target;
                values[n] = fc;
            } else {
                for k in 1..=n {
                    simplex[k] = blend(&simplex[0], &simplex[k], 0.5);
                    values[k] = f(&simplex[k]);
                }
                evals += n;
            }
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    (simplex[best].clone(), values[best], evals)
}

const HOLEVO_STATES: usize = 4;

fn pure(theta: f64, phi: f64) -> DensityMatrix {
    PureState::bloch(theta, phi).density()
}

/// Weights by softmax of the trailing parameters.
fn decode_ensemble(x: &[f64]) -> Vec<(f64, (f64, f64))> {
    let logits = &x[2 * HOLEVO_STATES..];
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = exps.iter().sum();
    (0..HOLEVO_STATES)
        .map(|k| (exps[k] / z, (x[2 * k], x[2 * k + 1])))
        .collect()
}

fn qubit_input(ch: &KrausChannel) -> Result<()> {
    if ch.d_in() != 2 {
        return Err(Error::Unsupported(format!(
            "capacity search over qubit inputs, channel input dimension {}",
            ch.d_in()
        )));
    }
    Ok(())
}

/// Pure-state ensemble, renormalizing weights against rounding.
fn ensemble_of(params: &[(f64, (f64, f64))]) -> Result<Ensemble> {
    let total: f64 = params.iter().map(|(p, _)| p).sum();
    Ensemble::new(params.iter().map(|&(p, (t, f))| (p / total, pure(t, f))).collect())
}

/// Maximum Holevo quantity over ensembles of up to four pure qubit states.
pub fn holevo_capacity(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<CapacityResult> {
    qubit_input(ch)?;
    let objective = |x: &[f64]| -> f64 {
        ensemble_of(&decode_ensemble(x))
            .and_then(|e| holevo_quantity(ch, &e))
            .map_or(f64::INFINITY, |v| -v)
    };
    let mut rng = seeded(cfg.seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluations = 0;
    for _ in 0..cfg.restarts {
        let mut x0 = Vec::with_capacity(3 * HOLEVO_STATES);
        for _ in 0..HOLEVO_STATES {
            let u: f64 = rng.random();
            x0.push((1.0 - 2.0 * u).acos());
            x0.push(rng.random::<f64>() * std::f64::consts::TAU);
        }
        x0.extend((0..HOLEVO_STATES).map(|_| rng.random::<f64>() - 0.5));
        let (x, _, n) = nelder_mead(objective, &x0, 0.5, cfg.tolerance, cfg.max_evaluations / 2);
        // restart from the converged point to escape a collapsed simplex
        let (x, fx, m) = nelder_mead(objective, &x, 0.1, cfg.tolerance, cfg.max_evaluations / 2);
        evaluations += n + m;
        if best.as_ref().is_none_or(|(fb, _)| fx < *fb) {
            best = Some((fx, x));
        }
    }
    let (fx, x) = best.ok_or_else(|| Error::InvalidInstance("no optimizer restarts".into()))?;
    let ens = ensemble_of(&decode_ensemble(&x))?;
    Ok(CapacityResult {
        value: (-fx).max(0.0),
        evaluations,
        restarts: cfg.restarts,
        best: ens,
        herald_probability: None,
    })
}

/// Qubit state with Bloch vector `r` shrunk into the unit ball.
fn bloch_state(r: &[f64]) -> DensityMatrix {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let s = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    let (x, y, z) = (r[0] * s, r[1] * s, r[2] * s);
    let m = ComplexMatrix::from_rows(&[
        &[C64::new(1.0 + z, 0.0), C64::new(x, -y)],
        &[C64::new(x, y), C64::new(1.0 - z, 0.0)],
    ])
    .scale_real(0.5);
    DensityMatrix::new(m).expect("Bloch vector inside the unit ball")
}

/// Maximum coherent information over qubit inputs: a Bloch-ball grid
/// followed by simplex refinement from the best grid point.
pub fn max_coherent_information(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<CapacityResult> {
    qubit_input(ch)?;
    let q1 = |r: &[f64]| coherent_information(ch, &bloch_state(r));
    let steps = (1.0 / cfg.grid_step).round() as i64;
    let mut best = (f64::NEG_INFINITY, vec![0.0; 3]);
    let mut evaluations = 0;
    for i in -steps..=steps {
        for j in -steps..=steps {
            for k in -steps..=steps {
                let r = [i, j, k].map(|c| c as f64 * cfg.grid_step);
                if r.iter().map(|c| c * c).sum::<f64>() > 1.0 + 1e-12 {
                    continue;
                }
                let v = q1(&r)?;
                evaluations += 1;
                if v > best.0 {
                    best = (v, r.to_vec());
                }
            }
        }
    }
    let (x, fx, n) = nelder_mead(
        |r| q1(r).map_or(f64::INFINITY, |v| -v),
        &best.1,
        cfg.grid_step,
        cfg.tolerance,
        cfg.max_evaluations,
    );
    evaluations += n;
    let (value, point) = if -fx > best.0 { (-fx, x) } else { best };
    Ok(CapacityResult {
        value,
        evaluations,
        restarts: 1,
        best: Ensemble::new(vec![(1.0, bloch_state(&point))])?,
        herald_probability: None,
    })
}
