use serde::Serialize;

use super::scenario::Scenario;
use super::sdp::{optimal_witness, SdpConfig};
use super::{witness_value, Witness};
use crate::error::{Error, Result};

/// Witness value of one dephased process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityPoint {
    pub visibility: f64,
    pub value: f64,
}

/// A fixed witness, optimal for the coherent switch, evaluated across
/// control visibilities.
#[derive(Debug, Clone)]
pub struct VisibilitySweep {
    pub scenario: Scenario,
    pub witness: Witness,
    pub points: Vec<VisibilityPoint>,
    /// Visibility below which the witness no longer certifies nonseparability.
    pub threshold: Option<f64>,
    pub iterations: usize,
}

/// Zero crossing of `f` in `[lo, hi]` when `f(lo) ≥ 0 > f(hi)`.
pub fn bisect_crossing(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    let (mut a, mut b) = (lo, hi);
    if f(a)? < 0.0 || f(b)? >= 0.0 {
        return Ok(None);
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if f(mid)? >= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Sweeps `grid` with the witness optimized at visibility one.
pub fn visibility_sweep(scenario: Scenario, grid: &[f64], cfg: &SdpConfig) -> Result<VisibilitySweep> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let coherent = scenario.process(1.0)?;
    let span = scenario.restriction(&coherent)?;
    let sol = optimal_witness(&coherent, span.as_ref(), cfg)?;
    let value_at = |v: f64| -> Result<f64> { witness_value(&sol.witness, &scenario.process(v)?) };
    let points = grid
        .iter()
        .map(|&v| {
            Ok(VisibilityPoint {
                visibility: v,
                value: value_at(v)?,
            })
        })
        .collect::<Result<_>>()?;
    let threshold = bisect_crossing(value_at, 0.0, 1.0, 1e-10)?;
    Ok(VisibilitySweep {
        scenario,
        witness: sol.witness,
        points,
        threshold,
        iterations: sol.iterations,
    })
}
