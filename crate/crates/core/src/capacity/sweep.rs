use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use super::herald::{corrected_pauli_channel, heralded_channel, switch_effective_channel, MINUS, PLUS};
use super::optimize::{holevo_capacity, max_coherent_information, OptimizerConfig};
use crate::channels::{compose, PauliDistribution};
use crate::error::{Error, Result};
use crate::report::sig6;
use crate::switch::SwitchSpec;

pub const CSV_HEADER: &str = "scenario,q,definite_value,switch_value,herald_probability";

/// Laboratory figure kept beside a sweep for comparison; never a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annotation {
    pub label: &'static str,
    pub low: f64,
    pub high: f64,
}

/// Channel pairs swept over a noise strength `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityScenario {
    /// Two depolarizing channels of strength `q`; Holevo capacity.
    DepDep,
    /// `σ_z` conjugation and a depolarizing channel of strength `q`; Holevo capacity.
    UnitaryDep,
    /// Bit flip and phase flip with probability `q`; coherent information,
    /// the switch heralded on its better control outcome.
    BitflipPhaseflip,
    /// Both channels `(1-q)·id + q·(0, ½, ½, 0)`; coherent information of the
    /// switch corrected by the dominant Pauli of each control outcome.
    EbEb,
}

impl CapacityScenario {
    pub const ALL: [CapacityScenario; 4] = [
        Self::DepDep,
        Self::UnitaryDep,
        Self::BitflipPhaseflip,
        Self::EbEb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::DepDep => "dep+dep",
            Self::UnitaryDep => "unitary+dep",
            Self::BitflipPhaseflip => "bitflip+phaseflip",
            Self::EbEb => "eb+eb",
        }
    }

    /// Channel pair at noise strength `q`.
    pub fn channels(&self, q: f64) -> Result<(PauliDistribution, PauliDistribution)> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange(format!("noise strength {q} outside [0, 1]")));
        }
        Ok(match self {
            Self::DepDep => (PauliDistribution::depolarizing(q)?, PauliDistribution::depolarizing(q)?),
            Self::UnitaryDep => (PauliDistribution::pauli_unitary(3), PauliDistribution::depolarizing(q)?),
            Self::BitflipPhaseflip => (PauliDistribution::bit_flip(q)?, PauliDistribution::phase_flip(q)?),
            Self::EbEb => {
                let p = PauliDistribution::new([1.0 - q, q / 2.0, q / 2.0, 0.0])?;
                (p, p)
            }
        })
    }

    /// Experimental figures reported for this configuration.
    pub fn annotations(&self) -> &'static [Annotation] {
        match self {
            Self::DepDep => &[Annotation {
                label: "measured switch Holevo quantity, fully depolarizing pair",
                low: 0.0422,
                high: 0.0432,
            }],
            Self::UnitaryDep => &[Annotation {
                label: "measured switch Holevo quantity, sigma_z and fully depolarizing",
                low: 0.62,
                high: 0.66,
            }],
            Self::BitflipPhaseflip => &[Annotation {
                label: "measured heralded coherent information at q = 1/2",
                low: 0.809,
                high: 0.815,
            }],
            Self::EbEb => &[Annotation {
                label: "measured corrected coherent information at q = 1",
                low: 0.851,
                high: 0.859,
            }],
        }
    }

    /// Definite-order baseline, switch value and heralding probability at `q`.
    pub fn evaluate(&self, q: f64, cfg: &OptimizerConfig) -> Result<SweepRow> {
        let (p, r) = self.channels(q)?;
        let spec = SwitchSpec::pauli(p, r);
        let definite = compose(&r.channel(), &p.channel())?;
        let (definite_value, switch_value, herald_probability) = match self {
            Self::DepDep | Self::UnitaryDep => (
                holevo_capacity(&definite, cfg)?.value,
                holevo_capacity(&switch_effective_channel(&spec)?, cfg)?.value,
                None,
            ),
            Self::BitflipPhaseflip => {
                let mut best: Option<(f64, f64)> = None;
                for outcome in [PLUS, MINUS] {
                    let h = match heralded_channel(&spec, &outcome) {
                        Ok(h) => h,
                        Err(Error::ZeroProbability) => continue,
                        Err(e) => return Err(e),
                    };
                    let value = max_coherent_information(&h.channel, cfg)?.value;
                    if best.is_none_or(|(v, _)| value > v + 1e-9) {
                        best = Some((value, h.probability));
                    }
                }
                let (value, prob) = best.ok_or(Error::ZeroProbability)?;
                (max_coherent_information(&definite, cfg)?.value, value, Some(prob))
            }
            Self::EbEb => {
                let corrected = corrected_pauli_channel(&spec)?.channel.channel();
                (
                    max_coherent_information(&definite, cfg)?.value,
                    max_coherent_information(&corrected, cfg)?.value,
                    None,
                )
            }
        };
        Ok(SweepRow {
            scenario: *self,
            q,
            definite_value,
            switch_value,
            herald_probability,
        })
    }
}

impl fmt::Display for CapacityScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CapacityScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario: CapacityScenario,
    pub q: f64,
    pub definite_value: f64,
    pub switch_value: f64,
    pub herald_probability: Option<f64>,
}

/// Rows ordered by `q`, with the scenario's annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub scenario: CapacityScenario,
    pub rows: Vec<SweepRow>,
    pub annotations: &'static [Annotation],
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let herald = r.herald_probability.map(sig6).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{}",
                r.scenario,
                sig6(r.q),
                sig6(r.definite_value),
                sig6(r.switch_value),
                herald
            )
            .expect("write to string");
        }
        out
    }
}

/// Evaluates `scenario` at every `q` in `grid`, sorted ascending.
pub fn capacity_sweep(scenario: CapacityScenario, grid: &[f64], cfg: &OptimizerConfig) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut qs = grid.to_vec();
    qs.sort_by(f64::total_cmp);
    let rows = qs
        .iter()
        .map(|&q| scenario.evaluate(q, cfg))
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        scenario,
        rows,
        annotations: scenario.annotations(),
    })
}
