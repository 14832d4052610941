use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "causalsim", version, about = "Quantum switch experiments as reproducible batch runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal causal witness of a scenario, evaluated across control visibilities.
    Witness {
        #[command(flatten)]
        common: Common,
        /// ideal, rubino or goswami.
        #[arg(long, default_value = "ideal")]
        scenario: String,
        /// Visibilities as `start:stop:step` or a single value.
        #[arg(long, default_value = "0:1:0.1")]
        grid: Grid,
        #[arg(long, default_value_t = 5000)]
        max_iterations: usize,
        /// Also write the witness operator as JSON to this path.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Definite-order and switched capacities across noise strengths.
    Capacity {
        #[command(flatten)]
        common: Common,
        /// dep+dep, unitary+dep, bitflip+phaseflip or eb+eb.
        #[arg(long, default_value = "dep+dep")]
        scenario: String,
        /// Noise strengths as `start:stop:step` or a single value.
        #[arg(long, default_value = "0:1:0.1")]
        grid: Grid,
        /// Optimizer restarts per Holevo search.
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// End-to-end protocol simulation with a JSON report.
    Protocol {
        #[command(flatten)]
        common: Common,
        /// discriminate, ee, hadamard or bell.
        #[arg(long)]
        scenario: String,
        /// Random instances per family.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Bit-string length for the exchange-evaluation game.
        #[arg(long, default_value_t = 3)]
        bits: usize,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Worker threads for sweeps; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive arithmetic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<f64, String> {
            let x: f64 = t.trim().parse().map_err(|_| format!("bad number {t:?} in grid {s:?}"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("non-finite value in grid {s:?}"))
            }
        };
        match parts.as_slice() {
            [one] => Ok(Grid(vec![num(one)?])),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if step <= 0.0 || b < a {
                    return Err(format!("grid {s:?} needs start <= stop and a positive step"));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                if count > 100_000 {
                    return Err(format!("grid {s:?} has more than 100000 points"));
                }
                // rounding keeps 0.1-steps free of representation noise
                let round = |x: f64| (x * 1e12).round() / 1e12;
                Ok(Grid((0..=count).map(|k| round(a + k as f64 * step)).collect()))
            }
            _ => Err(format!("grid {s:?} is not start:stop:step")),
        }
    }
}
