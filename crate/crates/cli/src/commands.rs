use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use causalsim::capacity::{CapacityScenario, OptimizerConfig, SweepRow, SweepTable};
use causalsim::process::{visibility_sweep, Scenario, SdpConfig, VisibilityPoint};
use causalsim::protocols::{
    commute_or_anticommute, ee_game, laboratory_unit_sets, make_promise_instance, random_anticommuting_pair,
    random_commuting_pair, solve_hadamard_promise, temporal_bell_experiment, EEInstance, GateRelation,
    HadamardOutcome, TemporalBell, FIXED_ORDER_DISCRIMINATION_BOUND, FIXED_ORDER_HADAMARD_QUERIES,
};
use causalsim::qcore::random::{random_pure_state, seeded};
use causalsim::qcore::{pauli, ComplexMatrix};
use causalsim::report::sig6;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, Common, Format};
use crate::error::CliError;

pub fn run(command: Command) -> Result<(), CliError> {
    let (common, text) = match command {
        Command::Witness {
            common,
            scenario,
            grid,
            max_iterations,
            witness_out,
        } => {
            let text = witness(&common, &scenario, &grid.0, max_iterations, witness_out.as_deref())?;
            (common, text)
        }
        Command::Capacity {
            common,
            scenario,
            grid,
            restarts,
        } => {
            let text = capacity(&common, &scenario, &grid.0, restarts)?;
            (common, text)
        }
        Command::Protocol {
            common,
            scenario,
            samples,
            bits,
        } => {
            let text = protocol(&common, &scenario, samples, bits)?;
            (common, text)
        }
    };
    match &common.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn check_grid(grid: &[f64], what: &str) -> Result<(), CliError> {
    match grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        Some(x) => Err(CliError::Usage(format!("{what} {x} outside [0, 1]"))),
        None => Ok(()),
    }
}

fn sorted(grid: &[f64]) -> Vec<f64> {
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g
}

#[derive(Serialize)]
struct WitnessReport {
    scenario: Scenario,
    iterations: usize,
    threshold: Option<f64>,
    points: Vec<VisibilityPoint>,
}

fn witness(
    common: &Common,
    scenario: &str,
    grid: &[f64],
    max_iterations: usize,
    witness_out: Option<&Path>,
) -> Result<String, CliError> {
    let scenario: Scenario = scenario.parse()?;
    check_grid(grid, "visibility")?;
    if max_iterations == 0 {
        return Err(CliError::Usage("--max-iterations must be positive".into()));
    }
    let cfg = SdpConfig {
        max_iterations,
        ..SdpConfig::default()
    };
    let sweep = visibility_sweep(scenario, &sorted(grid), &cfg)?;
    if let Some(path) = witness_out {
        write_file(path, &sweep.witness.to_json()?)?;
    }
    match common.format.unwrap_or(Format::Csv) {
        Format::Json => json(&WitnessReport {
            scenario,
            iterations: sweep.iterations,
            threshold: sweep.threshold,
            points: sweep.points,
        }),
        Format::Csv => {
            let threshold = sweep.threshold.map(sig6).unwrap_or_default();
            let mut out = String::from("scenario,visibility,witness_value,threshold\n");
            for p in &sweep.points {
                writeln!(out, "{scenario},{},{},{threshold}", sig6(p.visibility), sig6(p.value)).expect("string write");
            }
            Ok(out)
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn capacity(common: &Common, scenario: &str, grid: &[f64], restarts: usize) -> Result<String, CliError> {
    let scenario: CapacityScenario = scenario.parse()?;
    check_grid(grid, "noise strength")?;
    if restarts == 0 {
        return Err(CliError::Usage("--restarts must be positive".into()));
    }
    let cfg = OptimizerConfig {
        restarts,
        seed: common.seed,
        ..OptimizerConfig::default()
    };
    let qs = sorted(grid);
    // every point reseeds from cfg, so rows do not depend on scheduling
    let rows = pool(common.jobs)?.install(|| {
        qs.par_iter()
            .map(|&q| scenario.evaluate(q, &cfg))
            .collect::<causalsim::Result<Vec<SweepRow>>>()
    })?;
    let table = SweepTable {
        scenario,
        rows,
        annotations: scenario.annotations(),
    };
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => json(&table),
    }
}

const PAULI_NAMES: [&str; 4] = ["I", "X", "Y", "Z"];

#[derive(Serialize)]
struct PairRecord {
    first: &'static str,
    second: &'static str,
    expected: GateRelation,
    relation: GateRelation,
    p_plus: f64,
    p_minus: f64,
}

#[derive(Serialize)]
struct FamilyRecord {
    samples: usize,
    correct: usize,
    min_success_probability: f64,
}

#[derive(Serialize)]
struct DiscriminationReport {
    protocol: &'static str,
    seed: u64,
    pauli_pairs: Vec<PairRecord>,
    pauli_correct: usize,
    commuting: FamilyRecord,
    anticommuting: FamilyRecord,
    fixed_order_bound: f64,
}

#[derive(Serialize)]
struct EERecord {
    x: usize,
    y: usize,
    expected: bool,
    value: bool,
    probability: f64,
}

#[derive(Serialize)]
struct EEReport {
    protocol: &'static str,
    seed: u64,
    bits: usize,
    qudit_dim: usize,
    samples: usize,
    correct: usize,
    min_probability: f64,
    instances: Vec<EERecord>,
}

#[derive(Serialize)]
struct HadamardSet {
    units: &'static str,
    columns: Vec<HadamardOutcome>,
}

#[derive(Serialize)]
struct HadamardReport {
    protocol: &'static str,
    d: usize,
    fixed_order_queries: usize,
    sets: Vec<HadamardSet>,
}

#[derive(Serialize)]
struct BellReport {
    protocol: &'static str,
    #[serde(flatten)]
    result: TemporalBell,
}

fn family(
    samples: usize,
    expected: GateRelation,
    mut next: impl FnMut() -> causalsim::Result<(GateRelation, f64)>,
) -> Result<FamilyRecord, CliError> {
    let mut correct = 0;
    let mut min_success_probability: f64 = 1.0;
    for _ in 0..samples {
        let (relation, p) = next()?;
        correct += usize::from(relation == expected);
        min_success_probability = min_success_probability.min(p);
    }
    Ok(FamilyRecord {
        samples,
        correct,
        min_success_probability,
    })
}

fn discrimination(seed: u64, samples: usize) -> Result<String, CliError> {
    let mut rng = seeded(seed);
    let psi = random_pure_state(2, &mut rng);
    let mut pauli_pairs = Vec::with_capacity(16);
    for (a, first) in PAULI_NAMES.iter().enumerate() {
        for (b, second) in PAULI_NAMES.iter().enumerate() {
            let (u, w) = (pauli(a), pauli(b));
            let commutator = &(&u * &w) - &(&w * &u);
            let expected = if commutator.max_abs() < 1e-12 {
                GateRelation::Commuting
            } else {
                GateRelation::Anticommuting
            };
            let r = commute_or_anticommute(&u, &w, &psi)?;
            pauli_pairs.push(PairRecord {
                first,
                second,
                expected,
                relation: r.relation,
                p_plus: r.p_plus,
                p_minus: r.p_minus,
            });
        }
    }
    let pauli_correct = pauli_pairs.iter().filter(|p| p.relation == p.expected).count();
    let mut run = |pair: fn(&mut _) -> (ComplexMatrix, ComplexMatrix), expected| {
        family(samples, expected, || {
            let (u, w) = pair(&mut rng);
            let psi = random_pure_state(2, &mut rng);
            let r = commute_or_anticommute(&u, &w, &psi)?;
            Ok((r.relation, r.success_probability()))
        })
    };
    let commuting = run(random_commuting_pair, GateRelation::Commuting)?;
    let anticommuting = run(random_anticommuting_pair, GateRelation::Anticommuting)?;
    json(&DiscriminationReport {
        protocol: "discriminate",
        seed,
        pauli_pairs,
        pauli_correct,
        commuting,
        anticommuting,
        fixed_order_bound: FIXED_ORDER_DISCRIMINATION_BOUND,
    })
}

fn exchange(seed: u64, samples: usize, bits: usize) -> Result<String, CliError> {
    let mut rng = seeded(seed);
    let mut instances = Vec::with_capacity(samples);
    for _ in 0..samples {
        let inst = EEInstance::random(bits, &mut rng)?;
        let out = ee_game(&inst)?;
        instances.push(EERecord {
            x: inst.x(),
            y: inst.y(),
            expected: inst.classical_value(),
            value: out.value,
            probability: out.probability,
        });
    }
    json(&EEReport {
        protocol: "ee",
        seed,
        bits,
        qudit_dim: 2 << bits,
        samples,
        correct: instances.iter().filter(|r| r.value == r.expected).count(),
        min_probability: instances.iter().map(|r| r.probability).fold(1.0, f64::min),
        instances,
    })
}

fn hadamard() -> Result<String, CliError> {
    let d = 4;
    let mut sets = Vec::new();
    for (label, units) in laboratory_unit_sets() {
        let columns = (0..d)
            .map(|y| solve_hadamard_promise(&make_promise_instance(units.clone(), d, y)?))
            .collect::<causalsim::Result<_>>()?;
        sets.push(HadamardSet { units: label, columns });
    }
    json(&HadamardReport {
        protocol: "hadamard",
        d,
        fixed_order_queries: FIXED_ORDER_HADAMARD_QUERIES,
        sets,
    })
}

fn protocol(common: &Common, name: &str, samples: usize, bits: usize) -> Result<String, CliError> {
    if common.format == Some(Format::Csv) {
        return Err(CliError::Usage("protocol reports are JSON only".into()));
    }
    match name {
        "discriminate" => discrimination(common.seed, samples),
        "ee" => exchange(common.seed, samples, bits),
        "hadamard" => hadamard(),
        "bell" => json(&BellReport {
            protocol: "bell",
            result: temporal_bell_experiment()?,
        }),
        other => Err(causalsim::Error::UnknownScenario(other.to_string()).into()),
    }
}
