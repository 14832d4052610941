//! Acceptance checks. Each test prints one `criterion N: PASS|FAIL` line.

use causalsim::capacity::{
    corrected_pauli_channel, heralded_channel, heralded_pauli_mixtures, max_coherent_information, CapacityScenario,
    OptimizerConfig, MINUS,
};
use causalsim::channels::{
    choi_to_kraus, compose, kraus_to_choi, random_channel, validate_cptp, KrausChannel, PauliDistribution,
};
use causalsim::process::{
    contract, controlled_switch_process, is_causally_separable, optimal_witness, random_separable_process,
    visibility_sweep, witness_value, PartyOperator, Scenario, SdpConfig, Witness, A_IN, A_OUT, B_IN, B_OUT,
    CONTROL_FUTURE, CONTROL_PAST, TARGET_FUTURE, TARGET_PAST,
};
use causalsim::protocols::{
    commute_or_anticommute, ee_game, laboratory_unit_sets, make_promise_instance, random_anticommuting_pair,
    random_commuting_pair, solve_hadamard_promise, temporal_bell_experiment, EEInstance, GateRelation,
    FIXED_ORDER_DISCRIMINATION_BOUND, FIXED_ORDER_HADAMARD_QUERIES,
};
use causalsim::qcore::random::{random_density, random_pure_state, random_simplex, seeded};
use causalsim::qcore::{pauli, ComplexMatrix, DensityMatrix, PureState};
use causalsim::switch::{aux_maps, switch_kraus, switch_output, SwitchSpec};
use rand::Rng;

const CHI_DEP_DEP: f64 = 0.049;
const CHI_DEP_DEP_TOL: f64 = 1e-3;
const MONOTONE_SLACK: f64 = 1e-6;
const UNIT_CAPACITY_TOL: f64 = 1e-3;
const ZERO_CAPACITY_TOL: f64 = 1e-6;
const HERALD_TOL: f64 = 1e-9;
const Q1_TOL: f64 = 1e-6;
const AUX_TOL: f64 = 1e-12;
const IDEAL_WITNESS_BOUND: f64 = -0.1;
const SEPARABLE_WITNESS_TOL: f64 = 1e-7;
const SEPARABLE_SAMPLES: usize = 200;
const SEPARABILITY_TOL: f64 = 1e-6;
const RUBINO_WINDOW: (f64, f64) = (0.60, 0.72);
const REPORTED_RUBINO: f64 = -0.2842;
const REPORTED_GOSWAMI: f64 = -0.248;
const STRETCH_REL: f64 = 0.05;
const CROSS_TOL: f64 = 1e-9;
const CROSS_SAMPLES: usize = 100;
const OUTCOME_TOL: f64 = 1e-9;
const RANDOM_PAIRS: usize = 100;
const EE_TABLES: usize = 20;
const EE_RANDOM_N3: usize = 200;
const HADAMARD_MIN_SUCCESS: f64 = 0.999;
const BELL_FIDELITY_TOL: f64 = 1e-9;
const BELL_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL: f64 = 1e-9;
const ROUND_TRIP_CHANNELS: u64 = 50;

fn report(n: usize, ok: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn finish(n: usize, checks: &[(bool, String)]) {
    let ok = checks.iter().all(|(c, _)| *c);
    let detail: Vec<String> = checks
        .iter()
        .map(|(c, d)| format!("[{}] {d}", if *c { "ok" } else { "fail" }))
        .collect();
    report(n, ok, &detail.join("; "));
    assert!(ok, "criterion {n} failed: {}", detail.join("; "));
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn choi_of(ch: &KrausChannel) -> ComplexMatrix {
    kraus_to_choi(ch).matrix().clone().without_dims()
}

#[test]
fn criterion_01_dep_dep_holevo() {
    let row = CapacityScenario::DepDep.evaluate(1.0, &OptimizerConfig::default()).unwrap();
    finish(
        1,
        &[(
            within(row.switch_value, CHI_DEP_DEP, CHI_DEP_DEP_TOL),
            format!("chi_switch(q=1) = {:.6} (target {CHI_DEP_DEP} ± {CHI_DEP_DEP_TOL})", row.switch_value),
        )],
    );
}

#[test]
fn criterion_02_dep_dep_sweep_shape() {
    let cfg = OptimizerConfig::default();
    let qs: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let chi: Vec<f64> = qs
        .iter()
        .map(|&q| CapacityScenario::DepDep.evaluate(q, &cfg).unwrap().switch_value)
        .collect();
    let rises: Vec<String> = chi
        .windows(2)
        .zip(&qs)
        .filter(|(w, _)| w[1] > w[0] + MONOTONE_SLACK)
        .map(|(w, q)| format!("q={q:.1}->{:.1}: {:.6}->{:.6}", q + 0.1, w[0], w[1]))
        .collect();
    let table: Vec<String> = qs.iter().zip(&chi).map(|(q, c)| format!("{q:.1}:{c:.6}")).collect();
    println!("dep+dep chi_switch by q: {}", table.join(" "));
    finish(
        2,
        &[
            (within(chi[0], 1.0, UNIT_CAPACITY_TOL), format!("chi(0) = {:.6}", chi[0])),
            (
                rises.is_empty(),
                if rises.is_empty() {
                    "monotone nonincreasing".to_string()
                } else {
                    format!("not monotone nonincreasing: {}", rises.join(", "))
                },
            ),
            (chi[10] > 0.0, format!("chi(1) = {:.6} > 0", chi[10])),
        ],
    );
}

#[test]
fn criterion_03_unitary_dep() {
    let row = CapacityScenario::UnitaryDep.evaluate(1.0, &OptimizerConfig::default()).unwrap();
    finish(
        3,
        &[
            (
                within(row.switch_value, 1.0, UNIT_CAPACITY_TOL),
                format!("switch = {:.6}", row.switch_value),
            ),
            (
                within(row.definite_value, 0.0, ZERO_CAPACITY_TOL),
                format!("definite = {:.2e}", row.definite_value),
            ),
        ],
    );
}

#[test]
fn criterion_04_heralded_sigma_y() {
    let spec = SwitchSpec::pauli(
        PauliDistribution::bit_flip(0.5).unwrap(),
        PauliDistribution::phase_flip(0.5).unwrap(),
    );
    let h = heralded_channel(&spec, &MINUS).unwrap();
    let y = KrausChannel::unitary(pauli(2)).unwrap();
    let dist = choi_of(&h.channel).max_abs_diff(&choi_of(&y));
    let q1 = max_coherent_information(&h.channel, &OptimizerConfig::default()).unwrap().value;
    finish(
        4,
        &[
            (within(h.probability, 0.25, HERALD_TOL), format!("p(-) = {:.12}", h.probability)),
            (dist <= HERALD_TOL, format!("max |choi - choi(sigma_y)| = {dist:.1e}")),
            (within(q1, 1.0, Q1_TOL), format!("Q1 = {q1:.9}")),
        ],
    );
}

/// Distance between a Pauli weight vector and the ray through basis vector `k`.
fn off_ray(w: [f64; 4], k: usize) -> f64 {
    let total: f64 = w.iter().sum();
    (0..4)
        .map(|i| (w[i] / total - if i == k { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_05_entanglement_breaking_pair() {
    let eb = PauliDistribution::entanglement_breaking();
    let aux = aux_maps(&eb, &eb);
    let plus = off_ray(aux.eps_plus.0, 0);
    let minus = off_ray(aux.eps_minus.0, 3);
    let spec = SwitchSpec::pauli(eb, eb);
    let [hp, hm] = heralded_pauli_mixtures(&spec).unwrap();
    let herald = off_ray(hp.0, 0).max(off_ray(hm.0, 3));
    let corrected = corrected_pauli_channel(&spec).unwrap().channel.channel();
    let q = max_coherent_information(&corrected, &OptimizerConfig::default()).unwrap().value;
    finish(
        5,
        &[
            (plus <= AUX_TOL, format!("eps+ off identity ray by {plus:.1e}")),
            (minus <= AUX_TOL, format!("eps- off sigma_z ray by {minus:.1e}")),
            (herald <= AUX_TOL, format!("heralded maps off rays by {herald:.1e}")),
            (within(q, 1.0, Q1_TOL), format!("corrected Q = {q:.9}")),
        ],
    );
}

#[test]
fn criterion_06_witness_engine() {
    let cfg = SdpConfig::default();
    let ideal_w = Scenario::Ideal.process(1.0).unwrap();
    let ideal = optimal_witness(&ideal_w, None, &cfg).unwrap();

    let rubino = visibility_sweep(Scenario::Rubino, &[0.0, 1.0], &cfg).unwrap();
    let rubino_value = rubino.points[1].value;
    let threshold = rubino.threshold;

    let gos_w = Scenario::Goswami.process(1.0).unwrap();
    let gos_span = Scenario::Goswami.restriction(&gos_w).unwrap();
    let goswami = optimal_witness(&gos_w, gos_span.as_ref(), &cfg).unwrap();

    let witnesses: [(&str, &Witness); 3] = [
        ("ideal", &ideal.witness),
        ("rubino", &rubino.witness),
        ("goswami", &goswami.witness),
    ];
    let mut rng = seeded(0xacce);
    let mut worst = f64::INFINITY;
    for k in 0..SEPARABLE_SAMPLES {
        let sep = random_separable_process(2, 1 + k % 3, &mut rng).unwrap();
        for (_, s) in &witnesses {
            worst = worst.min(witness_value(s, &sep).unwrap());
        }
    }

    let dephased = Scenario::Ideal.process(0.0).unwrap();
    let verdict = is_causally_separable(&dephased, SEPARABILITY_TOL, &cfg).unwrap();

    let rel = |x: f64, r: f64| ((x - r) / r).abs();
    println!(
        "criterion 6 stretch (informational): rubino {:.4} vs {REPORTED_RUBINO} ({:.1}% off), goswami {:.4} vs {REPORTED_GOSWAMI} ({:.1}% off), goal {:.0}%",
        rubino_value,
        100.0 * rel(rubino_value, REPORTED_RUBINO),
        goswami.value,
        100.0 * rel(goswami.value, REPORTED_GOSWAMI),
        100.0 * STRETCH_REL,
    );
    finish(
        6,
        &[
            (
                ideal.value < IDEAL_WITNESS_BOUND,
                format!("ideal witness value {:.4} < {IDEAL_WITNESS_BOUND}", ideal.value),
            ),
            (
                worst >= -SEPARABLE_WITNESS_TOL,
                format!("min over {SEPARABLE_SAMPLES} separable samples x 3 witnesses = {worst:.2e}"),
            ),
            (verdict.is_separable(), format!("v=0 separable: {}", verdict.is_separable())),
            (
                threshold.is_some_and(|t| (RUBINO_WINDOW.0..=RUBINO_WINDOW.1).contains(&t)),
                format!("rubino threshold {threshold:?} in {RUBINO_WINDOW:?}"),
            ),
        ],
    );
}

fn random_pauli<R: Rng>(rng: &mut R) -> PauliDistribution {
    let w = random_simplex(4, rng);
    PauliDistribution::new([w[0], w[1], w[2], w[3]]).unwrap()
}

#[test]
fn criterion_07_contraction_matches_kraus_switch() {
    let wc = controlled_switch_process(2);
    let mut rng = seeded(7);
    let mut worst_mixed: f64 = 0.0;
    let mut worst_pure: f64 = 0.0;
    for _ in 0..CROSS_SAMPLES {
        let (p, q) = (random_pauli(&mut rng), random_pauli(&mut rng));
        let rho_c = random_density(2, &mut rng);
        let rho_t = random_density(2, &mut rng);
        let contracted = |control: &ComplexMatrix| {
            let ops = [
                PartyOperator::new(&[CONTROL_PAST], control.transpose()),
                PartyOperator::new(&[TARGET_PAST], rho_t.matrix().transpose()),
                PartyOperator::new(&[A_IN, A_OUT], choi_of(&p.channel())),
                PartyOperator::new(&[B_IN, B_OUT], choi_of(&q.channel())),
            ];
            let (out, rest) = contract(&wc, &ops).unwrap();
            let labels: Vec<&str> = rest.iter().map(|s| s.label.as_str()).collect();
            assert_eq!(labels, [CONTROL_FUTURE, TARGET_FUTURE]);
            out
        };

        // general control state against the Kraus operators
        let sk = switch_kraus(&p.channel(), &q.channel()).unwrap();
        let joint = rho_c.tensor(&rho_t);
        let kraus = sk.apply_operator(joint.matrix()).unwrap();
        worst_mixed = worst_mixed.max(contracted(rho_c.matrix()).max_abs_diff(&kraus));

        // pure control √γ|0⟩ + √(1-γ)|1⟩ against the closed Pauli form
        let gamma: f64 = rng.random();
        let control = PureState::qubit(gamma.sqrt().into(), (1.0 - gamma).sqrt().into()).unwrap();
        let spec = SwitchSpec::pauli(p, q).with_gamma(gamma).unwrap();
        let closed = switch_output(&spec, &rho_t).unwrap();
        worst_pure = worst_pure.max(contracted(&control.projector()).max_abs_diff(closed.matrix()));
    }
    finish(
        7,
        &[
            (
                worst_mixed <= CROSS_TOL,
                format!("{CROSS_SAMPLES} mixed controls vs Kraus switch: max dev {worst_mixed:.1e}"),
            ),
            (
                worst_pure <= CROSS_TOL,
                format!("{CROSS_SAMPLES} pure controls vs Pauli block form: max dev {worst_pure:.1e}"),
            ),
        ],
    );
}

#[test]
fn criterion_08_discrimination() {
    let psi = PureState::basis(2, 0);
    let mut pauli_ok = 0;
    for a in 0..4 {
        for b in 0..4 {
            let r = commute_or_anticommute(&pauli(a), &pauli(b), &psi).unwrap();
            let anti = a != 0 && b != 0 && a != b;
            let expected = if anti {
                GateRelation::Anticommuting
            } else {
                GateRelation::Commuting
            };
            if r.relation == expected && within(r.success_probability(), 1.0, OUTCOME_TOL) {
                pauli_ok += 1;
            }
        }
    }
    let mut rng = seeded(8);
    let mut commuting_ok = 0;
    let mut anticommuting_ok = 0;
    for _ in 0..RANDOM_PAIRS {
        let psi = random_pure_state(2, &mut rng);
        let (u1, u2) = random_commuting_pair(&mut rng);
        if commute_or_anticommute(&u1, &u2, &psi).unwrap().relation == GateRelation::Commuting {
            commuting_ok += 1;
        }
        let (u1, u2) = random_anticommuting_pair(&mut rng);
        if commute_or_anticommute(&u1, &u2, &psi).unwrap().relation == GateRelation::Anticommuting {
            anticommuting_ok += 1;
        }
    }
    println!("criterion 8: stored fixed-order success bound {FIXED_ORDER_DISCRIMINATION_BOUND}");
    finish(
        8,
        &[
            (pauli_ok == 16, format!("{pauli_ok}/16 Pauli pairs with probability 1")),
            (
                commuting_ok == RANDOM_PAIRS,
                format!("{commuting_ok}/{RANDOM_PAIRS} random commuting"),
            ),
            (
                anticommuting_ok == RANDOM_PAIRS,
                format!("{anticommuting_ok}/{RANDOM_PAIRS} random anticommuting"),
            ),
        ],
    );
}

fn random_table<R: Rng>(n: usize, rng: &mut R) -> Vec<bool> {
    (0..1usize << n).map(|z| z != 0 && rng.random::<bool>()).collect()
}

fn ee_correct(inst: &EEInstance) -> bool {
    let out = ee_game(inst).unwrap();
    out.value == inst.classical_value() && out.probability >= 1.0 - OUTCOME_TOL
}

#[test]
fn criterion_09_exchange_evaluation() {
    let mut rng = seeded(9);
    let (mut n2_ok, mut n2_total) = (0, 0);
    for _ in 0..EE_TABLES {
        let (f, g) = (random_table(2, &mut rng), random_table(2, &mut rng));
        for x in 0..4 {
            for y in 0..4 {
                let inst = EEInstance::new(2, x, y, f.clone(), g.clone()).unwrap();
                n2_total += 1;
                if ee_correct(&inst) {
                    n2_ok += 1;
                }
            }
        }
    }
    let n3_ok = (0..EE_RANDOM_N3)
        .filter(|_| ee_correct(&EEInstance::random(3, &mut rng).unwrap()))
        .count();
    finish(
        9,
        &[
            (n2_ok == n2_total, format!("n=2 exhaustive {n2_ok}/{n2_total}")),
            (n3_ok == EE_RANDOM_N3, format!("n=3 random {n3_ok}/{EE_RANDOM_N3}")),
        ],
    );
}

#[test]
fn criterion_10_hadamard_promise() {
    let mut checks = Vec::new();
    for (name, units) in laboratory_unit_sets() {
        for y in 0..4 {
            let inst = make_promise_instance(units.clone(), 4, y).unwrap();
            let out = solve_hadamard_promise(&inst).unwrap();
            let ok = out.guess == y && out.success_probability >= HADAMARD_MIN_SUCCESS && out.query_count == 4;
            checks.push((
                ok,
                format!(
                    "{name} column {y}: p = {:.6}, queries = {}",
                    out.success_probability, out.query_count
                ),
            ));
        }
    }
    println!("criterion 10: stored fixed-order query count {FIXED_ORDER_HADAMARD_QUERIES}");
    finish(10, &checks);
}

#[test]
fn criterion_11_temporal_bell() {
    let b = temporal_bell_experiment().unwrap();
    let tsirelson = 2.0 * std::f64::consts::SQRT_2;
    finish(
        11,
        &[
            (
                within(b.target_fidelity, 1.0, BELL_FIDELITY_TOL),
                format!("fidelity {:.12}", b.target_fidelity),
            ),
            (
                within(b.target_concurrence, 1.0, BELL_TOL),
                format!("concurrence {:.9}", b.target_concurrence),
            ),
            (within(b.target_bell, tsirelson, BELL_TOL), format!("CHSH {:.9}", b.target_bell)),
        ],
    );
}

#[test]
fn criterion_12_representation_round_trips() {
    let mut rng = seeded(12);
    let mut worst: f64 = 0.0;
    for s in 0..ROUND_TRIP_CHANNELS {
        let ch = random_channel(2, 1 + (s as usize % 4), &mut rng);
        let choi = kraus_to_choi(&ch);
        let back = choi_to_kraus(&choi).unwrap();
        let rho = random_density(2, &mut rng);
        let a = ch.apply(&rho).unwrap();
        worst = worst
            .max(a.matrix().max_abs_diff(back.apply(&rho).unwrap().matrix()))
            .max(a.matrix().max_abs_diff(choi.apply(&rho).unwrap().matrix()));
    }

    let eb = PauliDistribution::entanglement_breaking();
    let constructed: Vec<(&str, KrausChannel)> = vec![
        ("identity", KrausChannel::identity(3)),
        ("unitary", KrausChannel::unitary(pauli(2)).unwrap()),
        ("pauli", PauliDistribution::depolarizing(0.4).unwrap().channel()),
        ("entanglement-breaking", eb.channel()),
        ("random", random_channel(3, 2, &mut rng)),
        ("from choi", choi_to_kraus(&kraus_to_choi(&eb.channel())).unwrap()),
        ("composed", compose(&eb.channel(), &random_channel(2, 3, &mut rng)).unwrap()),
        ("switch", switch_kraus(&eb.channel(), &eb.channel()).unwrap()),
    ];
    let rejected: Vec<&str> = constructed
        .iter()
        .filter(|(_, ch)| validate_cptp(ch).is_err())
        .map(|(name, _)| *name)
        .collect();

    let leaky = vec![ComplexMatrix::identity(2).scale_real(0.5)];
    let corrupted = KrausChannel::trace_nonincreasing(leaky.clone()).unwrap();
    let caught = validate_cptp(&corrupted).is_err()
        && KrausChannel::new(leaky).is_err()
        && !kraus_to_choi(&corrupted).is_trace_preserving()
        && DensityMatrix::new(ComplexMatrix::identity(2)).is_err();

    finish(
        12,
        &[
            (
                worst <= ROUND_TRIP_TOL,
                format!("{ROUND_TRIP_CHANNELS} kraus<->choi round trips: max dev {worst:.1e}"),
            ),
            (
                rejected.is_empty(),
                format!("validators accept {} constructors (rejected {rejected:?})", constructed.len()),
            ),
            (caught, format!("corrupted-trace counterexample rejected: {caught}")),
        ],
    );
}
