use super::*;
use crate::channels::{kraus_to_choi, random_channel, KrausChannel};
use crate::qcore::random::{random_density, random_hermitian, random_unitary, seeded};
use crate::qcore::pauli;
use crate::switch::{switch_output, SwitchSpec};

fn plus_readout() -> ComplexMatrix {
    let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
    plus.tensor(&ComplexMatrix::identity(2)).without_dims()
}

fn instrument(ch: &KrausChannel) -> ComplexMatrix {
    kraus_to_choi(ch).matrix().clone().without_dims()
}

#[test]
fn switch_process_trace_and_rank() {
    let w = switch_process(2);
    assert!((w.trace() - 8.0).abs() < 1e-12);
    let (a, b) = ordered_switch_processes(2);
    assert!((a.trace() - 8.0).abs() < 1e-12);
    assert!((b.trace() - 8.0).abs() < 1e-12);
    let mixed = ProcessMatrix::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
    assert!(dephase_control_process(&w, 0.0).unwrap().matrix().approx_eq(mixed.matrix(), 1e-12));
}

#[test]
fn ordered_branches_lie_in_their_cones() {
    let w = switch_process(2);
    let [ab, ba] = OrderedProcessCone::switch_cones(w.slots()).unwrap();
    let (a, b) = ordered_switch_processes(2);
    assert!(ab.contains(&a, 1e-9).unwrap());
    assert!(ba.contains(&b, 1e-9).unwrap());
    assert!(!ab.contains(&b, 1e-6).unwrap());
    assert!(!ab.contains(&w, 1e-6).unwrap());
    assert!(!ba.contains(&w, 1e-6).unwrap());
}

#[test]
fn cone_projection_is_idempotent_and_self_adjoint() {
    let w = switch_process(2);
    let [ab, _] = OrderedProcessCone::switch_cones(w.slots()).unwrap();
    let mut rng = seeded(3);
    let x = random_hermitian(128, &mut rng);
    let y = random_hermitian(128, &mut rng);
    let px = ab.project(&x);
    assert!(ab.project(&px).approx_eq(&px, 1e-10));
    assert!((px.inner(&y) - x.inner(&ab.project(&y))).abs() < 1e-9);
}

#[test]
fn identity_instruments_herald_plus() {
    let w = switch_process(2);
    let id = instrument(&KrausChannel::identity(2));
    let mut rng = seeded(8);
    let rho = random_density(2, &mut rng);
    let ops = [
        PartyOperator::new(&[TARGET_PAST], rho.matrix().transpose()),
        PartyOperator::new(&[A_IN, A_OUT], id.clone()),
        PartyOperator::new(&[B_IN, B_OUT], id),
        PartyOperator::new(&[CONTROL_FUTURE, TARGET_FUTURE], plus_readout()),
    ];
    assert!((born_probability(&w, &ops).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn anticommuting_unitaries_herald_minus() {
    let w = switch_process(2);
    let ops = [
        PartyOperator::new(&[TARGET_PAST], ComplexMatrix::real_diagonal(&[1.0, 0.0])),
        PartyOperator::new(&[A_IN, A_OUT], scenario::unitary_operation(&pauli(1))),
        PartyOperator::new(&[B_IN, B_OUT], scenario::unitary_operation(&pauli(3))),
        PartyOperator::new(&[CONTROL_FUTURE, TARGET_FUTURE], plus_readout()),
    ];
    assert!(born_probability(&w, &ops).unwrap().abs() < 1e-12);
}

#[test]
fn unitary_operation_matches_kraus_choi() {
    let u = random_unitary(2, &mut seeded(21));
    let ch = KrausChannel::unitary(u.clone()).unwrap();
    assert!(scenario::unitary_operation(&u).approx_eq(&instrument(&ch), 1e-12));
}

#[test]
fn contraction_reproduces_switch_output() {
    let w = switch_process(2);
    for seed in 0..5 {
        let np = random_channel(2, 3, &mut seeded(100 + seed));
        let nq = random_channel(2, 2, &mut seeded(200 + seed));
        let rho = random_density(2, &mut seeded(seed));
        let ops = [
            PartyOperator::new(&[TARGET_PAST], rho.matrix().transpose()),
            PartyOperator::new(&[A_IN, A_OUT], instrument(&np)),
            PartyOperator::new(&[B_IN, B_OUT], instrument(&nq)),
        ];
        let (out, rest) = contract(&w, &ops).unwrap();
        let labels: Vec<&str> = rest.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, [CONTROL_FUTURE, TARGET_FUTURE]);
        let spec = SwitchSpec::kraus(np, nq).unwrap();
        let expected = switch_output(&spec, &rho).unwrap();
        assert!(out.approx_eq(expected.matrix(), 1e-12));
    }
}

#[test]
fn controlled_process_reduces_to_switch() {
    let wc = controlled_switch_process(2);
    let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
    let (out, rest) = contract(&wc, &[PartyOperator::new(&[CONTROL_PAST], plus.transpose())]).unwrap();
    let reduced = ProcessMatrix::new(out, rest).unwrap();
    assert!(reduced.matrix().approx_eq(switch_process(2).matrix(), 1e-12));
    assert!(OrderedProcessCone::switch_cones(wc.slots()).is_ok());
}

#[test]
fn dephasing_scales_only_control_coherences() {
    let w = switch_process(2);
    let v = 0.3;
    let wv = dephase_control_process(&w, v).unwrap();
    let (a, b) = ordered_switch_processes(2);
    let diag = &a.matrix().scale_real(0.5) + &b.matrix().scale_real(0.5);
    let coh = w.matrix() - &diag;
    let expected = &diag + &coh.scale_real(v);
    assert!(wv.matrix().approx_eq(&expected, 1e-12));
    assert!(dephase_control_process(&w, 1.5).is_err());
    assert!((wv.trace() - 8.0).abs() < 1e-12);
}

#[test]
fn witness_value_is_linear() {
    let w = switch_process(2);
    let mut rng = seeded(4);
    let s1 = Witness::new(random_hermitian(128, &mut rng), w.slots().to_vec()).unwrap();
    let s2 = Witness::new(random_hermitian(128, &mut rng), w.slots().to_vec()).unwrap();
    let sum = Witness::new(s1.matrix() + &s2.matrix().scale_real(2.0), w.slots().to_vec()).unwrap();
    let lhs = witness_value(&sum, &w).unwrap();
    let rhs = witness_value(&s1, &w).unwrap() + 2.0 * witness_value(&s2, &w).unwrap();
    assert!((lhs - rhs).abs() < 1e-9);
}

#[test]
fn place_operators_orders_factors_by_slot() {
    let slots = vec![Slot::new("x", 2), Slot::new("y", 3)];
    let a = ComplexMatrix::real_diagonal(&[1.0, 2.0]);
    let b = ComplexMatrix::real_diagonal(&[1.0, 10.0, 100.0]);
    let placed = place_operators(
        &slots,
        &[PartyOperator::new(&["y"], b.clone()), PartyOperator::new(&["x"], a.clone())],
    )
    .unwrap();
    assert!(placed.approx_eq(&a.tensor(&b).without_dims(), 1e-15));
}

#[test]
fn decomposed_witness_reproduces_its_value() {
    let w = switch_process(2);
    let scenario = Scenario::Goswami;
    let span = scenario.restriction(&w).unwrap().unwrap();
    let sets = scenario.operation_sets().unwrap();
    let s = Witness::new(span.project(&random_hermitian(128, &mut seeded(9))), w.slots().to_vec()).unwrap();
    let terms = decompose_witness(&s, &sets).unwrap();
    assert_eq!(terms.len(), sets.tuple_count());
    let wv = dephase_control_process(&w, 0.7).unwrap();
    let mut total = 0.0;
    for t in &terms {
        let ops: Vec<PartyOperator> = sets
            .groups()
            .iter()
            .zip(&t.indices)
            .map(|((labels, ops), &k)| {
                let l: Vec<&str> = labels.iter().map(String::as_str).collect();
                PartyOperator::new(&l, ops[k].clone())
            })
            .collect();
        total += t.coefficient * born_probability(&wv, &ops).unwrap();
    }
    assert!((total - witness_value(&s, &wv).unwrap()).abs() < 1e-8);
}

#[test]
fn unmeasurable_witness_is_rejected() {
    let w = switch_process(2);
    let sets = Scenario::Goswami.operation_sets().unwrap();
    let span = Scenario::Goswami.restriction(&w).unwrap().unwrap();
    let x = random_hermitian(128, &mut seeded(10));
    let outside = &x - &span.project(&x);
    let s = Witness::new(outside, w.slots().to_vec()).unwrap();
    assert_eq!(decompose_witness(&s, &sets), Err(Error::NotMeasurable));
}

#[test]
fn span_projection_is_idempotent() {
    let w = switch_process(2);
    let span = Scenario::Rubino.restriction(&w).unwrap().unwrap();
    assert_eq!(span.local_dimensions(), vec![3, 12, 10, 2]);
    let x = random_hermitian(128, &mut seeded(12));
    let px = span.project(&x);
    assert!(span.project(&px).approx_eq(&px, 1e-10));
}

#[test]
fn json_round_trip() {
    let w = dephase_control_process(&switch_process(2), 0.4).unwrap();
    let back = ProcessMatrix::from_json(&w.to_json().unwrap()).unwrap();
    assert!(back.matrix().approx_eq(w.matrix(), 0.0));
    assert_eq!(back.slots(), w.slots());
    let s = Witness::zero(w.slots().to_vec());
    assert!(Witness::from_json(&w.to_json().unwrap()).is_err());
    assert_eq!(Witness::from_json(&s.to_json().unwrap()).unwrap(), s);
}

#[test]
fn born_rule_requires_full_coverage() {
    let w = switch_process(2);
    let ops = [PartyOperator::new(&[TARGET_PAST], ComplexMatrix::identity(2))];
    assert!(matches!(born_probability(&w, &ops), Err(Error::SlotMismatch(_))));
    let bad = [PartyOperator::new(&["Z"], ComplexMatrix::identity(2))];
    assert!(contract(&w, &bad).is_err());
}


#[test]
fn bisection_finds_linear_crossing() {
    let root = bisect_crossing(|v| Ok(0.3 - v), 0.0, 1.0, 1e-12).unwrap().unwrap();
    assert!((root - 0.3).abs() < 1e-11);
    assert_eq!(bisect_crossing(|v| Ok(1.0 + v), 0.0, 1.0, 1e-9).unwrap(), None);
}

#[test]
fn dephasing_composes_multiplicatively() {
    let w = switch_process(2);
    let twice = dephase_control_process(&dephase_control_process(&w, 0.6).unwrap(), 0.5).unwrap();
    let once = dephase_control_process(&w, 0.3).unwrap();
    assert!(twice.matrix().approx_eq(once.matrix(), 1e-12));
}
