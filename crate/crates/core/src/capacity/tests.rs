use super::*;
use crate::channels::{compose, PauliDistribution};
use crate::qcore::random::{random_density, seeded};
use crate::qcore::{pauli, PureState};
use crate::switch::{switch_output, PauliMixture, SwitchSpec};

fn basis_ensemble() -> Ensemble {
    Ensemble::uniform(vec![PureState::basis(2, 0).density(), PureState::basis(2, 1).density()]).unwrap()
}

fn quick() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 4,
        grid_step: 0.25,
        ..OptimizerConfig::default()
    }
}

#[test]
fn ensemble_rejects_bad_weights() {
    let r = PureState::basis(2, 0).density();
    assert!(Ensemble::new(vec![(0.7, r.clone())]).is_err());
    assert!(Ensemble::new(vec![(1.2, r.clone()), (-0.2, r)]).is_err());
    assert!(Ensemble::new(vec![]).is_err());
}

#[test]
fn holevo_of_identity_and_constant_channels() {
    let id = KrausChannel::identity(2);
    assert!((holevo_quantity(&id, &basis_ensemble()).unwrap() - 1.0).abs() < 1e-12);
    let dep = PauliDistribution::depolarizing(1.0).unwrap().channel();
    assert!(holevo_quantity(&dep, &basis_ensemble()).unwrap().abs() < 1e-12);
}

#[test]
fn holevo_capacity_of_identity_is_one_bit() {
    let r = holevo_capacity(&KrausChannel::identity(2), &quick()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-4);
    assert!(holevo_capacity(&KrausChannel::identity(3), &quick()).is_err());
}

#[test]
fn coherent_information_examples() {
    let mixed = DensityMatrix::maximally_mixed(2);
    assert!((coherent_information(&KrausChannel::identity(2), &mixed).unwrap() - 1.0).abs() < 1e-12);
    let dep = PauliDistribution::depolarizing(1.0).unwrap().channel();
    assert!((coherent_information(&dep, &mixed).unwrap() + 1.0).abs() < 1e-12);
    let u = KrausChannel::unitary(pauli(2)).unwrap();
    assert!((coherent_information(&u, &mixed).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn entanglement_breaking_channel_has_no_coherent_information() {
    let eb = PauliDistribution::entanglement_breaking().channel();
    assert!(max_coherent_information(&eb, &quick()).unwrap().value <= 1e-9);
    let id = max_coherent_information(&KrausChannel::identity(2), &quick()).unwrap();
    assert!((id.value - 1.0).abs() < 1e-9);
}

#[test]
fn effective_channel_matches_switch_output() {
    let mut rng = seeded(5);
    let p = PauliDistribution::new([0.5, 0.2, 0.2, 0.1]).unwrap();
    let q = PauliDistribution::new([0.1, 0.3, 0.4, 0.2]).unwrap();
    for (g, v) in [(0.5, 1.0), (0.3, 0.6), (1.0, 0.2)] {
        let spec = SwitchSpec::pauli(p, q).with_gamma(g).unwrap().with_visibility(v).unwrap();
        let eff = switch_effective_channel(&spec).unwrap();
        for _ in 0..10 {
            let rho = random_density(2, &mut rng);
            let a = eff.apply_operator(rho.matrix()).unwrap();
            let b = switch_output(&spec, &rho).unwrap();
            assert!(a.approx_eq(b.matrix(), 1e-12));
        }
    }
}

#[test]
fn effective_channel_reduces_to_definite_average() {
    let p = PauliDistribution::new([0.6, 0.1, 0.1, 0.2]).unwrap();
    let q = PauliDistribution::bit_flip(0.3).unwrap();
    let spec = SwitchSpec::pauli(p, q).with_gamma(0.0).unwrap();
    let eff = switch_effective_channel(&spec).unwrap();
    let rho = random_density(2, &mut seeded(6));
    let out = eff.apply_operator(rho.matrix()).unwrap();
    let target = out.clone().with_dims(vec![2, 2]).unwrap().partial_trace(&[1]).unwrap();
    let expected = compose(&p.channel(), &q.channel()).unwrap().apply_operator(rho.matrix()).unwrap();
    assert!(target.approx_eq(&expected, 1e-12));
    assert!(out[(0, 0)].norm() < 1e-12 && out[(1, 1)].norm() < 1e-12);
}

#[test]
fn heralded_maps_sum_to_effective_channel() {
    let p = PauliDistribution::new([0.4, 0.3, 0.2, 0.1]).unwrap();
    let q = PauliDistribution::new([0.25, 0.25, 0.1, 0.4]).unwrap();
    let spec = SwitchSpec::pauli(p, q).with_gamma(0.4).unwrap().with_visibility(0.8).unwrap();
    let plus = heralded_channel(&spec, &PLUS).unwrap();
    let minus = heralded_channel(&spec, &MINUS).unwrap();
    assert!((plus.probability + minus.probability - 1.0).abs() < 1e-9);
    let [mp, mm] = heralded_pauli_mixtures(&spec).unwrap();
    assert!((mp.weight() - plus.probability).abs() < 1e-12);
    let rho = random_density(2, &mut seeded(2));
    let via_kraus = plus.channel.apply_operator(rho.matrix()).unwrap().scale_real(plus.probability);
    assert!(via_kraus.approx_eq(&mp.apply(rho.matrix()), 1e-12));
    let total = &via_kraus + &minus.channel.apply_operator(rho.matrix()).unwrap().scale_real(minus.probability);
    let target = switch_effective_channel(&spec)
        .unwrap()
        .apply_operator(rho.matrix())
        .unwrap()
        .with_dims(vec![2, 2])
        .unwrap()
        .partial_trace(&[1])
        .unwrap();
    assert!(total.approx_eq(&target, 1e-12));
    assert!((mm.weight() - minus.probability).abs() < 1e-12);
}

#[test]
fn bit_and_phase_flip_herald_sigma_y() {
    let spec = SwitchSpec::pauli(
        PauliDistribution::bit_flip(0.5).unwrap(),
        PauliDistribution::phase_flip(0.5).unwrap(),
    );
    let h = heralded_channel(&spec, &MINUS).unwrap();
    assert!((h.probability - 0.25).abs() < 1e-12);
    let y = KrausChannel::unitary(pauli(2)).unwrap();
    let rho = random_density(2, &mut seeded(1));
    let a = h.channel.apply_operator(rho.matrix()).unwrap();
    assert!(a.approx_eq(&y.apply_operator(rho.matrix()).unwrap(), 1e-12));
}

#[test]
fn gamma_one_heralds_control_zero() {
    let spec = SwitchSpec::pauli(PauliDistribution::depolarizing(0.3).unwrap(), PauliDistribution::identity())
        .with_gamma(1.0)
        .unwrap();
    let zero = [crate::qcore::ONE, crate::qcore::ZERO];
    assert!((heralded_channel(&spec, &zero).unwrap().probability - 1.0).abs() < 1e-12);
    let one = [crate::qcore::ZERO, crate::qcore::ONE];
    assert_eq!(heralded_channel(&spec, &one), Err(Error::ZeroProbability));
}

fn amplitude_damping(g: f64) -> KrausChannel {
    KrausChannel::new(vec![
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]),
        ComplexMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]),
    ])
    .unwrap()
}

#[test]
fn input_dependent_herald_is_rejected() {
    let spec = SwitchSpec::kraus(amplitude_damping(0.4), KrausChannel::identity(2)).unwrap();
    assert!(heralded_channel(&spec, &PLUS).is_ok());
    let u = crate::qcore::random::random_unitary(2, &mut seeded(3));
    let spec = SwitchSpec::kraus(amplitude_damping(0.4), KrausChannel::unitary(u).unwrap()).unwrap();
    assert!(matches!(heralded_channel(&spec, &PLUS), Err(Error::InputDependentHerald(_))));
}

#[test]
fn entanglement_breaking_pair_corrects_to_identity() {
    let eb = PauliDistribution::entanglement_breaking();
    let spec = SwitchSpec::pauli(eb, eb);
    let fixed = corrected_pauli_channel(&spec).unwrap();
    assert_eq!(fixed.corrections, [0, 3]);
    assert!(fixed.channel.probs()[0] > 1.0 - 1e-12);
    let [plus, minus] = heralded_pauli_mixtures(&spec).unwrap();
    assert_eq!(plus, PauliMixture([0.5, 0.0, 0.0, 0.0]));
    assert_eq!(minus, PauliMixture([0.0, 0.0, 0.0, 0.5]));
}

#[test]
fn sweep_rejects_empty_grid_and_sorts() {
    let cfg = quick();
    assert_eq!(capacity_sweep(CapacityScenario::EbEb, &[], &cfg), Err(Error::EmptyGrid));
    let t = capacity_sweep(CapacityScenario::EbEb, &[1.0, 0.0], &cfg).unwrap();
    assert_eq!(t.rows.iter().map(|r| r.q).collect::<Vec<_>>(), [0.0, 1.0]);
    for r in &t.rows {
        assert!((r.switch_value - 1.0).abs() < 1e-6);
    }
    assert!(t.to_csv().starts_with(CSV_HEADER));
}

#[test]
fn bitflip_phaseflip_half_heralds_noiseless_qubit() {
    let row = CapacityScenario::BitflipPhaseflip.evaluate(0.5, &quick()).unwrap();
    assert!(row.definite_value <= 1e-9);
    assert!((row.switch_value - 1.0).abs() < 1e-6);
    assert_eq!(row.herald_probability.map(|p| (p * 1e9).round() / 1e9), Some(0.25));
}
