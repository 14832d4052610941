use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, PureState, ZERO};

/// Distinct orderings of `n` gates; entry `k` of a permutation is the index
/// of the gate applied `k`-th.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    n: usize,
    perms: Vec<Vec<usize>>,
}

impl PermutationSet {
    pub fn new(n: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.is_empty() {
            return Err(Error::InvalidInstance("empty permutation set".into()));
        }
        for p in &perms {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidInstance(format!("{p:?} is not a permutation of 0..{n}")));
            }
        }
        for (i, p) in perms.iter().enumerate() {
            if perms[..i].contains(p) {
                return Err(Error::InvalidInstance(format!("duplicate permutation {p:?}")));
            }
        }
        Ok(Self { n, perms })
    }

    /// All `n!` orderings in lexicographic order.
    pub fn all(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        Self { n, perms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

/// `Π_x = U_{σ_x(n)} ⋯ U_{σ_x(1)}` for every permutation in the set.
pub fn ordered_products(units: &[ComplexMatrix], perms: &PermutationSet) -> Result<Vec<ComplexMatrix>> {
    if units.len() != perms.n {
        return Err(Error::DimensionMismatch(format!(
            "{} gates for permutations of {} elements",
            units.len(),
            perms.n
        )));
    }
    let d = units.first().map(|u| u.rows()).unwrap_or(1);
    if units.iter().any(|u| u.shape() != (d, d)) {
        return Err(Error::DimensionMismatch("gates of different dimension".into()));
    }
    Ok(perms
        .perms
        .iter()
        .map(|p| {
            p.iter()
                .fold(ComplexMatrix::identity(d), |acc, &k| &units[k] * &acc)
        })
        .collect())
}

/// `Σ_x c_x |x⟩ ⊗ Π_x |ψ⟩`.
pub fn n_switch_apply(
    units: &[ComplexMatrix],
    perms: &PermutationSet,
    control: &PureState,
    target: &PureState,
) -> Result<PureState> {
    if control.dim() != perms.len() {
        return Err(Error::DimensionMismatch(format!(
            "control of dimension {} for {} orderings",
            control.dim(),
            perms.len()
        )));
    }
    let products = ordered_products(units, perms)?;
    let dt = target.dim();
    if products.first().is_some_and(|m| m.rows() != dt) {
        return Err(Error::DimensionMismatch("target does not match gate dimension".into()));
    }
    let mut amps = vec![ZERO; control.dim() * dt];
    for (x, (&c, pi)) in control.amplitudes().iter().zip(&products).enumerate() {
        if c == ZERO {
            continue;
        }
        let moved = pi.apply(target.amplitudes())?;
        for (slot, m) in amps[x * dt..(x + 1) * dt].iter_mut().zip(moved) {
            *slot = c * m;
        }
    }
    PureState::new(amps, vec![control.dim(), dt])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::KrausChannel;
    use crate::qcore::random::{random_pure_state, random_unitary, seeded};
    use crate::qcore::{pauli, C64, I};
    use crate::switch::switch_kraus;

    #[test]
    fn all_permutations_of_three() {
        let p = PermutationSet::all(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.perms()[1], vec![0, 2, 1]);
        assert!(PermutationSet::new(2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(PermutationSet::new(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn two_party_case_matches_switch() {
        let mut rng = seeded(6);
        let u = [random_unitary(2, &mut rng), random_unitary(2, &mut rng)];
        let psi = random_pure_state(2, &mut rng);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::qubit(C64::new(s, 0.0), C64::new(s, 0.0)).unwrap();
        let perms = PermutationSet::all(2);
        let out = n_switch_apply(&u, &perms, &plus, &psi).unwrap();
        let sk = switch_kraus(
            &KrausChannel::unitary(u[0].clone()).unwrap(),
            &KrausChannel::unitary(u[1].clone()).unwrap(),
        )
        .unwrap();
        let expect = sk.apply_operator(&plus.tensor(&psi).projector()).unwrap();
        assert!(out.projector().approx_eq(&expect, 1e-12));
    }

    #[test]
    fn identity_gates_leave_state() {
        let units = vec![ComplexMatrix::identity(2); 3];
        let perms = PermutationSet::all(3);
        let c = random_pure_state(6, &mut seeded(1));
        let t = random_pure_state(2, &mut seeded(2));
        let out = n_switch_apply(&units, &perms, &c, &t).unwrap();
        assert!(out.projector().approx_eq(&c.tensor(&t).projector(), 1e-14));
    }

    #[test]
    fn anticommuting_gates_differ_by_sign() {
        let units = vec![ComplexMatrix::identity(2), pauli(3), pauli(1), pauli(3)];
        let perms = PermutationSet::all(4);
        let prods = ordered_products(&units, &perms).unwrap();
        for p in &prods {
            let plus = p.approx_eq(&prods[0], 1e-15);
            let minus = p.approx_eq(&prods[0].scale_real(-1.0), 1e-15);
            assert!(plus ^ minus);
        }
        // Z X = i Y
        assert!(prods[0].approx_eq(&(&pauli(3) * &(&pauli(1) * &pauli(3))), 1e-15));
        assert!((&pauli(3) * &pauli(1)).approx_eq(&pauli(2).scale(I), 1e-15));
    }
}
