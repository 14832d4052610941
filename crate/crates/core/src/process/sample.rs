use rand::Rng;

use super::cone::CausalOrder;
use super::{switch_slots, ProcessMatrix};
use crate::error::Result;
use crate::qcore::random::{random_simplex, random_unitary};
use crate::qcore::{ComplexMatrix, ZERO};

/// Memory carried between the parties of a sampled comb.
const MEMORY: usize = 2;

/// Pure comb of random isometries on the switch slots for a fixed order:
/// past → first party, first → second with memory, second → future.
pub fn random_ordered_process<R: Rng + ?Sized>(d: usize, order: CausalOrder, rng: &mut R) -> ProcessMatrix {
    let m = MEMORY;
    let v1 = random_unitary(d * m, rng);
    let v2 = random_unitary(d * m, rng);
    let v3 = random_unitary(2 * d, rng);
    let n = 2 * d.pow(6);
    let mut w = vec![ZERO; n];
    for (idx, slot) in w.iter_mut().enumerate() {
        let ct = idx % d;
        let cc = (idx / d) % 2;
        let mut r = idx / (2 * d);
        let mut next = || {
            let x = r % d;
            r /= d;
            x
        };
        let (bo, bi, ao, ai, t) = (next(), next(), next(), next(), next());
        let (in1, out1, in2, out2) = match order {
            CausalOrder::AThenB => (ai, ao, bi, bo),
            CausalOrder::BThenA => (bi, bo, ai, ao),
        };
        let mut acc = ZERO;
        for m1 in 0..m {
            for m2 in 0..m {
                acc += v1[(in1 * m + m1, t)] * v2[(in2 * m + m2, out1 * m + m1)] * v3[(cc * d + ct, out2 * m + m2)];
            }
        }
        *slot = acc;
    }
    ProcessMatrix::from_trusted(ComplexMatrix::outer(&w, &w), switch_slots(d))
}

/// Random convex mixture of ordered combs of both orders, each side a
/// mixture of `per_order` pure combs.
pub fn random_separable_process<R: Rng + ?Sized>(d: usize, per_order: usize, rng: &mut R) -> Result<ProcessMatrix> {
    let weights = random_simplex(2 * per_order, rng);
    let parts: Vec<ProcessMatrix> = (0..2 * per_order)
        .map(|k| {
            let order = if k < per_order { CausalOrder::AThenB } else { CausalOrder::BThenA };
            random_ordered_process(d, order, rng)
        })
        .collect();
    let mix: Vec<(f64, &ProcessMatrix)> = weights.iter().copied().zip(&parts).collect();
    ProcessMatrix::mixture(&mix)
}
