//! Pseudo-random instances for the randomized suites.

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::Rng;
use selfsmall_core::{Cardinal, Family, FamilyEntry, FgGroup, IntMatrix, PrimeSet};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// A finite group of order at most `max_order`, built from random cyclic
/// factors.
pub fn finite_group<R: Rng + ?Sized>(rng: &mut R, max_order: u64) -> FgGroup {
    let mut orders = Vec::new();
    let mut product = 1u64;
    while product * 2 <= max_order && rng.gen_bool(0.7) {
        let d = rng.gen_range(2..=max_order / product);
        product *= d;
        orders.push(BigUint::from(d));
    }
    FgGroup::from_cyclic_orders(0, orders)
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, entries).expect("shape matches")
}

fn count<R: Rng + ?Sized>(rng: &mut R) -> Cardinal {
    match rng.gen_range(0..8) {
        0 => Cardinal::omega(),
        1 => Cardinal::Infinite("kappa".into()),
        _ => Cardinal::finite(rng.gen_range(1..=5)).expect("nonzero"),
    }
}

fn group<R: Rng + ?Sized>(rng: &mut R, torsion: bool) -> FgGroup {
    let free = if torsion { rng.gen_range(0..=1) } else { rng.gen_range(1..=2) };
    let orders: Vec<BigUint> = if torsion {
        (0..rng.gen_range(1..=2)).map(|_| BigUint::from(rng.gen_range(2u64..=30))).collect()
    } else {
        Vec::new()
    };
    FgGroup::from_cyclic_orders(free, orders)
}

fn prime_set<R: Rng + ?Sized>(rng: &mut R) -> PrimeSet {
    let k = rng.gen_range(0..=3);
    let chosen: Vec<BigUint> = PRIMES.choose_multiple(rng, k).map(|&p| BigUint::from(p)).collect();
    if rng.gen_bool(0.5) || chosen.is_empty() {
        PrimeSet::all_except(chosen).expect("primes")
    } else {
        PrimeSet::explicit(chosen).expect("nonempty primes")
    }
}

fn entry<R: Rng + ?Sized>(rng: &mut R, torsion: bool) -> FamilyEntry {
    if rng.gen_bool(0.6) {
        let with_torsion = torsion || rng.gen_bool(0.5);
        let g = group(rng, with_torsion);
        FamilyEntry::repeat(g, count(rng)).expect("nonzero group")
    } else {
        let free = rng.gen_range(0..=1);
        let n = if torsion || free == 0 { rng.gen_range(1..=3) } else { rng.gen_range(0..=2) };
        let exps = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        FamilyEntry::prime_indexed(free, exps, prime_set(rng)).expect("nonempty template")
    }
}

/// A family with one to four entries, mixing repeats and prime-indexed
/// entries with finite and infinite counts; `torsion` forces at least one
/// member with nonzero torsion.
pub fn family<R: Rng + ?Sized>(rng: &mut R, torsion: bool) -> Family {
    let n = rng.gen_range(1..=4);
    let forced = rng.gen_range(0..n);
    let entries = (0..n).map(|i| entry(rng, torsion && i == forced)).collect();
    Family::new(entries).expect("valid entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..500 {
            let g = finite_group(&mut rng, 256);
            assert!(g.is_finite());
            assert!(g.order().unwrap() <= BigUint::from(256u32));
            assert!(!family(&mut rng, true).is_all_free());
            let m = matrix(&mut rng, 8, 50);
            assert!(m.rows() <= 8 && m.cols() <= 8);
        }
    }
}
