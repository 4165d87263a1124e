//! Integer helpers: primality and factorisation of arbitrary-size naturals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u32; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Trial division is used for every factor below this bound.
const TRIAL_LIMIT: u64 = 10_000;

/// Miller-Rabin with the first 13 prime bases is deterministic below
/// 3.3 * 10^24; above that the full 25-base set is used.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in SMALL_PRIMES.iter() {
            let p = u64::from(p);
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
    } else {
        for &p in SMALL_PRIMES.iter() {
            if (n % p).is_zero() {
                return false;
            }
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let rounds = if n.bits() <= 81 { 13 } else { SMALL_PRIMES.len() };
    'witness: for &a in SMALL_PRIMES.iter().take(rounds) {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// Prime factorisation as a map `p -> multiplicity`. Zero and one map to the
/// empty factorisation.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let big_p = BigUint::from(p);
        if &big_p * &big_p > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.insert(big_p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let mut stack = Vec::from([rest]);
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_prime(&m) {
                *out.entry(m).or_insert(0) += 1;
                continue;
            }
            let d = pollard_brent(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out
}

/// Finds a nontrivial divisor of a composite `n` that has no factor below
/// the trial-division limit.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

/// `p`-adic valuation of a nonzero `n`.
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    if n.is_zero() || p <= &BigUint::one() {
        return 0;
    }
    let mut rest = n.clone();
    let mut e = 0;
    while (&rest % p).is_zero() {
        rest /= p;
        e += 1;
    }
    e
}

/// Smallest prime that is not contained in `avoid`.
pub fn first_prime_outside<'a>(avoid: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    let avoid: alloc::collections::BTreeSet<&BigUint> = avoid.into_iter().collect();
    let mut candidate = BigUint::from(2u32);
    loop {
        if is_prime(&candidate) && !avoid.contains(&candidate) {
            return candidate;
        }
        candidate += 1u32;
    }
}
