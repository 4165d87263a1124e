//! Finitely generated abelian groups in invariant-factor form.
//!
//! `FgGroup` stores `Z^r (+) Z/d1 (+) ... (+) Z/dk` with `2 <= d1 | d2 | ... | dk`.
//! Because that chain is unique, structural equality is isomorphism. The
//! primary (prime-power) form is a derived view, see [`PrimaryDecomposition`].
//!
//! Presentations follow the row convention: a relation matrix with `c`
//! columns presents `Z^c` modulo the span of its rows.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorize, is_prime, valuation};
use crate::matrix::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invariant factor {0} is smaller than 2")]
    FactorTooSmall(BigUint),
    #[error("invariant factor {0} does not divide {1}")]
    BrokenChain(BigUint, BigUint),
    #[error("{0} is not a prime")]
    NotPrime(BigUint),
    #[error("exponent zero in a primary component")]
    ZeroExponent,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgGroup {
    free_rank: usize,
    invariant_factors: Vec<BigUint>,
}

impl FgGroup {
    pub fn zero() -> Self {
        Self { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the zero group.
    pub fn cyclic(n: impl Into<BigUint>) -> Self {
        Self::from_cyclic_orders(0, [n.into()])
    }

    /// Checked constructor for a group already in invariant-factor form.
    pub fn from_invariant_factors(free_rank: usize, factors: Vec<BigUint>) -> Result<Self, GroupError> {
        let two = BigUint::from(2u32);
        for f in &factors {
            if f < &two {
                return Err(GroupError::FactorTooSmall(f.clone()));
            }
        }
        for w in factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(GroupError::BrokenChain(w[0].clone(), w[1].clone()));
            }
        }
        Ok(Self { free_rank, invariant_factors: factors })
    }

    /// Canonical form of `Z^free_rank (+) (+)_i Z/n_i` for arbitrary orders.
    /// Orders equal to one vanish; orders equal to zero add a free summand.
    pub fn from_cyclic_orders(free_rank: usize, orders: impl IntoIterator<Item = BigUint>) -> Self {
        let mut free_rank = free_rank;
        let mut parts: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        for n in orders {
            if n.is_zero() {
                free_rank += 1;
                continue;
            }
            for (p, e) in factorize(&n) {
                parts.entry(p).or_default().push(e);
            }
        }
        recombine_parts(free_rank, parts)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_part(&self) -> FgGroup {
        Self { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    pub fn free_part(&self) -> FgGroup {
        Self::free(self.free_rank)
    }

    /// Whether the `p`-primary component of the torsion part is nonzero.
    pub fn has_p_torsion(&self, p: &BigUint) -> bool {
        self.invariant_factors.last().is_some_and(|d| d.is_multiple_of(p))
    }

    /// Primes dividing the torsion order.
    pub fn torsion_primes(&self) -> BTreeSet<BigUint> {
        match self.invariant_factors.last() {
            Some(d) => factorize(d).into_keys().collect(),
            None => BTreeSet::new(),
        }
    }

    /// The `p`-primary component `A_(p)` as a finite group.
    pub fn p_component(&self, p: &BigUint) -> FgGroup {
        let factors: Vec<BigUint> =
            self.invariant_factors.iter().map(|d| p.pow(valuation(d, p))).filter(|q| !q.is_one()).collect();
        Self { free_rank: 0, invariant_factors: factors }
    }

    /// `n`-fold direct sum of the group with itself.
    pub fn power(&self, n: usize) -> FgGroup {
        let mut factors = Vec::with_capacity(self.invariant_factors.len() * n);
        for d in &self.invariant_factors {
            factors.extend(core::iter::repeat_n(d.clone(), n));
        }
        Self { free_rank: self.free_rank * n, invariant_factors: factors }
    }

    /// Cyclic orders of the standard decomposition, free summands as `0`.
    pub fn cyclic_orders(&self) -> Vec<BigUint> {
        core::iter::repeat_n(BigUint::zero(), self.free_rank).chain(self.invariant_factors.iter().cloned()).collect()
    }
}

impl fmt::Display for FgGroup {
    /// `Z^2 (+) Z/6`, `Z`, or `0` for the zero group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let out = if first { Ok(()) } else { write!(f, " (+) ") };
            first = false;
            out
        };
        match self.free_rank {
            0 => {}
            1 => {
                sep(f)?;
                write!(f, "Z")?;
            }
            r => {
                sep(f)?;
                write!(f, "Z^{r}")?;
            }
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            sep(f)?;
            if run == 1 {
                write!(f, "Z/{d}")?;
            } else {
                write!(f, "(Z/{d})^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgGroup({self})")
    }
}

/// Free rank plus, for every prime `p`, the exponents `e` of the cyclic
/// summands `Z/p^e` (ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimaryDecomposition {
    pub free_rank: usize,
    pub parts: BTreeMap<BigUint, Vec<u32>>,
}

impl PrimaryDecomposition {
    pub fn new(free_rank: usize, parts: BTreeMap<BigUint, Vec<u32>>) -> Result<Self, GroupError> {
        let mut clean = BTreeMap::new();
        for (p, mut exps) in parts {
            if !is_prime(&p) {
                return Err(GroupError::NotPrime(p));
            }
            if exps.contains(&0) {
                return Err(GroupError::ZeroExponent);
            }
            if exps.is_empty() {
                continue;
            }
            exps.sort_unstable();
            clean.insert(p, exps);
        }
        Ok(Self { free_rank, parts: clean })
    }

    /// Chinese-remainder recombination into invariant-factor form.
    pub fn recombine(&self) -> FgGroup {
        recombine_parts(self.free_rank, self.parts.clone())
    }
}

/// The largest invariant factor takes the largest power of every prime, the
/// next one the second largest, and so on.
fn recombine_parts(free_rank: usize, parts: BTreeMap<BigUint, Vec<u32>>) -> FgGroup {
    let mut columns: Vec<Vec<u32>> = parts
        .values()
        .map(|exps| {
            let mut e = exps.clone();
            e.sort_unstable_by(|a, b| b.cmp(a));
            e
        })
        .collect();
    let length = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(length);
    for k in 0..length {
        let mut d = BigUint::one();
        for (p, exps) in parts.keys().zip(columns.iter_mut()) {
            if let Some(&e) = exps.get(k) {
                d *= p.pow(e);
            }
        }
        factors.push(d);
    }
    factors.reverse();
    FgGroup { free_rank, invariant_factors: factors }
}

/// The group `Z^cols / rowspan(relations)`.
pub fn cokernel(relations: &IntMatrix) -> FgGroup {
    let snf = smith_normal_form(relations);
    let diagonal = snf.diagonal();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    let factors = diagonal
        .into_iter()
        .filter_map(|d| match d.into_parts() {
            (Sign::Plus, m) if m > BigUint::one() => Some(m),
            _ => None,
        })
        .collect();
    FgGroup { free_rank: relations.cols() - rank, invariant_factors: factors }
}

/// Relation matrix presenting `a`: one row per invariant factor, free
/// generators unconstrained.
pub fn presentation(a: &FgGroup) -> IntMatrix {
    let k = a.invariant_factors.len();
    let cols = k + a.free_rank;
    let diag: Vec<BigInt> = a.invariant_factors.iter().cloned().map(BigInt::from).collect();
    IntMatrix::diagonal(k, cols, &diag)
}

pub fn direct_sum(a: &FgGroup, b: &FgGroup) -> FgGroup {
    FgGroup::from_cyclic_orders(
        a.free_rank + b.free_rank,
        a.invariant_factors.iter().chain(&b.invariant_factors).cloned(),
    )
}

pub fn primary_decomposition(a: &FgGroup) -> PrimaryDecomposition {
    let mut parts: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
    for d in &a.invariant_factors {
        for (p, e) in factorize(d) {
            parts.entry(p).or_default().push(e);
        }
    }
    for exps in parts.values_mut() {
        exps.sort_unstable();
    }
    PrimaryDecomposition { free_rank: a.free_rank, parts }
}

/// `Hom(Z^r (+) (+)Z/d_i, Z^s (+) (+)Z/e_j)
///   = Z^(rs) (+) (+)_j (Z/e_j)^r (+) (+)_(i,j) Z/gcd(d_i, e_j)`.
pub fn hom_group(a: &FgGroup, b: &FgGroup) -> FgGroup {
    let free_rank = a.free_rank * b.free_rank;
    let mut orders: Vec<BigUint> = Vec::new();
    for e in &b.invariant_factors {
        orders.extend(core::iter::repeat_n(e.clone(), a.free_rank));
    }
    for d in &a.invariant_factors {
        for e in &b.invariant_factors {
            orders.push(d.gcd(e));
        }
    }
    FgGroup::from_cyclic_orders(free_rank, orders)
}

pub fn hom_is_zero(a: &FgGroup, b: &FgGroup) -> bool {
    hom_group(a, b).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g(free: usize, factors: &[u64]) -> FgGroup {
        FgGroup::from_invariant_factors(free, factors.iter().map(|&d| BigUint::from(d)).collect()).unwrap()
    }

    fn cyc(n: u64) -> FgGroup {
        FgGroup::cyclic(n)
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::diagonal(2, 2, &[2, 3])), g(0, &[6]));
        assert_eq!(cokernel(&IntMatrix::zeros(0, 3)), g(3, &[]));
        assert_eq!(cokernel(&IntMatrix::diagonal(2, 2, &[2, 2])), g(0, &[2, 2]));
        // a zero row contributes nothing
        assert_eq!(cokernel(&IntMatrix::from_rows(2, &[vec![0, 0], vec![0, 5]]).unwrap()), g(1, &[5]));
    }

    #[test]
    fn presentation_round_trip() {
        for a in [g(0, &[]), g(2, &[6]), g(1, &[2, 4, 12])] {
            assert_eq!(cokernel(&presentation(&a)), a);
        }
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(direct_sum(&cyc(2), &cyc(3)), g(0, &[6]));
        let a = g(2, &[6, 12]);
        assert_eq!(direct_sum(&a, &FgGroup::zero()), a);
        assert_eq!(direct_sum(&g(1, &[2]), &g(0, &[4])), g(1, &[2, 4]));
    }

    #[test]
    fn primary_examples() {
        let p12 = primary_decomposition(&g(0, &[12]));
        assert_eq!(p12.parts, BTreeMap::from([(BigUint::from(2u32), vec![2]), (BigUint::from(3u32), vec![1])]));
        let free = primary_decomposition(&g(5, &[]));
        assert_eq!(free.free_rank, 5);
        assert!(free.parts.is_empty());
        let p = primary_decomposition(&g(0, &[2, 4]));
        assert_eq!(p.parts, BTreeMap::from([(BigUint::from(2u32), vec![1, 2])]));
        assert_eq!(p.recombine(), g(0, &[2, 4]));
    }

    #[test]
    fn hom_examples() {
        let b = g(2, &[6]);
        assert_eq!(hom_group(&FgGroup::free(1), &b), b);
        assert_eq!(hom_group(&cyc(4), &cyc(6)), g(0, &[2]));
        assert_eq!(hom_group(&g(1, &[2]), &cyc(4)), g(0, &[2, 4]));
        assert!(hom_is_zero(&cyc(2), &cyc(3)));
        assert!(!hom_is_zero(&FgGroup::free(1), &FgGroup::free(1)));
        assert!(!hom_is_zero(&cyc(6), &cyc(4)));
        // torsion never maps nontrivially into a free group
        assert!(hom_is_zero(&cyc(6), &FgGroup::free(3)));
    }

    #[test]
    fn constructor_validation() {
        assert!(FgGroup::from_invariant_factors(0, vec![BigUint::one()]).is_err());
        assert!(FgGroup::from_invariant_factors(0, vec![BigUint::from(4u32), BigUint::from(6u32)]).is_err());
        assert_eq!(FgGroup::cyclic(1u32), FgGroup::zero());
        assert_eq!(FgGroup::cyclic(0u32), FgGroup::free(1));
        assert!(PrimaryDecomposition::new(0, BTreeMap::from([(BigUint::from(4u32), vec![1])])).is_err());
    }

    #[test]
    fn components_and_display() {
        let a = g(2, &[6, 12]);
        assert_eq!(a.p_component(&BigUint::from(2u32)), g(0, &[2, 4]));
        assert_eq!(a.p_component(&BigUint::from(5u32)), FgGroup::zero());
        assert_eq!(a.torsion_primes().len(), 2);
        assert_eq!(alloc::format!("{a}"), "Z^2 (+) Z/6 (+) Z/12");
        assert_eq!(alloc::format!("{}", g(1, &[2, 2, 4])), "Z (+) (Z/2)^2 (+) Z/4");
        assert_eq!(alloc::format!("{}", FgGroup::zero()), "0");
    }
}
