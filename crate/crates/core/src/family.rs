//! Symbolic families of nonzero finitely generated abelian groups.
//!
//! A [`Family`] is a finite list of entries, each describing possibly
//! infinitely many members: `Repeat` is a fixed group taken a finite or
//! infinite number of times, `PrimeIndexed` is one member
//! `Z^r (+) (+)_i Z/p^(e_i)` for every prime `p` of a prime set.
//!
//! Infinite cardinals carry a label for printing but compare equal: none of
//! the decisions depend on which infinite cardinal is meant.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::num::NonZeroU64;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{first_prime_outside, is_prime};
use crate::group::{direct_sum, FgGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("a family needs at least one entry")]
    Empty,
    #[error("families may not contain the zero group")]
    ZeroGroup,
    #[error("{0} is not a prime")]
    NotPrime(BigUint),
    #[error("an explicit prime set must be nonempty")]
    EmptyPrimeSet,
    #[error("a prime-indexed template needs torsion exponents or a free part")]
    EmptyTemplate,
    #[error("template exponents must be positive")]
    ZeroExponent,
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("infinitely many members have nonzero {0}-torsion")]
    InfiniteSupport(BigUint),
    #[error("the product is not self-small, so it has no normal form of the form F (+) prod_p M_p")]
    NotSelfSmall,
    #[error("free rank too large to represent")]
    RankOverflow,
}

/// A nonzero cardinal; only finite versus infinite matters.
#[derive(Debug, Clone)]
pub enum Cardinal {
    Finite(NonZeroU64),
    Infinite(String),
}

impl Cardinal {
    pub fn finite(n: u64) -> Result<Self, FamilyError> {
        NonZeroU64::new(n).map(Cardinal::Finite).ok_or(FamilyError::ZeroCount)
    }

    pub fn omega() -> Self {
        Cardinal::Infinite(String::from("omega"))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn size(&self) -> Size {
        match self {
            Cardinal::Finite(n) => Size::Finite(BigUint::from(n.get())),
            Cardinal::Infinite(_) => Size::Infinite,
        }
    }
}

impl PartialEq for Cardinal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => a == b,
            (Cardinal::Infinite(_), Cardinal::Infinite(_)) => true,
            _ => false,
        }
    }
}

impl Eq for Cardinal {}

impl Hash for Cardinal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Cardinal::Finite(n) => n.hash(state),
            Cardinal::Infinite(_) => u64::MAX.hash(state),
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite(label) => write!(f, "{label}"),
        }
    }
}

/// Size classification of an aggregate count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Size {
    Finite(BigUint),
    Infinite,
}

impl Size {
    pub fn zero() -> Self {
        Size::Finite(BigUint::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Size::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Size::Finite(n) if n.is_zero())
    }

    pub fn add(&self, other: &Size) -> Size {
        match (self, other) {
            (Size::Finite(a), Size::Finite(b)) => Size::Finite(a + b),
            _ => Size::Infinite,
        }
    }

    /// Product where `0 * infinite = 0`.
    pub fn mul(&self, other: &Size) -> Size {
        match (self, other) {
            (Size::Finite(a), Size::Finite(b)) => Size::Finite(a * b),
            (Size::Finite(a), Size::Infinite) | (Size::Infinite, Size::Finite(a)) if a.is_zero() => Size::zero(),
            _ => Size::Infinite,
        }
    }
}

impl From<u64> for Size {
    fn from(n: u64) -> Self {
        Size::Finite(BigUint::from(n))
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Finite(n) => write!(f, "{n}"),
            Size::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeSet {
    Explicit(BTreeSet<BigUint>),
    /// All primes except the listed ones.
    Cofinite(BTreeSet<BigUint>),
}

impl PrimeSet {
    pub fn all() -> Self {
        PrimeSet::Cofinite(BTreeSet::new())
    }

    pub fn explicit(primes: impl IntoIterator<Item = BigUint>) -> Result<Self, FamilyError> {
        let set: BTreeSet<BigUint> = primes.into_iter().collect();
        if set.is_empty() {
            return Err(FamilyError::EmptyPrimeSet);
        }
        check_primes(&set)?;
        Ok(PrimeSet::Explicit(set))
    }

    pub fn all_except(excluded: impl IntoIterator<Item = BigUint>) -> Result<Self, FamilyError> {
        let set: BTreeSet<BigUint> = excluded.into_iter().collect();
        check_primes(&set)?;
        Ok(PrimeSet::Cofinite(set))
    }

    fn validate(&self) -> Result<(), FamilyError> {
        match self {
            PrimeSet::Explicit(set) if set.is_empty() => Err(FamilyError::EmptyPrimeSet),
            PrimeSet::Explicit(set) | PrimeSet::Cofinite(set) => check_primes(set),
        }
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        match self {
            PrimeSet::Explicit(set) => set.contains(p),
            PrimeSet::Cofinite(excluded) => !excluded.contains(p) && is_prime(p),
        }
    }

    pub fn size(&self) -> Size {
        match self {
            PrimeSet::Explicit(set) => Size::from(set.len() as u64),
            PrimeSet::Cofinite(_) => Size::Infinite,
        }
    }

    /// The primes written down in the set, listed or excluded.
    pub fn mentioned(&self) -> &BTreeSet<BigUint> {
        match self {
            PrimeSet::Explicit(set) | PrimeSet::Cofinite(set) => set,
        }
    }
}

fn check_primes(set: &BTreeSet<BigUint>) -> Result<(), FamilyError> {
    match set.iter().find(|p| !is_prime(p)) {
        Some(p) => Err(FamilyError::NotPrime(p.clone())),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyEntry {
    Repeat {
        group: FgGroup,
        count: Cardinal,
    },
    /// `Z^free_rank (+) (+)_e Z/p^e` for every `p` in `primes`; exponents ascending.
    PrimeIndexed {
        free_rank: usize,
        exponents: Vec<u32>,
        primes: PrimeSet,
    },
}

impl FamilyEntry {
    pub fn repeat(group: FgGroup, count: Cardinal) -> Result<Self, FamilyError> {
        let entry = FamilyEntry::Repeat { group, count };
        entry.validate()?;
        Ok(entry)
    }

    pub fn prime_indexed(free_rank: usize, mut exponents: Vec<u32>, primes: PrimeSet) -> Result<Self, FamilyError> {
        exponents.sort_unstable();
        let entry = FamilyEntry::PrimeIndexed { free_rank, exponents, primes };
        entry.validate()?;
        Ok(entry)
    }

    fn validate(&self) -> Result<(), FamilyError> {
        match self {
            FamilyEntry::Repeat { group, .. } if group.is_zero() => Err(FamilyError::ZeroGroup),
            FamilyEntry::Repeat { .. } => Ok(()),
            FamilyEntry::PrimeIndexed { free_rank, exponents, primes } => {
                if exponents.is_empty() && *free_rank == 0 {
                    return Err(FamilyError::EmptyTemplate);
                }
                if exponents.contains(&0) {
                    return Err(FamilyError::ZeroExponent);
                }
                primes.validate()
            }
        }
    }

    /// Number of members described by the entry.
    pub fn member_count(&self) -> Size {
        match self {
            FamilyEntry::Repeat { count, .. } => count.size(),
            FamilyEntry::PrimeIndexed { primes, .. } => primes.size(),
        }
    }

    pub fn free_rank(&self) -> usize {
        match self {
            FamilyEntry::Repeat { group, .. } => group.free_rank(),
            FamilyEntry::PrimeIndexed { free_rank, .. } => *free_rank,
        }
    }

    pub fn has_torsion(&self) -> bool {
        match self {
            FamilyEntry::Repeat { group, .. } => !group.is_free(),
            FamilyEntry::PrimeIndexed { exponents, .. } => !exponents.is_empty(),
        }
    }

    /// The member at prime `p` of a prime-indexed entry.
    pub fn member_at(&self, p: &BigUint) -> Option<FgGroup> {
        match self {
            FamilyEntry::PrimeIndexed { free_rank, exponents, primes } if primes.contains(p) => {
                Some(FgGroup::from_cyclic_orders(*free_rank, exponents.iter().map(|&e| p.pow(e))))
            }
            _ => None,
        }
    }

    /// Members of this entry whose `p`-primary part is nonzero.
    pub fn p_support(&self, p: &BigUint) -> Size {
        match self {
            FamilyEntry::Repeat { group, count } if group.has_p_torsion(p) => count.size(),
            FamilyEntry::Repeat { .. } => Size::zero(),
            FamilyEntry::PrimeIndexed { exponents, primes, .. } => {
                if !exponents.is_empty() && primes.contains(p) {
                    Size::from(1)
                } else {
                    Size::zero()
                }
            }
        }
    }

    /// Primes written anywhere in the entry.
    pub fn mentioned_primes(&self) -> BTreeSet<BigUint> {
        match self {
            FamilyEntry::Repeat { group, .. } => group.torsion_primes(),
            FamilyEntry::PrimeIndexed { primes, .. } => primes.mentioned().clone(),
        }
    }
}

#[derive(Debug, Clone, Eq)]
pub struct Family {
    entries: Vec<FamilyEntry>,
}

impl Family {
    pub fn new(mut entries: Vec<FamilyEntry>) -> Result<Self, FamilyError> {
        if entries.is_empty() {
            return Err(FamilyError::Empty);
        }
        for e in &mut entries {
            e.validate()?;
            if let FamilyEntry::PrimeIndexed { exponents, .. } = e {
                exponents.sort_unstable();
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    /// Every prime written somewhere in the family.
    pub fn mentioned_primes(&self) -> BTreeSet<BigUint> {
        self.entries.iter().flat_map(FamilyEntry::mentioned_primes).collect()
    }

    /// A prime on which every entry behaves like on all unmentioned primes.
    pub fn generic_prime(&self) -> BigUint {
        first_prime_outside(self.mentioned_primes().iter())
    }

    pub fn is_all_free(&self) -> bool {
        self.entries.iter().all(|e| !e.has_torsion())
    }

    /// Expands a family made of finite counts and explicit prime sets into
    /// its list of members; `None` if the family is infinite.
    pub fn expand(&self) -> Option<Vec<FgGroup>> {
        let mut out = Vec::new();
        for entry in &self.entries {
            match entry {
                FamilyEntry::Repeat { group, count: Cardinal::Finite(n) } => {
                    out.extend(core::iter::repeat_n(group.clone(), n.get().to_usize()?));
                }
                FamilyEntry::PrimeIndexed { primes: PrimeSet::Explicit(set), .. } => {
                    out.extend(set.iter().filter_map(|p| entry.member_at(p)));
                }
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Families compare as multisets of entries.
impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        if self.entries.len() != other.entries.len() {
            return false;
        }
        let mut used = alloc::vec![false; other.entries.len()];
        self.entries.iter().all(|e| match other.entries.iter().enumerate().position(|(i, o)| !used[i] && o == e) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        })
    }
}

/// Primes where some member has torsion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSupport {
    Finite(BTreeSet<BigUint>),
    Cofinite(BTreeSet<BigUint>),
}

impl PrimeSupport {
    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSupport::Finite(s) if s.is_empty())
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        match self {
            PrimeSupport::Finite(s) => s.contains(p),
            PrimeSupport::Cofinite(excluded) => !excluded.contains(p) && is_prime(p),
        }
    }
}

pub fn infinite_member_count(f: &Family) -> Size {
    f.entries.iter().filter(|e| e.free_rank() > 0).fold(Size::zero(), |acc, e| acc.add(&e.member_count()))
}

pub fn torsion_support(f: &Family, p: &BigUint) -> Size {
    f.entries.iter().fold(Size::zero(), |acc, e| acc.add(&e.p_support(p)))
}

pub fn torsion_support_primes(f: &Family) -> PrimeSupport {
    let mut finite = BTreeSet::new();
    let mut cofinite: Option<BTreeSet<BigUint>> = None;
    for entry in &f.entries {
        match entry {
            FamilyEntry::Repeat { group, .. } => finite.extend(group.torsion_primes()),
            FamilyEntry::PrimeIndexed { exponents, .. } if exponents.is_empty() => {}
            FamilyEntry::PrimeIndexed { primes: PrimeSet::Explicit(set), .. } => finite.extend(set.iter().cloned()),
            FamilyEntry::PrimeIndexed { primes: PrimeSet::Cofinite(excluded), .. } => {
                cofinite = Some(match cofinite {
                    None => excluded.clone(),
                    Some(prev) => prev.intersection(excluded).cloned().collect(),
                });
            }
        }
    }
    match cofinite {
        None => PrimeSupport::Finite(finite),
        Some(excluded) => PrimeSupport::Cofinite(excluded.difference(&finite).cloned().collect()),
    }
}

/// `S_(p)`: the direct sum of the `p`-components of all members.
pub fn primary_sum(f: &Family, p: &BigUint) -> Result<FgGroup, FamilyError> {
    let mut sum = FgGroup::zero();
    for entry in &f.entries {
        match entry {
            FamilyEntry::Repeat { group, count } => {
                let component = group.p_component(p);
                if component.is_zero() {
                    continue;
                }
                let Cardinal::Finite(n) = count else {
                    return Err(FamilyError::InfiniteSupport(p.clone()));
                };
                let n = n.get().to_usize().ok_or(FamilyError::RankOverflow)?;
                sum = direct_sum(&sum, &component.power(n));
            }
            FamilyEntry::PrimeIndexed { .. } => {
                if let Some(member) = entry.member_at(p) {
                    sum = direct_sum(&sum, &member.p_component(p));
                }
            }
        }
    }
    Ok(sum)
}

/// Rank of `S / T_S`.
pub fn free_quotient_rank(f: &Family) -> Size {
    f.entries.iter().fold(Size::zero(), |acc, e| acc.add(&Size::from(e.free_rank() as u64).mul(&e.member_count())))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TorsionFree {
    /// `Z^kappa`, the all-free case.
    FreePower(Cardinal),
    /// A finitely generated free summand `Z^rank`.
    FiniteFree(usize),
}

/// `prod M = F (+) prod_p M_p`, or `Z^kappa` when all members are free.
///
/// `M_p` is `explicit_parts[p]` when present; otherwise it is the sum of
/// the exponent lists of every generic part whose prime set contains `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductNormalForm {
    pub torsion_free: TorsionFree,
    pub explicit_parts: BTreeMap<BigUint, Vec<u32>>,
    pub generic_parts: Vec<(PrimeSet, Vec<u32>)>,
}

impl ProductNormalForm {
    /// The finite `p`-group `M_p`.
    pub fn component(&self, p: &BigUint) -> FgGroup {
        if let Some(exps) = self.explicit_parts.get(p) {
            return FgGroup::from_cyclic_orders(0, exps.iter().map(|&e| p.pow(e)));
        }
        let orders = self
            .generic_parts
            .iter()
            .filter(|(set, _)| set.contains(p))
            .flat_map(|(_, exps)| exps.iter().map(|&e| p.pow(e)));
        FgGroup::from_cyclic_orders(0, orders)
    }
}

pub fn normal_form(f: &Family) -> Result<ProductNormalForm, FamilyError> {
    if f.is_all_free() {
        let kappa = match free_quotient_rank(f) {
            Size::Finite(n) => Cardinal::finite(n.to_u64().ok_or(FamilyError::RankOverflow)?)?,
            Size::Infinite => Cardinal::Infinite(infinite_label(f)),
        };
        return Ok(ProductNormalForm {
            torsion_free: TorsionFree::FreePower(kappa),
            explicit_parts: BTreeMap::new(),
            generic_parts: Vec::new(),
        });
    }
    let rank = match free_quotient_rank(f) {
        Size::Finite(n) => n.to_usize().ok_or(FamilyError::RankOverflow)?,
        Size::Infinite => return Err(FamilyError::NotSelfSmall),
    };
    let special = f.mentioned_primes();
    let mut explicit_parts = BTreeMap::new();
    for p in &special {
        let component = primary_sum(f, p).map_err(|_| FamilyError::NotSelfSmall)?;
        if !component.is_zero() {
            let exps = crate::group::primary_decomposition(&component).parts.remove(p).unwrap_or_default();
            explicit_parts.insert(p.clone(), exps);
        }
    }
    // remaining primes: only cofinite templates contribute, uniformly
    let generic_parts = f
        .entries
        .iter()
        .filter_map(|e| match e {
            FamilyEntry::PrimeIndexed { exponents, primes: PrimeSet::Cofinite(_), .. } if !exponents.is_empty() => {
                Some((PrimeSet::Cofinite(special.clone()), exponents.clone()))
            }
            _ => None,
        })
        .collect();
    Ok(ProductNormalForm { torsion_free: TorsionFree::FiniteFree(rank), explicit_parts, generic_parts })
}

fn infinite_label(f: &Family) -> String {
    f.entries
        .iter()
        .find_map(|e| match e {
            FamilyEntry::Repeat { group, count: Cardinal::Infinite(label) } if group.free_rank() > 0 => {
                Some(label.clone())
            }
            _ => None,
        })
        .unwrap_or_else(|| String::from("omega"))
}

impl fmt::Display for ProductNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.torsion_free {
            TorsionFree::FreePower(k) => return write!(f, "Z^{k}"),
            TorsionFree::FiniteFree(r) => write!(f, "{}", FgGroup::free(*r))?,
        }
        for (p, exps) in &self.explicit_parts {
            write!(f, " (+) M_{p} = {}", FgGroup::from_cyclic_orders(0, exps.iter().map(|&e| p.pow(e))))?;
        }
        for (set, exps) in &self.generic_parts {
            let excluded = set.mentioned();
            write!(f, " (+) M_p ~ ")?;
            for (i, e) in exps.iter().enumerate() {
                if i > 0 {
                    write!(f, " (+) ")?;
                }
                if *e == 1 {
                    write!(f, "Z/p")?;
                } else {
                    write!(f, "Z/p^{e}")?;
                }
            }
            if !excluded.is_empty() {
                write!(f, " for p not in {{")?;
                for (i, p) in excluded.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")?;
            }
        }
        Ok(())
    }
}

/// Convenience for tests and callers holding small primes.
pub fn prime(p: u64) -> BigUint {
    BigUint::from(p)
}
