//! Self-smallness decisions with checkable certificates.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{first_prime_outside, is_prime};
use crate::catalogue::{CatalogueError, FactBase, GroupRef, Relation, SaturationError, Subject, Truth};
use crate::family::{
    free_quotient_rank, infinite_member_count, normal_form, torsion_support, Cardinal, Family, FamilyEntry, PrimeSet,
    ProductNormalForm, Size, TorsionFree,
};
use crate::group::{hom_is_zero, FgGroup};
use crate::rules::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecisionError {
    #[error("hypothesis violated: all members torsion-free")]
    AllTorsionFree,
    #[error("unknown base fact: self-smallness of `{0}` is not known")]
    UnknownBaseFact(String),
    #[error("no catalogue group is declared as `{0}` raised to an infinite product power")]
    MissingPower(String),
    #[error("a finite sum needs at least one member")]
    EmptySum,
    #[error("the zero group cannot be a family member")]
    ZeroBase,
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    SelfSmall,
    NotSelfSmall,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::SelfSmall => "self-small",
            Outcome::NotSelfSmall => "not self-small",
            Outcome::Unknown => "unknown",
        })
    }
}

/// A finite-sum summand or power base: explicit or a catalogue name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Member {
    Fg(FgGroup),
    Named(String),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Fg(g) => write!(f, "{g}"),
            Member::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerKind {
    /// `A^(kappa)`
    Sum,
    /// `A^kappa`
    Product,
}

impl PowerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PowerKind::Sum => "sum",
            PowerKind::Product => "product",
        }
    }
}

/// What a certificate is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Question {
    Product(Family),
    Sum(Vec<Member>),
    Power { base: Member, count: Cardinal, kind: PowerKind },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParamValue {
    Nat(BigUint),
    Size(Size),
    Cardinal(Cardinal),
    Group(FgGroup),
    Name(String),
    Exponents(Vec<u32>),
    Primes(PrimeSet),
    Truth(Truth),
}

impl From<usize> for ParamValue {
    fn from(n: usize) -> Self {
        ParamValue::Nat(BigUint::from(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertNode {
    pub rule: String,
    pub anchor: String,
    pub params: Vec<(String, ParamValue)>,
    pub children: Vec<CertNode>,
}

impl CertNode {
    pub fn new(rule: RuleId) -> Self {
        Self { rule: rule.id().into(), anchor: rule.anchor().into(), params: Vec::new(), children: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn child(mut self, node: CertNode) -> Self {
        self.children.push(node);
        self
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub question: Question,
    pub root: CertNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Certificate,
}

impl From<Size> for ParamValue {
    fn from(s: Size) -> Self {
        ParamValue::Size(s)
    }
}

impl From<BigUint> for ParamValue {
    fn from(n: BigUint) -> Self {
        ParamValue::Nat(n)
    }
}

impl From<Cardinal> for ParamValue {
    fn from(c: Cardinal) -> Self {
        ParamValue::Cardinal(c)
    }
}

impl From<Truth> for ParamValue {
    fn from(t: Truth) -> Self {
        ParamValue::Truth(t)
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        ParamValue::Name(s.into())
    }
}

impl From<String> for ParamValue {
    fn from(s: String) -> Self {
        ParamValue::Name(s)
    }
}

impl From<Vec<u32>> for ParamValue {
    fn from(e: Vec<u32>) -> Self {
        ParamValue::Exponents(e)
    }
}

impl From<PrimeSet> for ParamValue {
    fn from(p: PrimeSet) -> Self {
        ParamValue::Primes(p)
    }
}

// ---------------------------------------------------------------------------
// products of finitely generated groups

pub fn decide_product_self_small(f: &Family) -> Verdict {
    let question = Question::Product(f.clone());
    let root = CertNode::new(RuleId::ProductCriterion);
    if f.is_all_free() {
        let rank = free_quotient_rank(f);
        let root = root
            .param("branch", "torsion_free")
            .child(CertNode::new(RuleId::TorsionFreeFamily).param("rank", rank.clone()))
            .child(CertNode::new(RuleId::FreePowerSelfSmall).param("kappa", rank));
        return Verdict { outcome: Outcome::SelfSmall, certificate: Certificate { question, root } };
    }
    let root = root.param("branch", "torsion");
    if !free_quotient_rank(f).is_finite() {
        let entry = f
            .entries()
            .iter()
            .position(|e| e.free_rank() > 0 && !e.member_count().is_finite())
            .expect("infinite free quotient comes from some entry");
        let root = root.child(CertNode::new(RuleId::InfiniteFreePart).param("entry", entry));
        return Verdict { outcome: Outcome::NotSelfSmall, certificate: Certificate { question, root } };
    }
    let witness = f.entries().iter().enumerate().find_map(|(i, e)| match e {
        FamilyEntry::Repeat { group, count: Cardinal::Infinite(_) } if !group.is_free() => {
            Some((i, group.torsion_primes().into_iter().next().expect("torsion group has a prime")))
        }
        _ => None,
    });
    if let Some((entry, p)) = witness {
        let root = root.child(
            CertNode::new(RuleId::InfinitePrimarySupport)
                .param("entry", entry)
                .param("prime", p)
                .param("support", Size::Infinite),
        );
        return Verdict { outcome: Outcome::NotSelfSmall, certificate: Certificate { question, root } };
    }

    let nf = normal_form(f).expect("support conditions hold");
    let mut root = root
        .child(CertNode::new(RuleId::FiniteFreeQuotient).param("rank", free_quotient_rank(f)))
        .child(primary_sums_node(f))
        .child(normal_form_node(&nf));
    if !nf.generic_parts.is_empty() {
        root = root.child(CertNode::new(RuleId::FinitePGroupProduct));
    }
    Verdict { outcome: Outcome::SelfSmall, certificate: Certificate { question, root } }
}

fn primary_sums_node(f: &Family) -> CertNode {
    let mut node = CertNode::new(RuleId::FinitePrimarySums);
    for p in f.mentioned_primes() {
        let support = torsion_support(f, &p);
        node = node.param("prime", p).param("support", support);
    }
    let g = f.generic_prime();
    let support = torsion_support(f, &g);
    node.param("generic_prime", g).param("generic_support", support)
}

fn normal_form_node(nf: &ProductNormalForm) -> CertNode {
    let rank = match nf.torsion_free {
        TorsionFree::FiniteFree(r) => r,
        TorsionFree::FreePower(_) => unreachable!("torsion branch"),
    };
    let mut node = CertNode::new(RuleId::ProductNormalForm).param("free_rank", rank);
    for (p, exps) in &nf.explicit_parts {
        node = node.param("prime", p.clone()).param("exponents", exps.clone());
    }
    for (set, exps) in &nf.generic_parts {
        node = node.param("primes", set.clone()).param("exponents", exps.clone());
    }
    node
}

// ---------------------------------------------------------------------------
// the three equivalent conditions, each computed its own way

/// Finitely many infinite members and finite `p`-support for every prime,
/// read off the aggregate counts.
pub fn evaluate_condition_4(f: &Family) -> Result<bool, DecisionError> {
    require_torsion(f)?;
    if !infinite_member_count(f).is_finite() {
        return Ok(false);
    }
    let mut primes = f.mentioned_primes();
    primes.insert(f.generic_prime());
    Ok(primes.iter().all(|p| torsion_support(f, p).is_finite()))
}

/// For each member `A`, finitely many members `B` with `Hom(B, A) != 0`.
pub fn evaluate_condition_5(f: &Family) -> Result<bool, DecisionError> {
    require_torsion(f)?;
    let mentioned = f.mentioned_primes();
    for a in representatives(f, &mentioned) {
        let mut total = Size::zero();
        for entry in f.entries() {
            let count = match entry {
                FamilyEntry::Repeat { group, count } => {
                    if hom_is_zero(group, &a) {
                        Size::zero()
                    } else {
                        count.size()
                    }
                }
                FamilyEntry::PrimeIndexed { primes, .. } => {
                    let relevant = a.torsion_primes();
                    prime_indexed_count(entry, primes, &relevant, &mentioned, |b| !hom_is_zero(b, &a))
                }
            };
            total = total.add(&count);
        }
        if !total.is_finite() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finitely many infinite members, and for each finite member `C`,
/// finitely many members `B` with `Hom(C, B) != 0`.
pub fn evaluate_condition_6(f: &Family) -> Result<bool, DecisionError> {
    require_torsion(f)?;
    let infinitely_many_infinite = f.entries().iter().any(|e| match e {
        FamilyEntry::Repeat { group, count } => !group.is_finite() && !count.is_finite(),
        FamilyEntry::PrimeIndexed { free_rank, primes, .. } => *free_rank > 0 && !primes.size().is_finite(),
    });
    if infinitely_many_infinite {
        return Ok(false);
    }
    let mentioned = f.mentioned_primes();
    for c in representatives(f, &mentioned).into_iter().filter(FgGroup::is_finite) {
        let mut total = Size::zero();
        for entry in f.entries() {
            let count = match entry {
                FamilyEntry::Repeat { group, count } => {
                    if hom_is_zero(&c, group) {
                        Size::zero()
                    } else {
                        count.size()
                    }
                }
                FamilyEntry::PrimeIndexed { primes, .. } => {
                    let relevant = c.torsion_primes();
                    prime_indexed_count(entry, primes, &relevant, &mentioned, |b| !hom_is_zero(&c, b))
                }
            };
            total = total.add(&count);
        }
        if !total.is_finite() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_torsion(f: &Family) -> Result<(), DecisionError> {
    if f.is_all_free() {
        Err(DecisionError::AllTorsionFree)
    } else {
        Ok(())
    }
}

/// One member per isomorphism behaviour: every member of finite entries,
/// and for a cofinite entry its members at mentioned primes plus one at a
/// prime nobody mentions.
fn representatives(f: &Family, mentioned: &BTreeSet<BigUint>) -> Vec<FgGroup> {
    let generic = first_prime_outside(mentioned.iter());
    let mut out = Vec::new();
    for entry in f.entries() {
        match entry {
            FamilyEntry::Repeat { group, .. } => out.push(group.clone()),
            FamilyEntry::PrimeIndexed { primes: PrimeSet::Explicit(set), .. } => {
                out.extend(set.iter().filter_map(|p| entry.member_at(p)));
            }
            FamilyEntry::PrimeIndexed { primes: PrimeSet::Cofinite(_), .. } => {
                out.extend(mentioned.iter().chain(core::iter::once(&generic)).filter_map(|p| entry.member_at(p)));
            }
        }
    }
    out
}

/// Members `B` of a prime-indexed entry with `test(B)`. Members at the
/// primes in `relevant` are tested one by one; all remaining members of a
/// cofinite entry behave like the one at a fresh prime.
fn prime_indexed_count(
    entry: &FamilyEntry,
    primes: &PrimeSet,
    relevant: &BTreeSet<BigUint>,
    mentioned: &BTreeSet<BigUint>,
    test: impl Fn(&FgGroup) -> bool,
) -> Size {
    match primes {
        PrimeSet::Explicit(set) => {
            let hits = set.iter().filter_map(|p| entry.member_at(p)).filter(|b| test(b)).count();
            Size::from(hits as u64)
        }
        PrimeSet::Cofinite(_) => {
            let hits = relevant.iter().filter_map(|p| entry.member_at(p)).filter(|b| test(b)).count();
            let fresh = first_prime_outside(relevant.iter().chain(mentioned.iter()));
            let rest = entry.member_at(&fresh).expect("cofinite set contains every fresh prime");
            if test(&rest) {
                Size::Infinite
            } else {
                Size::from(hits as u64)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// finite sums and powers over the catalogue

/// Adds the finitely generated members missing from `fb` as catalogue
/// groups and saturates.
/// Adds every finitely generated member missing from `fb` and saturates.
pub fn with_members(fb: &FactBase, members: &[Member]) -> Result<FactBase, DecisionError> {
    let mut fb = fb.clone();
    for m in members {
        match m {
            Member::Named(name) => {
                fb.group_id(name)?;
            }
            Member::Fg(g) => {
                let name = g.to_string();
                if fb.find_fg(g).is_none() && fb.group_id(&name).is_err() {
                    fb.add_group(GroupRef::fg(name, g.clone()))?;
                }
            }
        }
    }
    Ok(fb.saturate()?)
}

fn catalogue_name(fb: &FactBase, m: &Member) -> Option<String> {
    match m {
        Member::Named(n) => Some(n.clone()),
        Member::Fg(g) => fb.find_fg(g).map(|id| fb.group(id).name.clone()),
    }
}

fn catalogue_node(a: &str, b: &str, value: Truth) -> CertNode {
    let rule = if value == Truth::Unknown { RuleId::NoFact } else { RuleId::CatalogueFact };
    let node = CertNode::new(rule).param("a", a).param("b", b);
    if value == Truth::Unknown {
        node
    } else {
        node.param("value", value)
    }
}

pub fn decide_finite_sum_self_small(members: &[Member], fb: &FactBase) -> Result<Verdict, DecisionError> {
    if members.is_empty() {
        return Err(DecisionError::EmptySum);
    }
    let fb = with_members(fb, members)?;
    let mut root = CertNode::new(RuleId::FiniteSumPairs).param("size", members.len());
    let mut any_no = false;
    let mut any_unknown = false;
    for (i, mi) in members.iter().enumerate() {
        for (j, mj) in members.iter().enumerate() {
            let node = if let Member::Fg(_) = mi {
                CertNode::new(RuleId::FgSmall)
            } else {
                let a = catalogue_name(&fb, mi).expect("named member resolved");
                let b = catalogue_name(&fb, mj).expect("finitely generated member added");
                let value = fb.value(Subject::Small(fb.group_id(&a)?, fb.group_id(&b)?));
                any_no |= value == Truth::No;
                any_unknown |= value == Truth::Unknown;
                catalogue_node(&a, &b, value)
            };
            root = root.child(node.param("source", i).param("target", j));
        }
    }
    let outcome = sum_outcome(any_no, any_unknown);
    Ok(Verdict { outcome, certificate: Certificate { question: Question::Sum(members.to_vec()), root } })
}

fn sum_outcome(any_no: bool, any_unknown: bool) -> Outcome {
    if any_no {
        Outcome::NotSelfSmall
    } else if any_unknown {
        Outcome::Unknown
    } else {
        Outcome::SelfSmall
    }
}

/// `A^(kappa)` or `A^kappa`. `fb` must be saturated when `base` is named.
pub fn decide_repeat_power(
    base: &Member,
    count: &Cardinal,
    kind: PowerKind,
    fb: &FactBase,
) -> Result<Verdict, DecisionError> {
    let question = Question::Power { base: base.clone(), count: count.clone(), kind };
    match (base, kind) {
        (Member::Fg(g), PowerKind::Product) => {
            if g.is_zero() {
                return Err(DecisionError::ZeroBase);
            }
            let entry = FamilyEntry::repeat(g.clone(), count.clone()).map_err(|_| DecisionError::ZeroBase)?;
            let family = Family::new(vec![entry]).map_err(|_| DecisionError::ZeroBase)?;
            Ok(decide_product_self_small(&family))
        }
        (Member::Named(name), PowerKind::Product) if !count.is_finite() => {
            let x = infinite_product_power(fb, name)?;
            let xid = fb.group_id(&x)?;
            let value = fb.value(Subject::Small(xid, xid));
            let outcome = match value {
                Truth::Yes => Outcome::SelfSmall,
                Truth::No => Outcome::NotSelfSmall,
                Truth::Unknown => return Err(DecisionError::UnknownBaseFact(x)),
            };
            let root =
                CertNode::new(RuleId::ProductPower).param("power", x.as_str()).child(catalogue_node(&x, &x, value));
            Ok(Verdict { outcome, certificate: Certificate { question, root } })
        }
        _ => {
            let (child, base_yes) = match base {
                Member::Fg(_) => (CertNode::new(RuleId::FgSmall), true),
                Member::Named(name) => {
                    let id = fb.group_id(name)?;
                    let value = fb.value(Subject::Small(id, id));
                    if value == Truth::Unknown {
                        return Err(DecisionError::UnknownBaseFact(name.clone()));
                    }
                    (catalogue_node(name, name, value), value == Truth::Yes)
                }
            };
            let outcome = if base_yes && count.is_finite() { Outcome::SelfSmall } else { Outcome::NotSelfSmall };
            let root =
                CertNode::new(RuleId::SumPower).param("count", count.clone()).param("kind", kind.as_str()).child(child);
            Ok(Verdict { outcome, certificate: Certificate { question, root } })
        }
    }
}

fn infinite_product_power(fb: &FactBase, base: &str) -> Result<String, DecisionError> {
    let bid = fb.group_id(base)?;
    fb.relations()
        .iter()
        .find_map(|r| match r {
            Relation::PowerProductNode { x, base, count } if *base == bid && !count.is_finite() => {
                Some(fb.group(*x).name.clone())
            }
            _ => None,
        })
        .ok_or_else(|| DecisionError::MissingPower(base.into()))
}

// ---------------------------------------------------------------------------
// certificate checking

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid certificate node at {path:?}: {reason}")]
pub struct CertificateError {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub reason: String,
}

pub fn check_certificate(v: &Verdict) -> bool {
    validate_certificate(v, None).is_ok()
}

/// Validates every node; catalogue values are re-read from `fb` when given.
pub fn validate_certificate(v: &Verdict, fb: Option<&FactBase>) -> Result<(), CertificateError> {
    let mut c = Checker { path: Vec::new() };
    c.structure(&v.certificate.root)?;
    match &v.certificate.question {
        Question::Product(f) => c.product(f, v.outcome, &v.certificate.root),
        Question::Sum(members) => c.sum(members, v.outcome, &v.certificate.root, fb),
        Question::Power { base, count, kind } => c.power(base, count, *kind, v.outcome, &v.certificate.root, fb),
    }
}

struct Checker {
    path: Vec<usize>,
}

type Check = Result<(), CertificateError>;

impl Checker {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, CertificateError> {
        Err(CertificateError { path: self.path.clone(), reason: reason.into() })
    }

    fn ensure(&self, cond: bool, reason: &str) -> Check {
        if cond {
            Ok(())
        } else {
            self.fail(reason)
        }
    }

    /// Every rule id exists and every anchor matches the table.
    fn structure(&mut self, node: &CertNode) -> Check {
        let rule: RuleId = match node.rule.parse() {
            Ok(r) => r,
            Err(e) => return self.fail(format!("{e}")),
        };
        self.ensure(node.anchor == rule.anchor(), "anchor does not match the rule table")?;
        for (i, child) in node.children.iter().enumerate() {
            self.path.push(i);
            self.structure(child)?;
            self.path.pop();
        }
        Ok(())
    }

    fn at<T>(
        &mut self,
        i: usize,
        f: impl FnOnce(&mut Self) -> Result<T, CertificateError>,
    ) -> Result<T, CertificateError> {
        self.path.push(i);
        let out = f(self)?;
        self.path.pop();
        Ok(out)
    }

    fn rule(&self, node: &CertNode, expected: RuleId) -> Check {
        self.ensure(node.rule == expected.id(), &format!("expected rule `{expected}`, found `{}`", node.rule))
    }

    fn param<'a>(&self, node: &'a CertNode, key: &str) -> Result<&'a ParamValue, CertificateError> {
        match node.get(key) {
            Some(v) => Ok(v),
            None => self.fail(format!("missing parameter `{key}`")),
        }
    }

    fn index(&self, node: &CertNode, key: &str, len: usize) -> Result<usize, CertificateError> {
        match self.param(node, key)? {
            ParamValue::Nat(n) => match n.to_usize() {
                Some(i) if i < len => Ok(i),
                _ => self.fail(format!("`{key}` out of range")),
            },
            _ => self.fail(format!("`{key}` must be a natural number")),
        }
    }

    fn name<'a>(&self, node: &'a CertNode, key: &str) -> Result<&'a str, CertificateError> {
        match self.param(node, key)? {
            ParamValue::Name(n) => Ok(n),
            _ => self.fail(format!("`{key}` must be a name")),
        }
    }

    fn product(&mut self, f: &Family, outcome: Outcome, root: &CertNode) -> Check {
        self.rule(root, RuleId::ProductCriterion)?;
        let branch = self.name(root, "branch")?;
        let kids = &root.children;
        match (branch, outcome) {
            ("torsion_free", Outcome::SelfSmall) => {
                self.ensure(f.is_all_free(), "family has torsion members")?;
                self.ensure(kids.len() == 2, "expected two children")?;
                let rank = free_quotient_rank(f);
                self.at(0, |c| {
                    c.rule(&kids[0], RuleId::TorsionFreeFamily)?;
                    c.ensure(c.param(&kids[0], "rank")? == &ParamValue::Size(rank.clone()), "rank mismatch")
                })?;
                self.at(1, |c| {
                    c.rule(&kids[1], RuleId::FreePowerSelfSmall)?;
                    c.ensure(c.param(&kids[1], "kappa")? == &ParamValue::Size(rank.clone()), "kappa mismatch")
                })
            }
            ("torsion", Outcome::NotSelfSmall) => {
                self.ensure(!f.is_all_free(), "family is torsion-free")?;
                self.ensure(kids.len() == 1, "expected one child")?;
                let node = &kids[0];
                self.at(0, |c| {
                    let entry = c.index(node, "entry", f.entries().len())?;
                    let e = &f.entries()[entry];
                    if node.rule == RuleId::InfiniteFreePart.id() {
                        c.ensure(
                            e.free_rank() > 0 && !e.member_count().is_finite(),
                            "entry has finitely many free members",
                        )
                    } else {
                        c.rule(node, RuleId::InfinitePrimarySupport)?;
                        let ParamValue::Nat(p) = c.param(node, "prime")? else {
                            return c.fail("`prime` must be a natural number");
                        };
                        c.ensure(is_prime(p), "`prime` is not prime")?;
                        c.ensure(
                            c.param(node, "support")? == &ParamValue::Size(Size::Infinite),
                            "support must be infinite",
                        )?;
                        c.ensure(!e.p_support(p).is_finite(), "entry has finite support at this prime")?;
                        c.ensure(!torsion_support(f, p).is_finite(), "recomputed support is finite")
                    }
                })
            }
            ("torsion", Outcome::SelfSmall) => {
                self.ensure(!f.is_all_free(), "family is torsion-free")?;
                let nf = match normal_form(f) {
                    Ok(nf) => nf,
                    Err(_) => return self.fail("family has no finite normal form"),
                };
                let expected = 3 + usize::from(!nf.generic_parts.is_empty());
                self.ensure(kids.len() == expected, "wrong number of children")?;
                self.at(0, |c| {
                    c.rule(&kids[0], RuleId::FiniteFreeQuotient)?;
                    let rank = free_quotient_rank(f);
                    c.ensure(rank.is_finite(), "free quotient has infinite rank")?;
                    c.ensure(c.param(&kids[0], "rank")? == &ParamValue::Size(rank), "rank mismatch")
                })?;
                self.at(1, |c| c.primary_sums(f, &kids[1]))?;
                self.at(2, |c| {
                    c.rule(&kids[2], RuleId::ProductNormalForm)?;
                    c.ensure(kids[2].params == normal_form_node(&nf).params, "normal form mismatch")
                })?;
                if expected == 4 {
                    self.at(3, |c| c.rule(&kids[3], RuleId::FinitePGroupProduct))?;
                }
                Ok(())
            }
            _ => self.fail("branch does not fit the outcome"),
        }
    }

    fn primary_sums(&mut self, f: &Family, node: &CertNode) -> Check {
        self.rule(node, RuleId::FinitePrimarySums)?;
        let mut listed = BTreeSet::new();
        let mut params = node.params.iter();
        while let Some((key, value)) = params.next() {
            let (p, support_key) = match (key.as_str(), value) {
                ("prime", ParamValue::Nat(p)) => {
                    listed.insert(p.clone());
                    (p, "support")
                }
                ("generic_prime", ParamValue::Nat(p)) => {
                    self.ensure(!f.mentioned_primes().contains(p), "generic prime is mentioned in the family")?;
                    (p, "generic_support")
                }
                _ => return self.fail(format!("unexpected parameter `{key}`")),
            };
            self.ensure(is_prime(p), "listed prime is not prime")?;
            let support = torsion_support(f, p);
            self.ensure(support.is_finite(), "support is infinite")?;
            match params.next() {
                Some((k, ParamValue::Size(s))) if k == support_key && *s == support => {}
                _ => return self.fail(format!("support at {p} does not match")),
            }
        }
        self.ensure(f.mentioned_primes().is_subset(&listed), "some mentioned prime is not covered")?;
        self.ensure(node.get("generic_prime").is_some(), "generic prime missing")
    }

    fn sum(&mut self, members: &[Member], outcome: Outcome, root: &CertNode, fb: Option<&FactBase>) -> Check {
        self.rule(root, RuleId::FiniteSumPairs)?;
        let k = members.len();
        self.ensure(k > 0, "empty sum")?;
        self.ensure(root.get("size") == Some(&ParamValue::from(k)), "size mismatch")?;
        self.ensure(root.children.len() == k * k, "pair matrix incomplete")?;
        let fb = match fb {
            Some(fb) => match with_members(fb, members) {
                Ok(fb) => Some(fb),
                Err(e) => return self.fail(format!("{e}")),
            },
            None => None,
        };
        let mut any_no = false;
        let mut any_unknown = false;
        for (n, node) in root.children.iter().enumerate() {
            let (i, j) = (n / k, n % k);
            self.at(n, |c| {
                c.ensure(c.index(node, "source", k)? == i && c.index(node, "target", k)? == j, "pair out of order")?;
                match &members[i] {
                    Member::Fg(_) => c.rule(node, RuleId::FgSmall),
                    Member::Named(name) => {
                        let value = c.catalogue_leaf(node, fb.as_ref())?;
                        c.ensure(c.name(node, "a")? == name, "source name mismatch")?;
                        let b = c.name(node, "b")?;
                        match (&members[j], fb.as_ref()) {
                            (Member::Named(target), _) => c.ensure(b == target, "target name mismatch")?,
                            (Member::Fg(gj), Some(fb)) => {
                                let found = fb.group_id(b).ok().and_then(|id| fb.group(id).as_fg().cloned());
                                c.ensure(found.as_ref() == Some(gj), "target group mismatch")?;
                            }
                            (Member::Fg(_), None) => {}
                        }
                        any_no |= value == Truth::No;
                        any_unknown |= value == Truth::Unknown;
                        Ok(())
                    }
                }
            })?;
        }
        self.ensure(sum_outcome(any_no, any_unknown) == outcome, "outcome does not follow from the pair matrix")
    }

    /// A `catalogue_fact` or `no_fact` leaf; returns the value it claims.
    fn catalogue_leaf(&self, node: &CertNode, fb: Option<&FactBase>) -> Result<Truth, CertificateError> {
        let value = if node.rule == RuleId::NoFact.id() {
            Truth::Unknown
        } else {
            self.rule(node, RuleId::CatalogueFact)?;
            match self.param(node, "value")? {
                ParamValue::Truth(t) if *t != Truth::Unknown => *t,
                _ => return self.fail("`value` must be yes or no"),
            }
        };
        let a = self.name(node, "a")?;
        let b = self.name(node, "b")?;
        if let Some(fb) = fb {
            let (Ok(a), Ok(b)) = (fb.group_id(a), fb.group_id(b)) else {
                return self.fail("unknown catalogue group");
            };
            self.ensure(fb.value(Subject::Small(a, b)) == value, "catalogue value differs")?;
        }
        Ok(value)
    }

    fn power(
        &mut self,
        base: &Member,
        count: &Cardinal,
        kind: PowerKind,
        outcome: Outcome,
        root: &CertNode,
        fb: Option<&FactBase>,
    ) -> Check {
        if root.rule == RuleId::ProductCriterion.id() {
            return self.fail("power of a finitely generated group is certified as a product question");
        }
        self.ensure(root.children.len() == 1, "expected one child")?;
        let child = &root.children[0];
        if root.rule == RuleId::ProductPower.id() {
            self.ensure(kind == PowerKind::Product && !count.is_finite(), "rule needs an infinite product")?;
            let Member::Named(name) = base else { return self.fail("base must be a catalogue group") };
            let x = self.name(root, "power")?;
            if let Some(fb) = fb {
                match infinite_product_power(fb, name) {
                    Ok(expected) if expected == x => {}
                    _ => return self.fail("no such power product in the catalogue"),
                }
            }
            let value = self.at(0, |c| {
                c.ensure(c.name(child, "a")? == x && c.name(child, "b")? == x, "fact is not about the power")?;
                c.catalogue_leaf(child, fb)
            })?;
            let expected = match value {
                Truth::Yes => Outcome::SelfSmall,
                Truth::No => Outcome::NotSelfSmall,
                Truth::Unknown => return self.fail("unknown fact cannot decide"),
            };
            return self.ensure(outcome == expected, "outcome mismatch");
        }
        self.rule(root, RuleId::SumPower)?;
        self.ensure(root.get("count") == Some(&ParamValue::Cardinal(count.clone())), "count mismatch")?;
        self.ensure(root.get("kind") == Some(&ParamValue::from(kind.as_str())), "kind mismatch")?;
        if kind == PowerKind::Product {
            self.ensure(count.is_finite() && matches!(base, Member::Named(_)), "rule needs a finite power")?;
        }
        let base_yes = self.at(0, |c| match base {
            Member::Fg(_) => c.rule(child, RuleId::FgSmall).map(|_| true),
            Member::Named(name) => {
                c.ensure(c.name(child, "a")? == name && c.name(child, "b")? == name, "fact is not about the base")?;
                match c.catalogue_leaf(child, fb)? {
                    Truth::Unknown => c.fail("unknown fact cannot decide"),
                    t => Ok(t == Truth::Yes),
                }
            }
        })?;
        let expected = if base_yes && count.is_finite() { Outcome::SelfSmall } else { Outcome::NotSelfSmall };
        self.ensure(outcome == expected, "outcome mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::{Attributes, NamedKind, Rank, Value};
    use crate::family::prime;

    fn g(free: usize, factors: &[u64]) -> FgGroup {
        FgGroup::from_cyclic_orders(free, factors.iter().map(|&d| BigUint::from(d)))
    }

    fn rep(group: FgGroup, n: u64) -> FamilyEntry {
        FamilyEntry::repeat(group, Cardinal::finite(n).unwrap()).unwrap()
    }

    fn rep_inf(group: FgGroup) -> FamilyEntry {
        FamilyEntry::repeat(group, Cardinal::omega()).unwrap()
    }

    fn all_p(free: usize, exps: &[u32]) -> FamilyEntry {
        FamilyEntry::prime_indexed(free, exps.to_vec(), PrimeSet::all()).unwrap()
    }

    fn fam(entries: Vec<FamilyEntry>) -> Family {
        Family::new(entries).unwrap()
    }

    fn conditions(f: &Family) -> [bool; 3] {
        [evaluate_condition_4(f).unwrap(), evaluate_condition_5(f).unwrap(), evaluate_condition_6(f).unwrap()]
    }

    #[test]
    fn product_examples() {
        let cases = [
            (fam(vec![all_p(0, &[1])]), Outcome::SelfSmall),
            (fam(vec![rep_inf(g(0, &[2]))]), Outcome::NotSelfSmall),
            (
                fam(vec![FamilyEntry::repeat(g(1, &[]), Cardinal::Infinite("kappa".into())).unwrap()]),
                Outcome::SelfSmall,
            ),
            (fam(vec![rep_inf(g(1, &[])), rep(g(0, &[2]), 1)]), Outcome::NotSelfSmall),
            (
                fam(vec![
                    rep(g(2, &[6]), 3),
                    FamilyEntry::prime_indexed(0, vec![2], PrimeSet::all_except([prime(2), prime(3)]).unwrap())
                        .unwrap(),
                ]),
                Outcome::SelfSmall,
            ),
        ];
        for (f, expected) in cases {
            let v = decide_product_self_small(&f);
            assert_eq!(v.outcome, expected, "{f:?}");
            validate_certificate(&v, None).unwrap();
        }
    }

    #[test]
    fn not_self_small_certificates_name_the_witness() {
        let v = decide_product_self_small(&fam(vec![rep_inf(g(0, &[2]))]));
        let node = &v.certificate.root.children[0];
        assert_eq!(node.rule, "infinite_primary_support");
        assert_eq!(node.get("prime"), Some(&ParamValue::Nat(prime(2))));
        let v = decide_product_self_small(&fam(vec![rep_inf(g(1, &[])), rep(g(0, &[2]), 1)]));
        assert_eq!(v.certificate.root.children[0].rule, "infinite_free_part");
    }

    #[test]
    fn condition_examples() {
        assert!(!evaluate_condition_4(&fam(vec![rep(g(0, &[2]), 1), rep_inf(g(1, &[]))])).unwrap());
        assert!(evaluate_condition_4(&fam(vec![all_p(0, &[1])])).unwrap());
        assert!(evaluate_condition_4(&fam(vec![rep(g(0, &[4]), 5)])).unwrap());
        assert!(!evaluate_condition_5(&fam(vec![rep_inf(g(0, &[2]))])).unwrap());
        assert!(evaluate_condition_5(&fam(vec![all_p(0, &[1])])).unwrap());
        assert!(evaluate_condition_5(&fam(vec![rep(g(1, &[]), 2), rep(g(0, &[3]), 1)])).unwrap());
        assert!(!evaluate_condition_6(&fam(vec![rep_inf(g(0, &[2]))])).unwrap());
        assert!(evaluate_condition_6(&fam(vec![all_p(0, &[1]), rep(g(1, &[]), 3)])).unwrap());
        assert!(!evaluate_condition_6(&fam(vec![rep_inf(g(1, &[2]))])).unwrap());
        assert_eq!(evaluate_condition_4(&fam(vec![rep(g(1, &[]), 2)])), Err(DecisionError::AllTorsionFree));
        assert_eq!(evaluate_condition_5(&fam(vec![rep(g(1, &[]), 2)])), Err(DecisionError::AllTorsionFree));
        assert_eq!(evaluate_condition_6(&fam(vec![rep(g(1, &[]), 2)])), Err(DecisionError::AllTorsionFree));
    }

    #[test]
    fn conditions_agree_on_cofinite_mixtures() {
        let fams = [
            fam(vec![all_p(1, &[1])]),
            fam(vec![all_p(0, &[1, 2]), rep_inf(g(0, &[3]))]),
            fam(vec![all_p(0, &[1]), all_p(0, &[2]), rep(g(3, &[10]), 4)]),
            fam(vec![rep_inf(g(1, &[])), all_p(0, &[1])]),
        ];
        for f in &fams {
            let [c4, c5, c6] = conditions(f);
            assert_eq!(c4, c5, "{f:?}");
            assert_eq!(c4, c6, "{f:?}");
            let v = decide_product_self_small(f);
            assert_eq!(c4, v.outcome == Outcome::SelfSmall);
        }
    }

    #[test]
    fn tampering_is_rejected() {
        let v = decide_product_self_small(&fam(vec![rep_inf(g(0, &[2]))]));
        let mut bad = v.clone();
        bad.certificate.root.children[0].params[1].1 = ParamValue::Nat(prime(3));
        assert!(!check_certificate(&bad));
        let mut bad = v.clone();
        bad.certificate.root.children[0].rule = "no_such_rule".into();
        let err = validate_certificate(&bad, None).unwrap_err();
        assert_eq!(err.path, vec![0]);
        let mut bad = v;
        bad.outcome = Outcome::SelfSmall;
        assert!(!check_certificate(&bad));
    }

    fn small_catalogue() -> FactBase {
        let mut fb = FactBase::new();
        let attrs = |r| Attributes { torsion_free_rank: Some(r), is_torsion: None };
        let q = fb.add_group(GroupRef::named("Q", NamedKind::Rationals, attrs(Rank::Finite(1)))).unwrap();
        let qz =
            fb.add_group(GroupRef::named("Q_mod_Z", NamedKind::RationalsModIntegers, attrs(Rank::Finite(0)))).unwrap();
        let z = fb.add_group(GroupRef::fg("Z", FgGroup::free(1))).unwrap();
        let qw = fb.add_group(GroupRef::named("Q_pow_omega", NamedKind::QPowOmega, attrs(Rank::Infinite))).unwrap();
        fb.add_relation(Relation::PowerProductNode { x: qw, base: q, count: Cardinal::omega() }).unwrap();
        fb.add_fact(Subject::HomZero(q, z), Value::Yes, "Hom(Q, Z) = 0").unwrap();
        fb.add_fact(Subject::Small(qz, qz), Value::No, "Q/Z is not self-small").unwrap();
        fb.saturate().unwrap()
    }

    #[test]
    fn sums_over_the_catalogue() {
        let fb = small_catalogue();
        let v = decide_finite_sum_self_small(&[Member::Fg(FgGroup::free(1)), Member::Named("Q".into())], &fb).unwrap();
        assert_eq!(v.outcome, Outcome::SelfSmall);
        validate_certificate(&v, Some(&fb)).unwrap();
        let v = decide_finite_sum_self_small(&[Member::Named("Q_mod_Z".into())], &fb).unwrap();
        assert_eq!(v.outcome, Outcome::NotSelfSmall);
        validate_certificate(&v, Some(&fb)).unwrap();
        let v = decide_finite_sum_self_small(&[Member::Fg(g(0, &[6])), Member::Fg(g(0, &[10]))], &fb).unwrap();
        assert_eq!(v.outcome, Outcome::SelfSmall);
        assert_eq!(v.certificate.root.children.len(), 4);
        let v =
            decide_finite_sum_self_small(&[Member::Named("Q".into()), Member::Named("Q_mod_Z".into())], &fb).unwrap();
        assert_eq!(v.outcome, Outcome::NotSelfSmall);
        assert!(matches!(
            decide_finite_sum_self_small(&[Member::Named("nope".into())], &fb),
            Err(DecisionError::Catalogue(CatalogueError::UnknownGroup(_)))
        ));
    }

    #[test]
    fn powers() {
        let fb = small_catalogue();
        let q = Member::Named("Q".into());
        let three = Cardinal::finite(3).unwrap();
        let cases = [
            (PowerKind::Sum, three.clone(), Outcome::SelfSmall),
            (PowerKind::Sum, Cardinal::omega(), Outcome::NotSelfSmall),
            (PowerKind::Product, Cardinal::omega(), Outcome::NotSelfSmall),
            (PowerKind::Product, three, Outcome::SelfSmall),
        ];
        for (kind, count, expected) in cases {
            let v = decide_repeat_power(&q, &count, kind, &fb).unwrap();
            assert_eq!(v.outcome, expected, "{kind:?} {count}");
            validate_certificate(&v, Some(&fb)).unwrap();
        }
        let v = decide_repeat_power(&Member::Fg(g(0, &[2])), &Cardinal::omega(), PowerKind::Product, &fb).unwrap();
        assert_eq!(v.outcome, Outcome::NotSelfSmall);
        assert!(matches!(v.certificate.question, Question::Product(_)));
        let qw = Member::Named("Q_pow_omega".into());
        let v = decide_repeat_power(&qw, &Cardinal::finite(2).unwrap(), PowerKind::Sum, &fb).unwrap();
        assert_eq!(v.outcome, Outcome::NotSelfSmall);
        let err = decide_repeat_power(&qw, &Cardinal::omega(), PowerKind::Product, &fb);
        assert_eq!(err, Err(DecisionError::MissingPower("Q_pow_omega".into())));
    }
}
