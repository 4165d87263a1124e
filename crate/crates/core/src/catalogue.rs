//! A finite universe of named abelian groups with structural relations and
//! three-valued smallness facts, saturated under the closure rules for
//! relative smallness.
//!
//! Every rule is grounded over the universe into Horn clauses whose premises
//! and conclusion are literals `subject = yes|no`. Contrapositive directions
//! are separate clauses flagged as such. Saturation is unit propagation to
//! the least fixpoint; absence of a literal means `Unknown`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::family::Cardinal;
use crate::group::{hom_is_zero, FgGroup};
use crate::rules::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogueError {
    #[error("group `{0}` is declared twice")]
    DuplicateName(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("group id {0} does not belong to this fact base")]
    DanglingId(usize),
    #[error("attribute `{attribute}` of `{name}` contradicts its finitely generated structure")]
    AttributeMismatch { name: String, attribute: &'static str },
    #[error("invalid relation: {0}")]
    InvalidRelation(&'static str),
    #[error("base fact needs a nonempty anchor")]
    EmptyAnchor,
    #[error("hom_zero facts can only be declared as yes")]
    NegativeHomZero,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SaturationError {
    #[error("contradiction on {description}: held {held} but derived {derived}")]
    Contradiction { description: String, subject: Subject, held: Box<Fact>, derived: Box<Fact> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("no clause of rule `{rule}` produces {description}")]
    NoSuchClause { rule: RuleId, description: String },
    #[error("premise {description} of a replayed step does not hold")]
    PremiseMissing { description: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(usize);

impl GroupId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NamedKind {
    Rationals,
    RationalsModIntegers,
    /// `prod_p Z/p`
    ProdZp,
    /// `(+)_p Z/p`
    SumZp,
    /// `Z^kappa`
    ZPow(Cardinal),
    /// `Q^omega`
    QPowOmega,
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Fg(FgGroup),
    Named(NamedKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Attributes {
    pub torsion_free_rank: Option<Rank>,
    pub is_torsion: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRef {
    pub name: String,
    pub kind: GroupKind,
    pub attributes: Attributes,
}

impl GroupRef {
    pub fn named(name: impl Into<String>, kind: NamedKind, attributes: Attributes) -> Self {
        Self { name: name.into(), kind: GroupKind::Named(kind), attributes }
    }

    pub fn fg(name: impl Into<String>, group: FgGroup) -> Self {
        Self { name: name.into(), kind: GroupKind::Fg(group), attributes: Attributes::default() }
    }

    pub fn as_fg(&self) -> Option<&FgGroup> {
        match &self.kind {
            GroupKind::Fg(g) => Some(g),
            GroupKind::Named(_) => None,
        }
    }
}

/// Structural facts about the named groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `x` is isomorphic to a quotient of `a`.
    QuotientOf { x: GroupId, a: GroupId },
    /// `c` embeds into a power `b^I`.
    EmbedsInPower { c: GroupId, b: GroupId },
    /// `b <= c` with `c/b` isomorphic to `q`.
    Extension { c: GroupId, b: GroupId, q: GroupId },
    /// `s` is the direct sum of the (finitely many) members.
    SumNode { s: GroupId, members: Vec<GroupId> },
    /// `m = prod M` and `sum = (+)M` for one family `M`.
    ProductNode { m: GroupId, sum: GroupId },
    /// `x = base^(count)`.
    PowerSumNode { x: GroupId, base: GroupId, count: Cardinal },
    /// `x = base^count` (unrestricted product).
    PowerProductNode { x: GroupId, base: GroupId, count: Cardinal },
}

impl Relation {
    fn ids(&self) -> Vec<GroupId> {
        match self {
            Relation::QuotientOf { x, a } => vec![*x, *a],
            Relation::EmbedsInPower { c, b } => vec![*c, *b],
            Relation::Extension { c, b, q } => vec![*c, *b, *q],
            Relation::SumNode { s, members } => core::iter::once(*s).chain(members.iter().copied()).collect(),
            Relation::ProductNode { m, sum } => vec![*m, *sum],
            Relation::PowerSumNode { x, base, .. } | Relation::PowerProductNode { x, base, .. } => vec![*x, *base],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    /// `A` is `B`-small; self-smallness is `Small(A, A)`.
    Small(GroupId, GroupId),
    HomZero(GroupId, GroupId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubjectKind {
    Small,
    SelfSmall,
    HomZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Yes,
    No,
}

impl Value {
    pub fn negate(self) -> Value {
        match self {
            Value::Yes => Value::No,
            Value::No => Value::Yes,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value::Yes => "yes",
            Value::No => "no",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl From<Option<Value>> for Truth {
    fn from(v: Option<Value>) -> Self {
        match v {
            Some(Value::Yes) => Truth::Yes,
            Some(Value::No) => Truth::No,
            None => Truth::Unknown,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Yes => "yes",
            Truth::No => "no",
            Truth::Unknown => "unknown",
        })
    }
}

/// One rule application: `premises => conclusion`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: RuleId,
    pub contrapositive: bool,
    /// Index of the relation the clause was grounded on, if any.
    pub relation: Option<usize>,
    pub premises: Vec<(Subject, Value)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    Base { anchor: String },
    Derived(Derivation),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub value: Value,
    pub provenance: Provenance,
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.provenance {
            Provenance::Base { anchor } => write!(f, "{} (base: {anchor})", self.value),
            Provenance::Derived(d) => write!(f, "{} (by {})", self.value, d.rule),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseFact {
    pub subject: Subject,
    pub value: Value,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Clause {
    derivation: Derivation,
    conclusion: (Subject, Value),
}

/// Derivation tree of an answered query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub subject: Subject,
    pub value: Value,
    pub step: TraceStep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    Base { anchor: String },
    Rule { rule: RuleId, contrapositive: bool, relation: Option<usize>, premises: Vec<Trace> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub subject: Subject,
    pub value: Truth,
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactBase {
    groups: Vec<GroupRef>,
    by_name: BTreeMap<String, GroupId>,
    relations: Vec<Relation>,
    base: Vec<BaseFact>,
    facts: BTreeMap<Subject, Fact>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_group(&mut self, mut group: GroupRef) -> Result<GroupId, CatalogueError> {
        if self.by_name.contains_key(&group.name) {
            return Err(CatalogueError::DuplicateName(group.name));
        }
        if let GroupKind::Fg(g) = &group.kind {
            let rank = Rank::Finite(g.free_rank() as u64);
            match group.attributes.torsion_free_rank {
                Some(r) if r != rank => {
                    return Err(CatalogueError::AttributeMismatch { name: group.name, attribute: "torsion_free_rank" })
                }
                _ => group.attributes.torsion_free_rank = Some(rank),
            }
            match group.attributes.is_torsion {
                Some(t) if t != g.is_finite() => {
                    return Err(CatalogueError::AttributeMismatch { name: group.name, attribute: "is_torsion" })
                }
                _ => group.attributes.is_torsion = Some(g.is_finite()),
            }
        }
        let id = GroupId(self.groups.len());
        self.by_name.insert(group.name.clone(), id);
        self.groups.push(group);
        Ok(id)
    }

    pub fn add_relation(&mut self, relation: Relation) -> Result<(), CatalogueError> {
        for id in relation.ids() {
            self.check_id(id)?;
        }
        match &relation {
            Relation::SumNode { members, .. } if members.is_empty() => {
                return Err(CatalogueError::InvalidRelation("a sum needs at least one member"))
            }
            Relation::SumNode { s, members } if members.contains(s) => {
                return Err(CatalogueError::InvalidRelation("a sum cannot list itself as a member"))
            }
            _ => {}
        }
        self.relations.push(relation);
        Ok(())
    }

    pub fn add_fact(
        &mut self,
        subject: Subject,
        value: Value,
        anchor: impl Into<String>,
    ) -> Result<(), CatalogueError> {
        let anchor = anchor.into();
        if anchor.trim().is_empty() {
            return Err(CatalogueError::EmptyAnchor);
        }
        let (Subject::Small(a, b) | Subject::HomZero(a, b)) = subject;
        self.check_id(a)?;
        self.check_id(b)?;
        if matches!(subject, Subject::HomZero(..)) && value == Value::No {
            return Err(CatalogueError::NegativeHomZero);
        }
        self.base.push(BaseFact { subject, value, anchor });
        Ok(())
    }

    fn check_id(&self, id: GroupId) -> Result<(), CatalogueError> {
        if id.0 < self.groups.len() {
            Ok(())
        } else {
            Err(CatalogueError::DanglingId(id.0))
        }
    }

    pub fn group_id(&self, name: &str) -> Result<GroupId, CatalogueError> {
        self.by_name.get(name).copied().ok_or_else(|| CatalogueError::UnknownGroup(name.into()))
    }

    pub fn group(&self, id: GroupId) -> &GroupRef {
        &self.groups[id.0]
    }

    pub fn groups(&self) -> impl Iterator<Item = (GroupId, &GroupRef)> {
        self.groups.iter().enumerate().map(|(i, g)| (GroupId(i), g))
    }

    /// First group of the given named kind.
    pub fn find_kind(&self, kind: &NamedKind) -> Option<GroupId> {
        self.groups().find(|(_, g)| g.kind == GroupKind::Named(kind.clone())).map(|(id, _)| id)
    }

    /// A catalogue group with exactly this finitely generated structure.
    pub fn find_fg(&self, group: &FgGroup) -> Option<GroupId> {
        self.groups().find(|(_, g)| g.as_fg() == Some(group)).map(|(id, _)| id)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn base_facts(&self) -> &[BaseFact] {
        &self.base
    }

    pub fn facts(&self) -> &BTreeMap<Subject, Fact> {
        &self.facts
    }

    pub fn value(&self, subject: Subject) -> Truth {
        self.facts.get(&subject).map(|f| f.value).into()
    }

    pub fn subject(&self, kind: SubjectKind, a: &str, b: Option<&str>) -> Result<Subject, CatalogueError> {
        let a = self.group_id(a)?;
        let second = |b: Option<&str>| -> Result<GroupId, CatalogueError> {
            match b {
                Some(name) => self.group_id(name),
                None => Err(CatalogueError::UnknownGroup(String::new())),
            }
        };
        Ok(match kind {
            SubjectKind::SelfSmall => Subject::Small(a, a),
            SubjectKind::Small => Subject::Small(a, second(b)?),
            SubjectKind::HomZero => Subject::HomZero(a, second(b)?),
        })
    }

    pub fn describe(&self, subject: Subject) -> String {
        match subject {
            Subject::Small(a, b) if a == b => format!("selfsmall({})", self.group(a).name),
            Subject::Small(a, b) => format!("small({}, {})", self.group(a).name, self.group(b).name),
            Subject::HomZero(a, b) => format!("homzero({}, {})", self.group(a).name, self.group(b).name),
        }
    }

    /// Least fixpoint of all rules in the default clause order.
    pub fn saturate(&self) -> Result<FactBase, SaturationError> {
        let clauses = self.clauses();
        self.run(clauses)
    }

    /// Same fixpoint, with the rule applications scheduled in random order.
    pub fn saturate_shuffled<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FactBase, SaturationError> {
        let mut clauses = self.clauses();
        clauses.shuffle(rng);
        self.run(clauses)
    }

    fn run(&self, clauses: Vec<Clause>) -> Result<FactBase, SaturationError> {
        let mut out = self.clone();
        for base in &self.base {
            let fact = Fact { value: base.value, provenance: Provenance::Base { anchor: base.anchor.clone() } };
            out.insert(base.subject, fact)?;
        }
        loop {
            let mut changed = false;
            for clause in &clauses {
                let (subject, value) = clause.conclusion;
                if out.facts.get(&subject).is_some_and(|f| f.value == value) {
                    continue;
                }
                let fires =
                    clause.derivation.premises.iter().all(|(s, v)| out.facts.get(s).is_some_and(|f| f.value == *v));
                if fires {
                    let fact = Fact { value, provenance: Provenance::Derived(clause.derivation.clone()) };
                    out.insert(subject, fact)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(out);
            }
        }
    }

    fn insert(&mut self, subject: Subject, fact: Fact) -> Result<(), SaturationError> {
        match self.facts.get(&subject) {
            Some(held) if held.value != fact.value => Err(SaturationError::Contradiction {
                description: self.describe(subject),
                subject,
                held: Box::new(held.clone()),
                derived: Box::new(fact),
            }),
            Some(_) => Ok(()),
            None => {
                self.facts.insert(subject, fact);
                Ok(())
            }
        }
    }

    pub fn query(&self, subject: Subject) -> Answer {
        Answer { subject, value: self.value(subject), trace: self.trace(subject) }
    }

    pub fn query_named(&self, kind: SubjectKind, a: &str, b: Option<&str>) -> Result<Answer, CatalogueError> {
        Ok(self.query(self.subject(kind, a, b)?))
    }

    pub fn trace(&self, subject: Subject) -> Option<Trace> {
        let fact = self.facts.get(&subject)?;
        let step = match &fact.provenance {
            Provenance::Base { anchor } => TraceStep::Base { anchor: anchor.clone() },
            Provenance::Derived(d) => TraceStep::Rule {
                rule: d.rule,
                contrapositive: d.contrapositive,
                relation: d.relation,
                premises: d.premises.iter().filter_map(|(s, _)| self.trace(*s)).collect(),
            },
        };
        Some(Trace { subject, value: fact.value, step })
    }

    /// Re-grounds the rule of every derived fact and checks that the stored
    /// step is one of its clauses with all premises holding.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let clauses = self.clauses();
        for (subject, fact) in &self.facts {
            let Provenance::Derived(d) = &fact.provenance else { continue };
            let candidate = Clause { derivation: d.clone(), conclusion: (*subject, fact.value) };
            if !clauses.contains(&candidate) {
                return Err(ReplayError::NoSuchClause {
                    rule: d.rule,
                    description: format!("{} = {}", self.describe(*subject), fact.value),
                });
            }
            for (s, v) in &d.premises {
                if self.facts.get(s).map(|f| f.value) != Some(*v) {
                    return Err(ReplayError::PremiseMissing { description: format!("{} = {}", self.describe(*s), v) });
                }
            }
        }
        Ok(())
    }

    /// Ground instances of every rule over the current universe.
    fn clauses(&self) -> Vec<Clause> {
        let mut out = ClauseSink::default();
        let all: Vec<GroupId> = (0..self.groups.len()).map(GroupId).collect();
        use Subject::{HomZero, Small};
        use Value::{No, Yes};

        for &a in &all {
            let Some(ga) = self.group(a).as_fg() else { continue };
            for &x in &all {
                out.fact(RuleId::FgSmall, None, (Small(a, x), Yes));
                if let Some(gx) = self.group(x).as_fg() {
                    let value = if hom_is_zero(ga, gx) { Yes } else { No };
                    out.fact(RuleId::FgHom, None, (HomZero(a, x), value));
                }
            }
        }
        for &a in &all {
            for &b in &all {
                out.implication(RuleId::HomZeroSmall, None, &[(HomZero(a, b), Yes)], (Small(a, b), Yes));
            }
        }
        for &d in &all {
            let divisible = matches!(
                self.group(d).kind,
                GroupKind::Named(NamedKind::Rationals | NamedKind::RationalsModIntegers | NamedKind::QPowOmega)
            );
            if divisible {
                for &b in all.iter().filter(|&&b| self.group(b).as_fg().is_some()) {
                    out.fact(RuleId::DivisibleFg, None, (HomZero(d, b), Yes));
                }
            }
        }
        for q in all.iter().copied().filter(|&q| self.group(q).kind == GroupKind::Named(NamedKind::Rationals)) {
            for &x in &all {
                match self.group(x).attributes.torsion_free_rank {
                    Some(Rank::Finite(_)) => out.fact(RuleId::RationalRank, None, (Small(x, q), Yes)),
                    Some(Rank::Infinite) => out.fact(RuleId::RationalRank, None, (Small(x, q), No)),
                    None => {}
                }
            }
        }

        for (index, relation) in self.relations.iter().enumerate() {
            let r = Some(index);
            match relation {
                Relation::QuotientOf { x, a } => quotient(&mut out, &all, r, *x, *a),
                Relation::EmbedsInPower { c, b } => embeds(&mut out, &all, r, *c, *b),
                Relation::Extension { c, b, q } => {
                    quotient(&mut out, &all, r, *q, *c);
                    embeds(&mut out, &all, r, *b, *c);
                    for &x in &all {
                        out.implication(
                            RuleId::ExtensionSource,
                            r,
                            &[(Small(*b, x), Yes), (Small(*q, x), Yes)],
                            (Small(*c, x), Yes),
                        );
                        out.implication(
                            RuleId::ExtensionTarget,
                            r,
                            &[(Small(x, *b), Yes), (Small(x, *q), Yes)],
                            (Small(x, *c), Yes),
                        );
                    }
                }
                Relation::SumNode { s, members } => {
                    for &m in members {
                        quotient(&mut out, &all, r, m, *s);
                        embeds(&mut out, &all, r, m, *s);
                    }
                    for &x in &all {
                        let from: Vec<_> = members.iter().map(|&m| (Small(m, x), Yes)).collect();
                        out.implication(RuleId::FiniteSumSource, r, &from, (Small(*s, x), Yes));
                        let into: Vec<_> = members.iter().map(|&m| (Small(x, m), Yes)).collect();
                        out.implication(RuleId::FiniteSumTarget, r, &into, (Small(x, *s), Yes));
                    }
                }
                Relation::ProductNode { m, sum } => {
                    // the sum embeds in the product, and the product in sum^M
                    embeds(&mut out, &all, r, *sum, *m);
                    embeds(&mut out, &all, r, *m, *sum);
                    out.equivalence(RuleId::ProductSumCriterion, r, (Small(*m, *m), Yes), (Small(*m, *sum), Yes));
                }
                Relation::PowerSumNode { x, base, count } => {
                    quotient(&mut out, &all, r, *base, *x);
                    embeds(&mut out, &all, r, *base, *x);
                    for &a in &all {
                        out.equivalence(RuleId::PowerTarget, r, (Small(a, *base), Yes), (Small(a, *x), Yes));
                    }
                    if count.is_finite() {
                        out.equivalence(RuleId::SumPower, r, (Small(*base, *base), Yes), (Small(*x, *x), Yes));
                    } else {
                        out.fact(RuleId::SumPower, r, (Small(*x, *x), No));
                    }
                }
                Relation::PowerProductNode { x, base, .. } => {
                    quotient(&mut out, &all, r, *base, *x);
                    embeds(&mut out, &all, r, *base, *x);
                    embeds(&mut out, &all, r, *x, *base);
                    out.equivalence(RuleId::ProductPower, r, (Small(*x, *x), Yes), (Small(*x, *base), Yes));
                }
            }
        }

        // images of a self-small A inside powers of A: x both a quotient of A
        // and embedded in A^I
        for (qi, qr) in self.relations.iter().enumerate() {
            let Relation::QuotientOf { x, a } = qr else { continue };
            let embedded = self.relations.contains(&Relation::EmbedsInPower { c: *x, b: *a });
            if embedded {
                out.implication(RuleId::SelfSmallImage, Some(qi), &[(Small(*a, *a), Yes)], (Small(*x, *x), Yes));
            }
        }
        out.clauses
    }
}

fn quotient(out: &mut ClauseSink, all: &[GroupId], r: Option<usize>, x: GroupId, a: GroupId) {
    for &b in all {
        out.implication(
            RuleId::QuotientSmall,
            r,
            &[(Subject::Small(a, b), Value::Yes)],
            (Subject::Small(x, b), Value::Yes),
        );
    }
}

fn embeds(out: &mut ClauseSink, all: &[GroupId], r: Option<usize>, c: GroupId, b: GroupId) {
    for &a in all {
        out.implication(
            RuleId::EmbeddedTarget,
            r,
            &[(Subject::Small(a, b), Value::Yes)],
            (Subject::Small(a, c), Value::Yes),
        );
    }
}

#[derive(Default)]
struct ClauseSink {
    clauses: Vec<Clause>,
}

impl ClauseSink {
    fn push(
        &mut self,
        rule: RuleId,
        contrapositive: bool,
        relation: Option<usize>,
        premises: Vec<(Subject, Value)>,
        conclusion: (Subject, Value),
    ) {
        self.clauses.push(Clause { derivation: Derivation { rule, contrapositive, relation, premises }, conclusion });
    }

    fn fact(&mut self, rule: RuleId, relation: Option<usize>, conclusion: (Subject, Value)) {
        self.push(rule, false, relation, Vec::new(), conclusion);
    }

    /// `p1 & ... & pn => c` plus every contrapositive
    /// `!c & (all premises but pi) => !pi`.
    fn implication(
        &mut self,
        rule: RuleId,
        relation: Option<usize>,
        premises: &[(Subject, Value)],
        conclusion: (Subject, Value),
    ) {
        self.push(rule, false, relation, premises.to_vec(), conclusion);
        for (i, &(subject, value)) in premises.iter().enumerate() {
            let mut rest = vec![(conclusion.0, conclusion.1.negate())];
            rest.extend(premises.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p));
            self.push(rule, true, relation, rest, (subject, value.negate()));
        }
    }

    fn equivalence(&mut self, rule: RuleId, relation: Option<usize>, a: (Subject, Value), b: (Subject, Value)) {
        self.implication(rule, relation, &[a], b);
        self.implication(rule, relation, &[b], a);
    }
}
