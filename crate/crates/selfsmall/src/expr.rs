//! Text syntax for groups, families, cardinals and prime sets.
//!
//! ```text
//! group    := term ("(+)" term)*
//! term     := atom ("^" nat)?
//! atom     := "0" | "Z" | "Z/" nat | "Q" | "Q/Z" | name | "(" group ")"
//! family   := "family(" entry ("," entry)* ")"
//! entry    := "repeat(" group "," count ")" | "primes(" primeset "," template ")"
//! count    := nat | "omega" | "kappa"
//! primeset := "all" | "all_except(" nat ("," nat)* ")" | "{" nat ("," nat)* "}"
//! template := summand ("(+)" summand)*
//! summand  := "Z" ("^" nat)? | "Z/p" ("^" nat)?
//! ```
//!
//! Whitespace is ignored between tokens.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use selfsmall_core::catalogue::NamedKind;
use selfsmall_core::decision::Member;
use selfsmall_core::family::FamilyError;
use selfsmall_core::group::direct_sum;
use selfsmall_core::{Cardinal, FactBase, Family, FamilyEntry, FgGroup, PrimeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown group `{0}`")]
    UnknownName(String),
    #[error("catalogue group `{0}` cannot be combined with (+) or ^")]
    NamedCombination(String),
    #[error("expected a finitely generated group, found catalogue group `{0}`")]
    NotFinitelyGenerated(String),
    #[error("the zero group is not allowed here")]
    ZeroGroup,
    #[error("number too large")]
    Overflow,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// How names in a group expression are resolved.
#[derive(Debug, Clone, Copy)]
pub enum Names<'a> {
    /// Keep names as written; `Q` and `Q/Z` stay literal.
    Raw,
    /// Names must exist in the fact base; `Q` and `Q/Z` map to the groups
    /// of the matching kind.
    Catalogue(&'a FactBase),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(BigUint),
    Plus,
    Open,
    Close,
    Comma,
    Caret,
    Slash,
    LBrace,
    RBrace,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Nat(n) => format!("`{n}`"),
        Tok::Plus => "`(+)`".into(),
        Tok::Open => "`(`".into(),
        Tok::Close => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |mut j: usize| {
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Nat(digits.parse().expect("digits")), column));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
            continue;
        }
        let tok = match c {
            '(' => {
                let j = skip_ws(i + 1);
                if j < chars.len() && chars[j] == '+' {
                    let k = skip_ws(j + 1);
                    if k < chars.len() && chars[k] == ')' {
                        i = k + 1;
                        out.push((Tok::Plus, column));
                        continue;
                    }
                }
                Tok::Open
            }
            ')' => Tok::Close,
            ',' => Tok::Comma,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => return Err(ExprError::Syntax { column, message: format!("unexpected character `{other}`") }),
        };
        out.push((tok, column));
        i += 1;
    }
    Ok(out)
}

enum Term {
    Fg(FgGroup),
    Named(String),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    names: Names<'a>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, names: Names<'a>) -> Result<Self, ExprError> {
        Ok(Self { toks: lex(text)?, pos: 0, end: text.chars().count() + 1, names })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { column: self.column(), message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ExprError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", describe(t))),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ExprError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(&describe(tok))
        }
    }

    fn eat_ident(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self, word: &str) -> Result<(), ExprError> {
        if self.eat_ident(word) {
            Ok(())
        } else {
            self.unexpected(&format!("`{word}`"))
        }
    }

    fn nat(&mut self) -> Result<BigUint, ExprError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.unexpected("a number"),
        }
    }

    fn small_nat<T: TryFrom<u64>>(&mut self) -> Result<T, ExprError> {
        let n = self.nat()?;
        n.to_u64().and_then(|v| T::try_from(v).ok()).ok_or(ExprError::Overflow)
    }

    fn finish(&self) -> Result<(), ExprError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn group(&mut self) -> Result<Term, ExprError> {
        let mut acc = self.term()?;
        while self.eat(&Tok::Plus) {
            let next = self.term()?;
            acc = match (acc, next) {
                (Term::Fg(a), Term::Fg(b)) => Term::Fg(direct_sum(&a, &b)),
                (Term::Named(n), _) | (_, Term::Named(n)) => return Err(ExprError::NamedCombination(n)),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let atom = self.atom()?;
        if self.eat(&Tok::Caret) {
            let n: usize = self.small_nat()?;
            return match atom {
                Term::Fg(g) => Ok(Term::Fg(g.power(n))),
                Term::Named(name) => Err(ExprError::NamedCombination(name)),
            };
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Term, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) if n.is_zero() => {
                self.pos += 1;
                Ok(Term::Fg(FgGroup::zero()))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let g = self.group()?;
                self.expect(&Tok::Close)?;
                Ok(g)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "Z" if self.eat(&Tok::Slash) => Ok(Term::Fg(FgGroup::cyclic(self.nat()?))),
                    "Z" => Ok(Term::Fg(FgGroup::free(1))),
                    "Q" if self.eat(&Tok::Slash) => {
                        self.expect_ident("Z")?;
                        self.named_kind("Q/Z", &NamedKind::RationalsModIntegers)
                    }
                    "Q" => self.named_kind("Q", &NamedKind::Rationals),
                    _ => self.name(name),
                }
            }
            _ => self.unexpected("a group"),
        }
    }

    fn named_kind(&self, literal: &str, kind: &NamedKind) -> Result<Term, ExprError> {
        match self.names {
            Names::Raw => Ok(Term::Named(literal.into())),
            Names::Catalogue(fb) => match fb.find_kind(kind) {
                Some(id) => Ok(Term::Named(fb.group(id).name.clone())),
                None => Err(ExprError::UnknownName(literal.into())),
            },
        }
    }

    fn name(&self, name: String) -> Result<Term, ExprError> {
        if let Names::Catalogue(fb) = self.names {
            fb.group_id(&name).map_err(|_| ExprError::UnknownName(name.clone()))?;
        }
        Ok(Term::Named(name))
    }

    fn fg_group(&mut self) -> Result<FgGroup, ExprError> {
        match self.group()? {
            Term::Fg(g) => Ok(g),
            Term::Named(n) => Err(ExprError::NotFinitelyGenerated(n)),
        }
    }

    fn count(&mut self) -> Result<Cardinal, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Nat(_)) => {
                let n: u64 = self.small_nat()?;
                Ok(Cardinal::finite(n)?)
            }
            Some(Tok::Ident(label)) if label == "omega" || label == "kappa" => {
                self.pos += 1;
                Ok(Cardinal::Infinite(label))
            }
            _ => self.unexpected("a count (number, `omega` or `kappa`)"),
        }
    }

    fn nat_list(&mut self, close: &Tok) -> Result<Vec<BigUint>, ExprError> {
        let mut out = vec![self.nat()?];
        while self.eat(&Tok::Comma) {
            out.push(self.nat()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn prime_set(&mut self) -> Result<PrimeSet, ExprError> {
        if self.eat_ident("all") {
            return Ok(PrimeSet::all());
        }
        if self.eat_ident("all_except") {
            self.expect(&Tok::Open)?;
            return Ok(PrimeSet::all_except(self.nat_list(&Tok::Close)?)?);
        }
        if self.eat(&Tok::LBrace) {
            return Ok(PrimeSet::explicit(self.nat_list(&Tok::RBrace)?)?);
        }
        self.unexpected("a prime set")
    }

    fn template(&mut self) -> Result<(usize, Vec<u32>), ExprError> {
        let mut free = 0usize;
        let mut exps = Vec::new();
        loop {
            self.expect_ident("Z")?;
            if self.eat(&Tok::Slash) {
                self.expect_ident("p")?;
                let e = if self.eat(&Tok::Caret) { self.small_nat()? } else { 1 };
                exps.push(e);
            } else {
                let r: usize = if self.eat(&Tok::Caret) { self.small_nat()? } else { 1 };
                free = free.checked_add(r).ok_or(ExprError::Overflow)?;
            }
            if !self.eat(&Tok::Plus) {
                return Ok((free, exps));
            }
        }
    }

    fn entry(&mut self) -> Result<FamilyEntry, ExprError> {
        if self.eat_ident("repeat") {
            self.expect(&Tok::Open)?;
            let g = self.fg_group()?;
            self.expect(&Tok::Comma)?;
            let count = self.count()?;
            self.expect(&Tok::Close)?;
            return Ok(FamilyEntry::repeat(g, count)?);
        }
        if self.eat_ident("primes") {
            self.expect(&Tok::Open)?;
            let set = self.prime_set()?;
            self.expect(&Tok::Comma)?;
            let (free, exps) = self.template()?;
            self.expect(&Tok::Close)?;
            return Ok(FamilyEntry::prime_indexed(free, exps, set)?);
        }
        self.unexpected("`repeat` or `primes`")
    }

    fn family(&mut self) -> Result<Family, ExprError> {
        self.expect_ident("family")?;
        self.expect(&Tok::Open)?;
        let mut entries = vec![self.entry()?];
        while self.eat(&Tok::Comma) {
            entries.push(self.entry()?);
        }
        self.expect(&Tok::Close)?;
        Ok(Family::new(entries)?)
    }
}

pub fn parse_group(text: &str, names: Names<'_>) -> Result<Member, ExprError> {
    let mut p = Parser::new(text, names)?;
    let g = p.group()?;
    p.finish()?;
    Ok(match g {
        Term::Fg(g) => Member::Fg(g),
        Term::Named(n) => Member::Named(n),
    })
}

pub fn parse_fg_group(text: &str) -> Result<FgGroup, ExprError> {
    let mut p = Parser::new(text, Names::Raw)?;
    let g = p.fg_group()?;
    p.finish()?;
    Ok(g)
}

pub fn parse_family(text: &str) -> Result<Family, ExprError> {
    let mut p = Parser::new(text, Names::Raw)?;
    let f = p.family()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_count(text: &str) -> Result<Cardinal, ExprError> {
    let mut p = Parser::new(text, Names::Raw)?;
    let c = p.count()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_prime_set(text: &str) -> Result<PrimeSet, ExprError> {
    let mut p = Parser::new(text, Names::Raw)?;
    let s = p.prime_set()?;
    p.finish()?;
    Ok(s)
}

/// A group or a family, told apart by the leading `family(`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Group(Member),
    Family(Family),
}

pub fn parse_expr(text: &str, names: Names<'_>) -> Result<Expr, ExprError> {
    if text.trim_start().starts_with("family") && text.contains('(') {
        parse_family(text).map(Expr::Family)
    } else {
        parse_group(text, names).map(Expr::Group)
    }
}

pub fn print_prime_set(set: &PrimeSet) -> String {
    let list =
        |s: &std::collections::BTreeSet<BigUint>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    match set {
        PrimeSet::Cofinite(ex) if ex.is_empty() => "all".into(),
        PrimeSet::Cofinite(ex) => format!("all_except({})", list(ex)),
        PrimeSet::Explicit(s) => format!("{{{}}}", list(s)),
    }
}

pub fn print_template(free_rank: usize, exponents: &[u32]) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for &e in exponents {
        parts.push(if e == 1 { "Z/p".into() } else { format!("Z/p^{e}") });
    }
    parts.join(" (+) ")
}

pub fn print_entry(entry: &FamilyEntry) -> String {
    match entry {
        FamilyEntry::Repeat { group, count } => format!("repeat({group}, {count})"),
        FamilyEntry::PrimeIndexed { free_rank, exponents, primes } => {
            format!("primes({}, {})", print_prime_set(primes), print_template(*free_rank, exponents))
        }
    }
}

pub fn print_family(f: &Family) -> String {
    let mut out = String::from("family(");
    for (i, e) in f.entries().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}", print_entry(e));
    }
    out.push(')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg(free: usize, orders: &[u64]) -> FgGroup {
        FgGroup::from_cyclic_orders(free, orders.iter().map(|&d| BigUint::from(d)))
    }

    #[test]
    fn groups() {
        assert_eq!(parse_fg_group("Z^2 (+) Z/6").unwrap(), fg(2, &[6]));
        assert_eq!(parse_fg_group("Z/4 (+) Z/2").unwrap(), fg(0, &[2, 4]));
        assert_eq!(parse_fg_group("(Z/2)^3(+)Z").unwrap(), fg(1, &[2, 2, 2]));
        assert_eq!(parse_fg_group("0").unwrap(), FgGroup::zero());
        assert_eq!(parse_fg_group("Z/1").unwrap(), FgGroup::zero());
        assert_eq!(parse_group("Q/Z", Names::Raw).unwrap(), Member::Named("Q/Z".into()));
        assert_eq!(parse_group("prod_Zp", Names::Raw).unwrap(), Member::Named("prod_Zp".into()));
    }

    #[test]
    fn group_errors() {
        assert!(matches!(parse_fg_group("Z/"), Err(ExprError::Syntax { column: 3, .. })));
        assert!(matches!(parse_fg_group("Z (+)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_fg_group("Z $ Z"), Err(ExprError::Syntax { column: 3, .. })));
        assert_eq!(parse_group("Q (+) Z", Names::Raw), Err(ExprError::NamedCombination("Q".into())));
        assert_eq!(parse_fg_group("Q"), Err(ExprError::NotFinitelyGenerated("Q".into())));
    }

    #[test]
    fn families() {
        let f = parse_family("family(primes(all, Z/p))").unwrap();
        assert_eq!(f.entries().len(), 1);
        assert!(
            matches!(&f.entries()[0], FamilyEntry::PrimeIndexed { free_rank: 0, exponents, primes } if exponents == &[1] && *primes == PrimeSet::all())
        );
        let f = parse_family("family(repeat(Z, omega), repeat(Z/2, 1))").unwrap();
        assert_eq!(f.entries().len(), 2);
        assert_eq!(parse_family("family(repeat(Z/1, 2))"), Err(ExprError::Family(FamilyError::ZeroGroup)));
        let f = parse_family("family(primes(all_except(2,3), Z^2 (+) Z/p^2 (+) Z/p), repeat(Z^2 (+) Z/6, 3))").unwrap();
        assert_eq!(print_family(&f), "family(primes(all_except(2, 3), Z^2 (+) Z/p (+) Z/p^2), repeat(Z^2 (+) Z/6, 3))");
        assert_eq!(parse_family(&print_family(&f)).unwrap(), f);
    }

    #[test]
    fn family_errors() {
        assert_eq!(
            parse_family("family(primes({4}, Z/p))"),
            Err(ExprError::Family(FamilyError::NotPrime(BigUint::from(4u32))))
        );
        assert_eq!(parse_family("family(repeat(Z, 0))"), Err(ExprError::Family(FamilyError::ZeroCount)));
        assert!(matches!(parse_family("family()"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_family("family(repeat(Z, lots))"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn printing_round_trips() {
        for text in ["Z^2 (+) Z/6", "Z (+) (Z/2)^2 (+) Z/4", "0", "Z/12"] {
            let g = parse_fg_group(text).unwrap();
            assert_eq!(g.to_string(), text);
            assert_eq!(parse_fg_group(&g.to_string()).unwrap(), g);
        }
        for text in ["all", "all_except(2, 5)", "{3, 7}"] {
            assert_eq!(print_prime_set(&parse_prime_set(text).unwrap()), text);
        }
    }
}
