//! Line-oriented fact files.
//!
//! ```text
//! group <name> [kind=<kind>] [fg="<group>"] [count=<count>] [tfr=<n>|infinite] [torsion=yes|no]
//! rel quotient <x> <a>
//! rel embeds_power <c> <b>
//! rel extension <c> <b> <q>
//! rel sum <s> = <m1> + <m2> [+ ...]
//! rel product <m> <sum>
//! rel power_sum <x> = <base> ^ (<count>)
//! rel power_product <x> = <base> ^ <count>
//! fact small <a> <b> = yes|no anchor="..."
//! fact homzero <a> <b> anchor="..."
//! fact selfsmall <a> = yes|no anchor="..."
//! ```
//!
//! `#` starts a comment outside quotes. Kinds: `rationals`,
//! `rationals_mod_integers`, `prod_zp`, `sum_zp`, `z_pow` (with `count=`),
//! `q_pow_omega`, `opaque` (the default), or `fg` (implied by `fg=`).

use selfsmall_core::catalogue::{Attributes, CatalogueError, GroupId, NamedKind, Rank, Value};
use selfsmall_core::{Cardinal, FactBase, GroupRef, Relation, Subject};

use crate::expr::{parse_count, parse_fg_group, ExprError};

pub const DEFAULT_FACTS: &str = include_str!("../data/default.facts");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct FactsError {
    pub line: usize,
    pub column: usize,
    pub kind: FactsErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactsErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Sym(char),
}

struct Line {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    number: usize,
    width: usize,
}

impl Line {
    fn lex(text: &str, number: usize) -> Result<Self, FactsError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        let err =
            |column: usize, msg: &str| FactsError { line: number, column, kind: FactsErrorKind::Syntax(msg.into()) };
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c == '"' {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(column, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(err(i + 1, "invalid escape")),
                            }
                            i += 2;
                            continue;
                        }
                        Some(&ch) => s.push(ch),
                    }
                    i += 1;
                }
                i += 1;
                toks.push((Tok::Str(s), column));
            } else if "=+^()".contains(c) {
                toks.push((Tok::Sym(c), column));
                i += 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"=+^()\"#".contains(chars[i]) {
                    i += 1;
                }
                toks.push((Tok::Word(chars[start..i].iter().collect()), column));
            }
        }
        Ok(Self { toks, pos: 0, number, width: chars.len() })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.width + 1, |(_, c)| *c)
    }

    fn error<T>(&self, kind: impl Into<FactsErrorKind>) -> Result<T, FactsError> {
        Err(FactsError { line: self.number, column: self.column(), kind: kind.into() })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, FactsError> {
        self.error(FactsErrorKind::Syntax(msg.into()))
    }

    fn word(&mut self, what: &str) -> Result<String, FactsError> {
        match self.toks.get(self.pos) {
            Some((Tok::Word(w), _)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), FactsError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.toks.get(self.pos), Some((Tok::Sym(s), _)) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn finish(&self) -> Result<(), FactsError> {
        if self.done() {
            Ok(())
        } else {
            self.syntax("unexpected trailing input")
        }
    }

    /// `key=value` with a bare or quoted value.
    fn attribute(&mut self) -> Result<(String, String, usize), FactsError> {
        let column = self.column();
        let key = self.word("an attribute")?;
        self.sym('=')?;
        let value = match self.toks.get(self.pos) {
            Some((Tok::Word(w) | Tok::Str(w), _)) => w.clone(),
            _ => return self.syntax("expected an attribute value"),
        };
        self.pos += 1;
        Ok((key, value, column))
    }

    fn group(&mut self, fb: &FactBase) -> Result<GroupId, FactsError> {
        let column = self.column();
        let name = self.word("a group name")?;
        fb.group_id(&name).map_err(|e| FactsError { line: self.number, column, kind: e.into() })
    }

    fn value(&mut self) -> Result<Value, FactsError> {
        self.sym('=')?;
        match self.word("`yes` or `no`")?.as_str() {
            "yes" => Ok(Value::Yes),
            "no" => Ok(Value::No),
            _ => {
                self.pos -= 1;
                self.syntax("expected `yes` or `no`")
            }
        }
    }
}

pub fn load_facts(source: &str) -> Result<FactBase, FactsError> {
    let mut fb = FactBase::new();
    extend_facts(&mut fb, source)?;
    Ok(fb)
}

/// Adds the directives of `source` to an existing fact base.
pub fn extend_facts(fb: &mut FactBase, source: &str) -> Result<(), FactsError> {
    for (i, text) in source.lines().enumerate() {
        let mut line = Line::lex(text, i + 1)?;
        if line.done() {
            continue;
        }
        match line.word("a directive")?.as_str() {
            "group" => group_directive(fb, &mut line)?,
            "rel" => relation_directive(fb, &mut line)?,
            "fact" => fact_directive(fb, &mut line)?,
            _ => {
                line.pos -= 1;
                return line.syntax("expected `group`, `rel` or `fact`");
            }
        }
    }
    Ok(())
}

pub fn default_facts() -> FactBase {
    load_facts(DEFAULT_FACTS).expect("shipped fact file is valid")
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn group_directive(fb: &mut FactBase, line: &mut Line) -> Result<(), FactsError> {
    let name_column = line.column();
    let name = line.word("a group name")?;
    if !valid_name(&name) {
        line.pos -= 1;
        return line.syntax(format!("invalid group name `{name}`"));
    }
    let mut kind = None;
    let mut fg = None;
    let mut count = None;
    let mut attributes = Attributes::default();
    while !line.done() {
        let (key, value, column) = line.attribute()?;
        let at = |kind: FactsErrorKind| FactsError { line: line.number, column, kind };
        match key.as_str() {
            "kind" => kind = Some(value),
            "fg" => fg = Some(parse_fg_group(&value).map_err(|e| at(e.into()))?),
            "count" => count = Some(parse_count(&value).map_err(|e| at(e.into()))?),
            "tfr" => {
                attributes.torsion_free_rank = Some(match value.as_str() {
                    "infinite" => Rank::Infinite,
                    n => {
                        Rank::Finite(n.parse().map_err(|_| at(FactsErrorKind::Syntax("bad torsion-free rank".into())))?)
                    }
                })
            }
            "torsion" => {
                attributes.is_torsion = Some(match value.as_str() {
                    "yes" => true,
                    "no" => false,
                    _ => return Err(at(FactsErrorKind::Syntax("expected `yes` or `no`".into()))),
                })
            }
            _ => return Err(at(FactsErrorKind::Syntax(format!("unknown attribute `{key}`")))),
        }
    }
    let syntax =
        |msg: &str| FactsError { line: line.number, column: name_column, kind: FactsErrorKind::Syntax(msg.into()) };
    let group = match (kind.as_deref(), fg) {
        (None | Some("fg"), Some(g)) => GroupRef { name, kind: selfsmall_core::GroupKind::Fg(g), attributes },
        (Some("fg"), None) => return Err(syntax("kind=fg needs fg=\"...\"")),
        (Some(_), Some(_)) => return Err(syntax("fg= is only allowed for kind=fg")),
        (k, None) => {
            let named = match k.unwrap_or("opaque") {
                "rationals" => NamedKind::Rationals,
                "rationals_mod_integers" => NamedKind::RationalsModIntegers,
                "prod_zp" => NamedKind::ProdZp,
                "sum_zp" => NamedKind::SumZp,
                "q_pow_omega" => NamedKind::QPowOmega,
                "opaque" => NamedKind::Opaque,
                "z_pow" => NamedKind::ZPow(count.clone().ok_or_else(|| syntax("kind=z_pow needs count="))?),
                other => return Err(syntax(&format!("unknown kind `{other}`"))),
            };
            GroupRef::named(name, named, attributes)
        }
    };
    fb.add_group(group).map_err(|e| FactsError { line: line.number, column: name_column, kind: e.into() })?;
    Ok(())
}

fn relation_directive(fb: &mut FactBase, line: &mut Line) -> Result<(), FactsError> {
    let column = line.column();
    let relation = match line.word("a relation kind")?.as_str() {
        "quotient" => Relation::QuotientOf { x: line.group(fb)?, a: line.group(fb)? },
        "embeds_power" => Relation::EmbedsInPower { c: line.group(fb)?, b: line.group(fb)? },
        "extension" => Relation::Extension { c: line.group(fb)?, b: line.group(fb)?, q: line.group(fb)? },
        "product" => Relation::ProductNode { m: line.group(fb)?, sum: line.group(fb)? },
        "sum" => {
            let s = line.group(fb)?;
            line.sym('=')?;
            let mut members = vec![line.group(fb)?];
            while line.eat_sym('+') {
                members.push(line.group(fb)?);
            }
            Relation::SumNode { s, members }
        }
        "power_sum" => {
            let x = line.group(fb)?;
            line.sym('=')?;
            let base = line.group(fb)?;
            line.sym('^')?;
            line.sym('(')?;
            let count = count_word(line)?;
            line.sym(')')?;
            Relation::PowerSumNode { x, base, count }
        }
        "power_product" => {
            let x = line.group(fb)?;
            line.sym('=')?;
            let base = line.group(fb)?;
            line.sym('^')?;
            let count = count_word(line)?;
            Relation::PowerProductNode { x, base, count }
        }
        other => {
            line.pos -= 1;
            return line.syntax(format!("unknown relation `{other}`"));
        }
    };
    line.finish()?;
    fb.add_relation(relation).map_err(|e| FactsError { line: line.number, column, kind: e.into() })
}

fn count_word(line: &mut Line) -> Result<Cardinal, FactsError> {
    let column = line.column();
    let w = line.word("a count")?;
    parse_count(&w).map_err(|e| FactsError { line: line.number, column, kind: e.into() })
}

fn fact_directive(fb: &mut FactBase, line: &mut Line) -> Result<(), FactsError> {
    let column = line.column();
    let (subject, value) = match line.word("a fact kind")?.as_str() {
        "small" => {
            let (a, b) = (line.group(fb)?, line.group(fb)?);
            (Subject::Small(a, b), line.value()?)
        }
        "selfsmall" => {
            let a = line.group(fb)?;
            (Subject::Small(a, a), line.value()?)
        }
        "homzero" => {
            let (a, b) = (line.group(fb)?, line.group(fb)?);
            (Subject::HomZero(a, b), Value::Yes)
        }
        other => {
            line.pos -= 1;
            return line.syntax(format!("unknown fact `{other}`"));
        }
    };
    let (key, anchor, _) = line.attribute()?;
    if key != "anchor" {
        return line.syntax("expected anchor=\"...\"");
    }
    line.finish()?;
    fb.add_fact(subject, value, anchor).map_err(|e| FactsError { line: line.number, column, kind: e.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfsmall_core::Truth;

    #[test]
    fn shipped_file_loads_and_saturates() {
        let fb = default_facts();
        assert!(fb.base_facts().len() >= 12);
        let sat = fb.saturate().unwrap();
        sat.replay().unwrap();
        let p = sat.group_id("prod_Zp").unwrap();
        assert_eq!(sat.value(Subject::Small(p, p)), Truth::Yes);
    }

    #[test]
    fn empty_file() {
        let fb = load_facts("# nothing here\n\n").unwrap();
        assert_eq!(fb.groups().count(), 0);
        assert!(fb.base_facts().is_empty());
    }

    #[test]
    fn dangling_reference() {
        let err = load_facts("group A\nrel quotient A B\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 16));
        assert_eq!(err.kind, FactsErrorKind::Catalogue(CatalogueError::UnknownGroup("B".into())));
    }

    #[test]
    fn duplicate_name() {
        let err = load_facts("group A\ngroup A kind=opaque\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, FactsErrorKind::Catalogue(CatalogueError::DuplicateName("A".into())));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = load_facts("group A\nfact selfsmall A = maybe anchor=\"x\"\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 20));
        let err = load_facts("group A\nfact selfsmall A = yes anchor=\"\"\n").unwrap_err();
        assert_eq!(err.kind, FactsErrorKind::Catalogue(CatalogueError::EmptyAnchor));
        let err = load_facts("group A fg=\"Z/\"\n").unwrap_err();
        assert!(matches!(err.kind, FactsErrorKind::Expr(_)));
        let err = load_facts("frobnicate\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = load_facts("group A\nfact selfsmall A = yes anchor=\"open\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn all_directives() {
        let src = r#"
group A fg="Z (+) Z/2"   # finitely generated
group B kind=rationals tfr=1 torsion=no
group C kind=z_pow count=omega tfr=infinite
group D
group S
group P
rel quotient D A
rel embeds_power D B
rel extension C A D
rel sum S = A + B + D
rel product P S
rel power_sum D = B ^ (omega)
rel power_product C = A ^ kappa
fact small D B = no anchor="given \"here\""
fact homzero B A anchor="divisible into f.g."
fact selfsmall S = yes anchor="given"
"#;
        let fb = load_facts(src).unwrap();
        assert_eq!(fb.relations().len(), 7);
        assert_eq!(fb.base_facts().len(), 3);
        assert_eq!(fb.base_facts()[0].anchor, "given \"here\"");
    }
}
