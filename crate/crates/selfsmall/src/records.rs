//! Versioned line-delimited records for verdicts and query answers.
//!
//! ```text
//! selfsmall-certificate v1
//! outcome not-self-small
//! question product "family(repeat(Z/2, omega))"
//! node 0 product_criterion "<anchor>"
//! param branch name "torsion"
//! node 1 infinite_primary_support "<anchor>"
//! param entry nat "0"
//! end
//! ```
//!
//! Nodes are listed in preorder with their depth; `param` lines belong to
//! the nearest preceding node. Strings are double-quoted with `\"` and `\\`
//! escapes. Output is plain ASCII apart from anchor and name text.

use num_bigint::BigUint;
use selfsmall_core::catalogue::{Trace, TraceStep};
use selfsmall_core::decision::{CertNode, Certificate, Outcome, ParamValue, PowerKind, Question, Verdict};
use selfsmall_core::{Cardinal, FactBase, Size, Truth};

use crate::expr::{
    parse_count, parse_family, parse_fg_group, parse_group, parse_prime_set, print_family, print_prime_set, ExprError,
    Names,
};

pub const CERTIFICATE_HEADER: &str = "selfsmall-certificate v1";
pub const ANSWER_HEADER: &str = "selfsmall-answer v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("record line {line}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::SelfSmall => "self-small",
        Outcome::NotSelfSmall => "not-self-small",
        Outcome::Unknown => "unknown",
    }
}

fn truth_word(t: Truth) -> &'static str {
    match t {
        Truth::Yes => "yes",
        Truth::No => "no",
        Truth::Unknown => "unknown",
    }
}

pub(crate) fn param_fields(v: &ParamValue) -> (&'static str, String) {
    match v {
        ParamValue::Nat(n) => ("nat", n.to_string()),
        ParamValue::Size(s) => ("size", s.to_string()),
        ParamValue::Cardinal(c) => ("cardinal", c.to_string()),
        ParamValue::Group(g) => ("group", g.to_string()),
        ParamValue::Name(n) => ("name", n.clone()),
        ParamValue::Exponents(e) => ("exponents", e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
        ParamValue::Primes(p) => ("primes", print_prime_set(p)),
        ParamValue::Truth(t) => ("truth", truth_word(*t).into()),
    }
}

pub fn write_verdict(v: &Verdict) -> String {
    let mut out = String::new();
    out.push_str(CERTIFICATE_HEADER);
    out.push('\n');
    out.push_str(&format!("outcome {}\n", outcome_word(v.outcome)));
    let question = match &v.certificate.question {
        Question::Product(f) => format!("question product {}", quote(&print_family(f))),
        Question::Sum(ms) => {
            let parts: Vec<String> = ms.iter().map(|m| quote(&m.to_string())).collect();
            format!("question sum {}", parts.join(" "))
        }
        Question::Power { base, count, kind } => {
            format!("question power {} {} {}", quote(&base.to_string()), quote(&count.to_string()), kind.as_str())
        }
    };
    out.push_str(&question);
    out.push('\n');
    write_node(&mut out, &v.certificate.root, 0);
    out.push_str("end\n");
    out
}

fn write_node(out: &mut String, node: &CertNode, depth: usize) {
    out.push_str(&format!("node {depth} {} {}\n", node.rule, quote(&node.anchor)));
    for (key, value) in &node.params {
        let (ty, text) = param_fields(value);
        out.push_str(&format!("param {key} {ty} {}\n", quote(&text)));
    }
    for child in &node.children {
        write_node(out, child, depth + 1);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Field {
    Word(String),
    Str(String),
}

fn fields(line: &str, number: usize) -> Result<Vec<Field>, RecordError> {
    let err = |m: &str| RecordError { line: number, message: m.into() };
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == ' ' || c == '\t' {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    None => return Err(err("unterminated string")),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e @ ('"' | '\\')) => s.push(e),
                        _ => return Err(err("invalid escape")),
                    },
                    Some(ch) => s.push(ch),
                }
            }
            out.push(Field::Str(s));
        } else {
            let mut w = String::new();
            while let Some(&ch) = chars.peek() {
                if ch == ' ' || ch == '\t' || ch == '"' {
                    break;
                }
                w.push(ch);
                chars.next();
            }
            out.push(Field::Word(w));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    /// Number of the line consumed last.
    last: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).collect();
        Self { lines, pos: 0, last: 1 }
    }

    fn line_number(&self) -> usize {
        self.lines.get(self.pos).map_or_else(|| self.lines.last().map_or(1, |l| l.0 + 1), |l| l.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, RecordError> {
        Err(RecordError { line: self.line_number(), message: message.into() })
    }

    fn next_fields(&mut self) -> Result<Option<Vec<Field>>, RecordError> {
        match self.lines.get(self.pos) {
            None => Ok(None),
            Some(&(n, l)) => {
                self.pos += 1;
                self.last = n;
                fields(l, n).map(Some)
            }
        }
    }

    fn peek_tag(&self) -> Option<&'a str> {
        self.lines.get(self.pos).and_then(|(_, l)| l.split_whitespace().next())
    }

    fn header(&mut self, expected: &str) -> Result<(), RecordError> {
        match self.lines.get(self.pos) {
            Some((_, l)) if l.trim() == expected => {
                self.pos += 1;
                Ok(())
            }
            _ => self.error(format!("expected header `{expected}`")),
        }
    }
}

fn word(f: &Field) -> Option<&str> {
    match f {
        Field::Word(w) => Some(w),
        Field::Str(_) => None,
    }
}

fn string(f: &Field) -> Option<&str> {
    match f {
        Field::Str(s) => Some(s),
        Field::Word(_) => None,
    }
}

pub fn read_verdict(text: &str) -> Result<Verdict, RecordError> {
    let mut c = Cursor::new(text);
    c.header(CERTIFICATE_HEADER)?;

    let outcome = match c.next_fields()?.as_deref() {
        Some([Field::Word(t), Field::Word(o)]) if t == "outcome" => match o.as_str() {
            "self-small" => Outcome::SelfSmall,
            "not-self-small" => Outcome::NotSelfSmall,
            "unknown" => Outcome::Unknown,
            _ => return err_at(&c, "unknown outcome"),
        },
        _ => return err_at(&c, "expected `outcome <value>`"),
    };

    let q = c.next_fields()?.unwrap_or_default();
    let question = match q.first().and_then(word) {
        Some("question") => match q.get(1).and_then(word) {
            Some("product") if q.len() == 3 => {
                let text = string(&q[2]).ok_or_else(|| rec_err(&c, "expected a quoted family"))?;
                Question::Product(expr(parse_family(text), &c)?)
            }
            Some("sum") if q.len() >= 3 => {
                let mut members = Vec::new();
                for f in &q[2..] {
                    let text = string(f).ok_or_else(|| rec_err(&c, "expected a quoted member"))?;
                    members.push(expr(parse_group(text, Names::Raw), &c)?);
                }
                Question::Sum(members)
            }
            Some("power") if q.len() == 5 => {
                let base = string(&q[2]).ok_or_else(|| rec_err(&c, "expected a quoted base"))?;
                let count = string(&q[3]).ok_or_else(|| rec_err(&c, "expected a quoted count"))?;
                let kind = match word(&q[4]) {
                    Some("sum") => PowerKind::Sum,
                    Some("product") => PowerKind::Product,
                    _ => return err_at(&c, "expected `sum` or `product`"),
                };
                Question::Power {
                    base: expr(parse_group(base, Names::Raw), &c)?,
                    count: expr(parse_count(count), &c)?,
                    kind,
                }
            }
            _ => return err_at(&c, "malformed question"),
        },
        _ => return err_at(&c, "expected `question ...`"),
    };

    let root = read_node(&mut c, 0)?;
    match c.next_fields()?.as_deref() {
        Some([Field::Word(e)]) if e == "end" => {}
        _ => return err_at(&c, "expected `end`"),
    }
    if c.next_fields()?.is_some() {
        return err_at(&c, "trailing input after `end`");
    }
    Ok(Verdict { outcome, certificate: Certificate { question, root } })
}

fn rec_err(c: &Cursor, m: &str) -> RecordError {
    RecordError { line: c.last, message: m.into() }
}

fn expr<T>(r: Result<T, ExprError>, c: &Cursor) -> Result<T, RecordError> {
    r.map_err(|e| rec_err(c, &e.to_string()))
}

fn err_at<T>(c: &Cursor, m: &str) -> Result<T, RecordError> {
    Err(rec_err(c, m))
}

fn read_node(c: &mut Cursor, depth: usize) -> Result<CertNode, RecordError> {
    let f = c.next_fields()?.unwrap_or_default();
    let mut node = match f.as_slice() {
        [Field::Word(t), Field::Word(d), Field::Word(rule), Field::Str(anchor)] if t == "node" => {
            if d.parse::<usize>().ok() != Some(depth) {
                return err_at(c, &format!("expected a node at depth {depth}"));
            }
            CertNode { rule: rule.clone(), anchor: anchor.clone(), params: Vec::new(), children: Vec::new() }
        }
        _ => return err_at(c, "expected `node <depth> <rule> \"<anchor>\"`"),
    };
    while c.peek_tag() == Some("param") {
        let f = c.next_fields()?.unwrap_or_default();
        let [_, Field::Word(key), Field::Word(ty), Field::Str(text)] = f.as_slice() else {
            return err_at(c, "expected `param <key> <type> \"<value>\"`");
        };
        let value = param_value(ty, text).map_err(|m| rec_err(c, &m))?;
        node.params.push((key.clone(), value));
    }
    loop {
        let next_depth = match c.peek_tag() {
            Some("node") => c.lines[c.pos].1.split_whitespace().nth(1).and_then(|d| d.parse::<usize>().ok()),
            _ => None,
        };
        match next_depth {
            Some(d) if d == depth + 1 => node.children.push(read_node(c, depth + 1)?),
            Some(d) if d > depth + 1 => {
                c.pos += 1;
                return err_at(c, "node depth skips a level");
            }
            _ => return Ok(node),
        }
    }
}

fn param_value(ty: &str, text: &str) -> Result<ParamValue, String> {
    let e = |x: ExprError| x.to_string();
    Ok(match ty {
        "nat" => ParamValue::Nat(text.parse::<BigUint>().map_err(|_| format!("bad number `{text}`"))?),
        "size" => ParamValue::Size(if text == "infinite" {
            Size::Infinite
        } else {
            Size::Finite(text.parse().map_err(|_| format!("bad size `{text}`"))?)
        }),
        "cardinal" => ParamValue::Cardinal(match text.parse::<u64>() {
            Ok(n) => Cardinal::finite(n).map_err(|x| x.to_string())?,
            Err(_) => Cardinal::Infinite(text.into()),
        }),
        "group" => ParamValue::Group(parse_fg_group(text).map_err(e)?),
        "name" => ParamValue::Name(text.into()),
        "exponents" if text.is_empty() => ParamValue::Exponents(Vec::new()),
        "exponents" => ParamValue::Exponents(
            text.split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad exponents `{text}`"))?,
        ),
        "primes" => ParamValue::Primes(parse_prime_set(text).map_err(e)?),
        "truth" => ParamValue::Truth(match text {
            "yes" => Truth::Yes,
            "no" => Truth::No,
            "unknown" => Truth::Unknown,
            _ => return Err(format!("bad truth value `{text}`")),
        }),
        other => return Err(format!("unknown parameter type `{other}`")),
    })
}

/// Query answer with its derivation trace, one `step` per trace node.
pub fn write_answer(fb: &FactBase, subject: selfsmall_core::Subject, value: Truth, trace: Option<&Trace>) -> String {
    let mut out = format!("{ANSWER_HEADER}\nanswer {} {}\n", quote(&fb.describe(subject)), truth_word(value));
    fn step(out: &mut String, fb: &FactBase, t: &Trace, depth: usize) {
        let value = match t.value {
            selfsmall_core::catalogue::Value::Yes => "yes",
            selfsmall_core::catalogue::Value::No => "no",
        };
        match &t.step {
            TraceStep::Base { anchor } => {
                out.push_str(&format!(
                    "step {depth} base_fact {} {value} {}\n",
                    quote(&fb.describe(t.subject)),
                    quote(anchor)
                ));
            }
            TraceStep::Rule { rule, contrapositive, premises, .. } => {
                let flag = if *contrapositive { "contrapositive" } else { "direct" };
                out.push_str(&format!(
                    "step {depth} {rule} {} {value} {flag} {}\n",
                    quote(&fb.describe(t.subject)),
                    quote(rule.anchor())
                ));
                for p in premises {
                    step(out, fb, p, depth + 1);
                }
            }
        }
    }
    if let Some(t) = trace {
        step(&mut out, fb, t, 0);
    }
    out.push_str("end\n");
    out
}

/// Flat `key "value"` records for results that carry no certificate.
pub fn write_result(kind: &str, entries: &[(&str, String)]) -> String {
    let mut out = format!("selfsmall-result v1\nkind {kind}\n");
    for (k, v) in entries {
        out.push_str(&format!("{k} {}\n", quote(v)));
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfsmall_core::decision::decide_product_self_small;

    #[test]
    fn certificate_round_trip() {
        for text in [
            "family(primes(all, Z/p))",
            "family(repeat(Z/2, omega))",
            "family(repeat(Z, kappa))",
            "family(repeat(Z^2 (+) Z/6, 3), primes(all_except(2, 3), Z/p^2))",
        ] {
            let v = decide_product_self_small(&parse_family(text).unwrap());
            let written = write_verdict(&v);
            let back = read_verdict(&written).unwrap();
            assert_eq!(back, v);
            assert_eq!(write_verdict(&back), written);
        }
    }

    #[test]
    fn malformed_records() {
        assert_eq!(read_verdict("nope").unwrap_err().line, 1);
        let v = decide_product_self_small(&parse_family("family(repeat(Z/2, omega))").unwrap());
        let text = write_verdict(&v);
        let truncated: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(read_verdict(&truncated).is_err());
        let skipped = text.replace("node 1 ", "node 2 ");
        assert!(read_verdict(&skipped).is_err());
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a \"b\" \\"), "\"a \\\"b\\\" \\\\\"");
        assert_eq!(fields(&quote("a \"b\" \\"), 1).unwrap(), vec![Field::Str("a \"b\" \\".into())]);
    }
}
