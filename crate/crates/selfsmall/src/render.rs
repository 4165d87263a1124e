//! Human-readable text output.

use std::fmt::Write;

use selfsmall_core::catalogue::{Answer, Trace, TraceStep};
use selfsmall_core::decision::{CertNode, Question, Verdict};
use selfsmall_core::{FactBase, FgGroup, PrimaryDecomposition};

use crate::expr::print_family;
use crate::records::param_fields;

pub fn question(q: &Question) -> String {
    match q {
        Question::Product(f) => format!("product of {}", print_family(f)),
        Question::Sum(ms) => {
            let parts: Vec<String> = ms.iter().map(ToString::to_string).collect();
            format!("sum {}", parts.join(" (+) "))
        }
        Question::Power { base, count, kind } => format!("{} power of {base} over {count}", kind.as_str()),
    }
}

pub fn verdict(v: &Verdict) -> String {
    let mut out = format!("{}: {}\ncertificate:\n", question(&v.certificate.question), v.outcome);
    node(&mut out, &v.certificate.root, 1);
    out
}

fn node(out: &mut String, n: &CertNode, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}[{}] {}", n.rule, n.anchor);
    for (key, value) in &n.params {
        let _ = writeln!(out, "{pad}    {key} = {}", param_fields(value).1);
    }
    for child in &n.children {
        node(out, child, depth + 1);
    }
}

pub fn answer(fb: &FactBase, a: &Answer) -> String {
    let mut out = format!("{}: {}\n", fb.describe(a.subject), a.value);
    if let Some(t) = &a.trace {
        out.push_str("derivation:\n");
        trace(&mut out, fb, t, 1);
    }
    out
}

fn trace(out: &mut String, fb: &FactBase, t: &Trace, depth: usize) {
    let pad = "  ".repeat(depth);
    match &t.step {
        TraceStep::Base { anchor } => {
            let _ = writeln!(out, "{pad}{} = {} [base fact] {anchor}", fb.describe(t.subject), t.value);
        }
        TraceStep::Rule { rule, contrapositive, premises, .. } => {
            let how = if *contrapositive { ", contrapositive" } else { "" };
            let _ = writeln!(out, "{pad}{} = {} [{rule}{how}] {}", fb.describe(t.subject), t.value, rule.anchor());
            for p in premises {
                trace(out, fb, p, depth + 1);
            }
        }
    }
}

pub fn primary(g: &FgGroup, d: &PrimaryDecomposition) -> String {
    let mut out = format!("{g}\nfree rank: {}\n", d.free_rank);
    for (p, exps) in &d.parts {
        let parts: Vec<String> =
            exps.iter().map(|e| if *e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") }).collect();
        let _ = writeln!(out, "p = {p}: {}", parts.join(" (+) "));
    }
    out
}
