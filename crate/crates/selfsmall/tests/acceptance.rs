//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on failure.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;
use selfsmall::cli::oracle_suite;
use selfsmall::expr::parse_family;
use selfsmall::facts::default_facts;
use selfsmall::random;
use selfsmall_core::catalogue::{Provenance, SubjectKind, Value};
use selfsmall_core::decision::{
    check_certificate, decide_finite_sum_self_small, decide_product_self_small, decide_repeat_power,
    evaluate_condition_4, evaluate_condition_5, evaluate_condition_6, validate_certificate, ParamValue, PowerKind,
};
use selfsmall_core::matrix::smith_normal_form;
use selfsmall_core::oracle::DEFAULT_BOUND;
use selfsmall_core::{Cardinal, FactBase, FgGroup, Member, Outcome, RuleId, Size, Truth, Verdict};

const EXAMPLES_LIMIT: Duration = Duration::from_secs(1);
const FAMILIES: usize = 1000;
const FAMILIES_LIMIT: Duration = Duration::from_secs(5);
const MATRICES: usize = 500;
const MATRIX_DIM: usize = 8;
const MATRIX_ENTRY: i64 = 50;
const MATRICES_LIMIT: Duration = Duration::from_secs(10);
const HOM_PAIRS: usize = 300;
const HOM_TRIPLES: usize = 100;
const HOM_LIMIT: Duration = Duration::from_secs(30);
const SCHEDULES: u64 = 20;
const MUTATIONS: usize = 10;
const SEED: u64 = 0x5e1f_5a11;

struct Report {
    failed: usize,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let late = limit.is_some_and(|l| elapsed > l);
        let timing = match limit {
            Some(l) => format!("{:.3}s / limit {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64()),
            None => format!("{:.3}s", elapsed.as_secs_f64()),
        };
        match result {
            Ok(detail) if !late => println!("PASS [{id}] {name}: {detail} ({timing})"),
            Ok(detail) => {
                self.failed += 1;
                println!("FAIL [{id}] {name}: {detail}, over time limit ({timing})");
            }
            Err(reason) => {
                self.failed += 1;
                println!("FAIL [{id}] {name}: {reason} ({timing})");
            }
        }
    }
}

fn family(text: &str) -> selfsmall_core::Family {
    parse_family(text).expect("valid family")
}

fn named(s: &str) -> Member {
    Member::Named(s.into())
}

fn card(text: &str) -> Cardinal {
    match text {
        "omega" => Cardinal::omega(),
        "kappa" => Cardinal::Infinite("kappa".into()),
        n => Cardinal::finite(n.parse().expect("count")).expect("nonzero"),
    }
}

fn query(fb: &FactBase, kind: SubjectKind, a: &str, b: Option<&str>) -> Truth {
    fb.query_named(kind, a, b).expect("catalogue names").value
}

/// Catalogue subjects among the worked examples, with expected values.
const CATALOGUE_EXAMPLES: &[(SubjectKind, &str, Option<&str>, Truth)] = &[
    (SubjectKind::SelfSmall, "prod_Zp", None, Truth::Yes),
    (SubjectKind::SelfSmall, "Z_omega", None, Truth::Yes),
    (SubjectKind::SelfSmall, "Z_kappa", None, Truth::Yes),
    (SubjectKind::SelfSmall, "Z2_omega", None, Truth::No),
    (SubjectKind::SelfSmall, "Z_plus_Q", None, Truth::Yes),
    (SubjectKind::SelfSmall, "Q_mod_Z", None, Truth::No),
    (SubjectKind::SelfSmall, "Q_pow_omega", None, Truth::No),
    (SubjectKind::Small, "sum_Zp", Some("prod_Zp"), Truth::No),
    (SubjectKind::Small, "Q", Some("prod_Zp"), Truth::Yes),
    (SubjectKind::Small, "prod_Zp", Some("Q"), Truth::No),
    (SubjectKind::SelfSmall, "Q_x_prod_Zp", None, Truth::No),
];

fn examples(fb: &FactBase, verdicts: &mut Vec<Verdict>) -> Result<String, String> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let mut expect = |label: String, got: Outcome, want: Outcome| {
        checked += 1;
        if got != want {
            mismatches.push(format!("{label}: got {got}, want {want}"));
        }
    };
    let product = [
        ("family(primes(all, Z/p))", Outcome::SelfSmall),
        ("family(repeat(Z/2, omega))", Outcome::NotSelfSmall),
        ("family(repeat(Z/3, omega))", Outcome::NotSelfSmall),
        ("family(repeat(Z/5, omega))", Outcome::NotSelfSmall),
        ("family(repeat(Z, 3))", Outcome::SelfSmall),
        ("family(repeat(Z, omega))", Outcome::SelfSmall),
        ("family(repeat(Z, kappa))", Outcome::SelfSmall),
        ("family(repeat(Z, omega), repeat(Z/2, 1))", Outcome::NotSelfSmall),
    ];
    for (text, want) in product {
        let v = decide_product_self_small(&family(text));
        expect(format!("decide product {text}"), v.outcome, want);
        verdicts.push(v);
    }
    for k in ["3", "omega", "kappa"] {
        let v = decide_repeat_power(&Member::Fg(FgGroup::free(1)), &card(k), PowerKind::Product, fb)
            .map_err(|e| e.to_string())?;
        expect(format!("decide power Z {k} product"), v.outcome, Outcome::SelfSmall);
        verdicts.push(v);
    }
    let sums: [(Vec<Member>, Outcome); 4] = [
        (vec![Member::Fg(FgGroup::free(1)), named("Q")], Outcome::SelfSmall),
        (vec![named("Q_mod_Z")], Outcome::NotSelfSmall),
        (vec![named("prod_Zp")], Outcome::SelfSmall),
        (vec![named("Q"), named("prod_Zp")], Outcome::NotSelfSmall),
    ];
    for (members, want) in sums {
        let v = decide_finite_sum_self_small(&members, fb).map_err(|e| e.to_string())?;
        let label: Vec<String> = members.iter().map(ToString::to_string).collect();
        expect(format!("decide sum {}", label.join(" ")), v.outcome, want);
        verdicts.push(v);
    }
    let v = decide_repeat_power(&named("Q"), &Cardinal::omega(), PowerKind::Product, fb).map_err(|e| e.to_string())?;
    expect("decide power Q omega product".into(), v.outcome, Outcome::NotSelfSmall);
    verdicts.push(v);
    for &(kind, a, b, want) in CATALOGUE_EXAMPLES {
        checked += 1;
        let got = query(fb, kind, a, b);
        if got != want {
            mismatches.push(format!("query {kind:?} {a} {b:?}: got {got}, want {want}"));
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{checked}/{checked} exact"))
    } else {
        Err(format!("{} mismatches: {}", mismatches.len(), mismatches.join("; ")))
    }
}

fn evaluator_agreement(verdicts: &mut Vec<Verdict>) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut agree = 0;
    let mut positive = 0;
    let mut first_bad = None;
    for _ in 0..FAMILIES {
        let f = random::family(&mut rng, true);
        let c4 = evaluate_condition_4(&f).map_err(|e| e.to_string())?;
        let c5 = evaluate_condition_5(&f).map_err(|e| e.to_string())?;
        let c6 = evaluate_condition_6(&f).map_err(|e| e.to_string())?;
        positive += usize::from(c4);
        if c4 == c5 && c5 == c6 {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("{f:?}: ({c4}, {c5}, {c6})"));
        }
        verdicts.push(decide_product_self_small(&f));
    }
    match first_bad {
        None => Ok(format!("{agree}/{FAMILIES} agree, {positive} self-small")),
        Some(bad) => Err(format!("{agree}/{FAMILIES} agree; first disagreement {bad}")),
    }
}

fn snf_suite() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    for i in 0..MATRICES {
        let a = random::matrix(&mut rng, MATRIX_DIM, MATRIX_ENTRY);
        let r = smith_normal_form(&a);
        let product = r.u.mul(&a).and_then(|ua| ua.mul(&r.v)).map_err(|e| e.to_string())?;
        let unit = |m: &selfsmall_core::IntMatrix| m.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
        let mut diagonal_only = true;
        for row in 0..r.s.rows() {
            for col in 0..r.s.cols() {
                diagonal_only &= row == col || r.s.get(row, col).is_zero();
            }
        }
        let d = r.diagonal();
        let chain = d.iter().all(|x| !x.is_negative())
            && d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        if product != r.s || !unit(&r.u) || !unit(&r.v) || !diagonal_only || !chain {
            return Err(format!("matrix {i} failed: {a:?}"));
        }
    }
    Ok(format!("{MATRICES}/{MATRICES} exact"))
}

fn hom_oracle() -> Result<String, String> {
    let report = oracle_suite(SEED, HOM_PAIRS, HOM_TRIPLES, DEFAULT_BOUND).map_err(|e| e.to_string())?;
    if report.failures == 0 {
        Ok(format!("{HOM_PAIRS} pairs and {HOM_TRIPLES} triples exact"))
    } else {
        Err(format!("{} of {} checks failed", report.failures, report.checked))
    }
}

fn inference() -> Result<String, String> {
    let base = default_facts();
    let saturated = base.saturate().map_err(|e| format!("contradiction: {e}"))?;
    let again = saturated.saturate().map_err(|e| e.to_string())?;
    if again.facts() != saturated.facts() {
        return Err("saturation is not idempotent".into());
    }
    let values = |fb: &FactBase| fb.facts().iter().map(|(s, f)| (*s, f.value)).collect::<Vec<_>>();
    let reference = values(&saturated);
    saturated.replay().map_err(|e| format!("replay: {e}"))?;
    for seed in 0..SCHEDULES {
        let shuffled = base.saturate_shuffled(&mut StdRng::seed_from_u64(seed)).map_err(|e| e.to_string())?;
        if values(&shuffled) != reference {
            return Err(format!("schedule {seed} reached a different fixpoint"));
        }
        shuffled.replay().map_err(|e| format!("schedule {seed} replay: {e}"))?;
    }
    let mut traces = 0;
    for subject in saturated.facts().keys() {
        saturated.trace(*subject).ok_or("missing trace")?;
        traces += 1;
    }
    let mut derived = 0;
    for &(kind, a, b, want) in CATALOGUE_EXAMPLES {
        let subject = saturated.subject(kind, a, b).map_err(|e| e.to_string())?;
        if base.base_facts().iter().any(|f| f.subject == subject) {
            continue;
        }
        let fact =
            saturated.facts().get(&subject).ok_or_else(|| format!("{} not derived", saturated.describe(subject)))?;
        let value = match fact.value {
            Value::Yes => Truth::Yes,
            Value::No => Truth::No,
        };
        if value != want || !matches!(fact.provenance, Provenance::Derived(_)) {
            return Err(format!("{} derived wrongly", saturated.describe(subject)));
        }
        derived += 1;
    }
    Ok(format!(
        "{} facts, {SCHEDULES} schedules agree, {traces} traces replay, {derived} example facts derived",
        reference.len()
    ))
}

fn set_param(v: &mut Verdict, path: &[usize], key: &str, value: ParamValue) {
    let mut node = &mut v.certificate.root;
    for &i in path {
        node = &mut node.children[i];
    }
    let slot = node.params.iter_mut().find(|(k, _)| k == key).expect("parameter present");
    slot.1 = value;
}

fn mutations(fb: &FactBase) -> Vec<(&'static str, Verdict)> {
    let pgroups = decide_product_self_small(&family("family(primes(all, Z/p))"));
    let torsion_power = decide_product_self_small(&family("family(repeat(Z/2, omega))"));
    let free = decide_product_self_small(&family("family(repeat(Z, omega))"));
    let sum = decide_finite_sum_self_small(&[named("Q"), named("prod_Zp")], fb).expect("decides");
    let power = decide_repeat_power(&named("prod_Zp"), &card("2"), PowerKind::Sum, fb).expect("decides");

    let mut out = Vec::new();
    let mut m = pgroups.clone();
    m.certificate.root.rule = RuleId::FgSmall.id().into();
    out.push(("root rule id swapped", m));
    let mut m = pgroups.clone();
    m.certificate.root.children[0].anchor.push_str(" (edited)");
    out.push(("anchor edited", m));
    let mut m = pgroups.clone();
    m.outcome = Outcome::NotSelfSmall;
    out.push(("outcome flipped", m));
    let mut m = pgroups.clone();
    set_param(&mut m, &[0], "rank", ParamValue::Size(Size::from(1u64)));
    out.push(("free rank changed", m));
    let mut m = pgroups.clone();
    set_param(&mut m, &[1], "generic_support", ParamValue::Size(Size::Infinite));
    out.push(("generic support changed", m));
    let mut m = pgroups;
    set_param(&mut m, &[2], "exponents", ParamValue::Exponents(vec![2]));
    out.push(("normal-form exponents changed", m));
    let mut m = torsion_power;
    m.certificate.root.children[0].rule = RuleId::InfiniteFreePart.id().into();
    m.certificate.root.children[0].anchor = RuleId::InfiniteFreePart.anchor().into();
    out.push(("violated-condition rule swapped", m));
    let mut m = free;
    set_param(&mut m, &[1], "kappa", ParamValue::Size(Size::from(3u64)));
    out.push(("free power rank changed", m));
    let mut m = sum;
    let child = m.certificate.root.children.iter().position(|c| c.get("value") == Some(&ParamValue::Truth(Truth::No)));
    set_param(&mut m, &[child.expect("a failing pair")], "value", ParamValue::Truth(Truth::Yes));
    out.push(("catalogue value flipped", m));
    let mut m = power;
    set_param(&mut m, &[], "count", ParamValue::Cardinal(Cardinal::omega()));
    out.push(("power count changed", m));
    out
}

fn certificates(fb: &FactBase, verdicts: &[Verdict]) -> Result<String, String> {
    if let Some(bad) = verdicts.iter().position(|v| !check_certificate(v) || validate_certificate(v, Some(fb)).is_err())
    {
        return Err(format!("verdict {bad} fails its own check: {:?}", validate_certificate(&verdicts[bad], Some(fb))));
    }
    let tampered = mutations(fb);
    assert_eq!(tampered.len(), MUTATIONS);
    let accepted: Vec<&str> =
        tampered.iter().filter(|(_, v)| validate_certificate(v, Some(fb)).is_ok()).map(|(name, _)| *name).collect();
    if accepted.is_empty() {
        Ok(format!("{} verdicts valid, {MUTATIONS}/{MUTATIONS} mutations rejected", verdicts.len()))
    } else {
        Err(format!("mutations accepted: {}", accepted.join(", ")))
    }
}

fn power_law(fb: &FactBase) -> Result<String, String> {
    let mut checked = 0;
    for (id, group) in fb.groups() {
        let status = fb.value(selfsmall_core::Subject::Small(id, id));
        if status == Truth::Unknown {
            continue;
        }
        for k in ["1", "2", "5", "omega"] {
            let count = card(k);
            let v = decide_repeat_power(&named(&group.name), &count, PowerKind::Sum, fb).map_err(|e| e.to_string())?;
            let want = status == Truth::Yes && count.is_finite();
            if (v.outcome == Outcome::SelfSmall) != want || v.outcome == Outcome::Unknown || !check_certificate(&v) {
                return Err(format!("{}^({k}) gave {}", group.name, v.outcome));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked}/{checked} powers match"))
}

fn main() {
    let fb = default_facts().saturate().expect("shipped facts are consistent");
    let mut report = Report { failed: 0 };
    let mut verdicts = Vec::new();
    report.record(1, "worked-example regression", Some(EXAMPLES_LIMIT), || examples(&fb, &mut verdicts));
    report.record(2, "evaluator agreement", Some(FAMILIES_LIMIT), || evaluator_agreement(&mut verdicts));
    report.record(3, "Smith normal form", Some(MATRICES_LIMIT), snf_suite);
    report.record(4, "hom oracle equivalence", Some(HOM_LIMIT), hom_oracle);
    report.record(5, "inference engine", None, inference);
    report.record(6, "certificate integrity", None, || certificates(&fb, &verdicts));
    report.record(7, "power law for direct powers", None, || power_law(&fb));
    if report.failed > 0 {
        println!("{} criteria failed", report.failed);
        std::process::exit(1);
    }
}
