//! Command-line interface.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;
use selfsmall_core::catalogue::{CatalogueError, NamedKind, SaturationError, SubjectKind};
use selfsmall_core::decision::{
    decide_finite_sum_self_small, decide_product_self_small, decide_repeat_power, validate_certificate, with_members,
    DecisionError, Member, Outcome, PowerKind, Verdict,
};
use selfsmall_core::family::{normal_form, FamilyError};
use selfsmall_core::group::{hom_group, hom_is_zero, primary_decomposition};
use selfsmall_core::oracle::{
    enumerate_homs, finite_sum_additivity_check, hom_count, hom_structure_check, image_support_check, OracleError,
    DEFAULT_BOUND,
};
use selfsmall_core::{FactBase, FgGroup, GroupKind, Truth};

use crate::expr::{
    parse_count, parse_expr, parse_family, parse_fg_group, parse_group, print_family, Expr, ExprError, Names,
};
use crate::facts::{default_facts, extend_facts, FactsError};
use crate::records::{read_verdict, write_answer, write_result, write_verdict, RecordError};
use crate::{random, render};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Sum,
    Product,
}

impl From<KindArg> for PowerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sum => PowerKind::Sum,
            KindArg::Product => PowerKind::Product,
        }
    }
}

/// Decide self-smallness of abelian groups and inspect the evidence.
#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "selfsmall", version)]
pub struct Cli {
    /// Extra fact file loaded on top of the built-in catalogue.
    #[arg(long, global = true)]
    pub facts: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum number of homomorphisms the oracle may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Canonical form of a group or of a family product.
    Normalize { expr: String },
    /// The group Hom(A, B) of finitely generated groups.
    Hom { a: String, b: String },
    /// Primary decomposition of a finitely generated group.
    Primary { expr: String },
    #[command(subcommand)]
    Decide(Decide),
    #[command(subcommand)]
    Query(Query),
    #[command(subcommand)]
    Oracle(Oracle),
    /// Validate a certificate written with `--format records`.
    Check { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Decide {
    /// Product of a family of finitely generated groups.
    Product { family: String },
    /// Finite direct sum of catalogue or finitely generated groups.
    Sum {
        #[arg(required = true)]
        members: Vec<String>,
    },
    /// Direct power `A^(k)` or product power `A^k`.
    Power {
        base: String,
        count: String,
        #[arg(long, value_enum, default_value_t = KindArg::Sum)]
        kind: KindArg,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Query {
    Small { a: String, b: String },
    Selfsmall { a: String },
    Homzero { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Oracle {
    Homcount {
        a: String,
        b: String,
    },
    Structure {
        a: String,
        b: String,
    },
    Additivity {
        a: String,
        b: String,
        c: String,
    },
    Support {
        a: String,
        b: String,
        n: usize,
    },
    /// Randomized comparison of the oracle against the closed forms.
    Suite {
        #[arg(long, default_value_t = 300)]
        pairs: usize,
        #[arg(long, default_value_t = 100)]
        triples: usize,
    },
}

impl Command {
    /// Arguments that parse back to this command.
    pub fn to_args(&self) -> Vec<String> {
        let s = |x: &str| x.to_string();
        match self {
            Command::Normalize { expr } => vec![s("normalize"), expr.clone()],
            Command::Hom { a, b } => vec![s("hom"), a.clone(), b.clone()],
            Command::Primary { expr } => vec![s("primary"), expr.clone()],
            Command::Decide(Decide::Product { family }) => vec![s("decide"), s("product"), family.clone()],
            Command::Decide(Decide::Sum { members }) => {
                [s("decide"), s("sum")].into_iter().chain(members.iter().cloned()).collect()
            }
            Command::Decide(Decide::Power { base, count, kind }) => {
                let kind = match kind {
                    KindArg::Sum => "sum",
                    KindArg::Product => "product",
                };
                vec![s("decide"), s("power"), base.clone(), count.clone(), s("--kind"), s(kind)]
            }
            Command::Query(Query::Small { a, b }) => vec![s("query"), s("small"), a.clone(), b.clone()],
            Command::Query(Query::Selfsmall { a }) => vec![s("query"), s("selfsmall"), a.clone()],
            Command::Query(Query::Homzero { a, b }) => vec![s("query"), s("homzero"), a.clone(), b.clone()],
            Command::Oracle(o) => {
                let mut v = vec![s("oracle")];
                match o {
                    Oracle::Homcount { a, b } => v.extend([s("homcount"), a.clone(), b.clone()]),
                    Oracle::Structure { a, b } => v.extend([s("structure"), a.clone(), b.clone()]),
                    Oracle::Additivity { a, b, c } => v.extend([s("additivity"), a.clone(), b.clone(), c.clone()]),
                    Oracle::Support { a, b, n } => v.extend([s("support"), a.clone(), b.clone(), n.to_string()]),
                    Oracle::Suite { pairs, triples } => {
                        v.extend([s("suite"), s("--pairs"), pairs.to_string(), s("--triples"), triples.to_string()])
                    }
                }
                v
            }
            Command::Check { file } => vec![s("check"), file.display().to_string()],
        }
    }
}

impl Cli {
    pub fn to_args(&self) -> Vec<String> {
        let mut v = vec!["selfsmall".to_string()];
        if let Some(path) = &self.facts {
            v.extend(["--facts".into(), path.display().to_string()]);
        }
        let format = match self.format {
            Format::Text => "text",
            Format::Records => "records",
        };
        v.extend([
            "--format".into(),
            format.into(),
            "--bound".into(),
            self.bound.to_string(),
            "--seed".into(),
            self.seed.to_string(),
        ]);
        v.extend(self.command.to_args());
        v
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{path}: {source}")]
    Facts { path: String, source: FactsError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: &Cli) -> Output {
    match execute(cli) {
        Ok((status, stdout)) => Output { status, stdout, stderr: String::new() },
        Err(e) => Output { status: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// The built-in catalogue extended with `--facts`, saturated.
pub fn catalogue(facts: Option<&PathBuf>) -> Result<FactBase, CliError> {
    let mut fb = default_facts();
    if let Some(path) = facts {
        let shown = path.display().to_string();
        let source = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        extend_facts(&mut fb, &source).map_err(|source| CliError::Facts { path: shown, source })?;
    }
    Ok(fb.saturate()?)
}

fn outcome_status(o: Outcome) -> i32 {
    match o {
        Outcome::SelfSmall => EXIT_YES,
        Outcome::NotSelfSmall => EXIT_NO,
        Outcome::Unknown => EXIT_UNKNOWN,
    }
}

fn truth_status(t: Truth) -> i32 {
    match t {
        Truth::Yes => EXIT_YES,
        Truth::No => EXIT_NO,
        Truth::Unknown => EXIT_UNKNOWN,
    }
}

fn pass_status(ok: bool) -> i32 {
    if ok {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let records = cli.format == Format::Records;
    match &cli.command {
        Command::Normalize { expr } => normalize(cli, expr),
        Command::Hom { a, b } => {
            let (a, b) = (parse_fg_group(a)?, parse_fg_group(b)?);
            let h = hom_group(&a, &b);
            let zero = if hom_is_zero(&a, &b) { "yes" } else { "no" };
            let text = if records {
                write_result(
                    "hom",
                    &[
                        ("source", a.to_string()),
                        ("target", b.to_string()),
                        ("hom", h.to_string()),
                        ("zero", zero.into()),
                    ],
                )
            } else {
                format!("Hom({a}, {b}) = {h}\n")
            };
            Ok((EXIT_YES, text))
        }
        Command::Primary { expr } => {
            let g = parse_fg_group(expr)?;
            let d = primary_decomposition(&g);
            let text = if records {
                let mut entries = vec![("group", g.to_string()), ("free_rank", d.free_rank.to_string())];
                for (p, exps) in &d.parts {
                    let list: Vec<String> = exps.iter().map(u32::to_string).collect();
                    entries.push(("part", format!("{p}:{}", list.join(","))));
                }
                write_result("primary", &entries)
            } else {
                render::primary(&g, &d)
            };
            Ok((EXIT_YES, text))
        }
        Command::Decide(d) => {
            let v = decide(cli, d)?;
            let text = if records { write_verdict(&v) } else { render::verdict(&v) };
            Ok((outcome_status(v.outcome), text))
        }
        Command::Query(q) => query(cli, q),
        Command::Oracle(o) => oracle(cli, o),
        Command::Check { file } => {
            let shown = file.display().to_string();
            let text = std::fs::read_to_string(file).map_err(|source| CliError::Io { path: shown, source })?;
            let v = read_verdict(&text)?;
            let fb = catalogue(cli.facts.as_ref())?;
            Ok(match validate_certificate(&v, Some(&fb)) {
                Ok(()) => (EXIT_YES, format!("valid certificate: {}\n", v.outcome)),
                Err(e) => (EXIT_NO, format!("invalid certificate: {e}\n")),
            })
        }
    }
}

fn normalize(cli: &Cli, expr: &str) -> Result<(i32, String), CliError> {
    let records = cli.format == Format::Records;
    let fb = catalogue(cli.facts.as_ref())?;
    let entries: Vec<(&str, String)> = match parse_expr(expr, Names::Catalogue(&fb))? {
        Expr::Group(Member::Fg(g)) => vec![("group", g.to_string())],
        Expr::Group(Member::Named(name)) => {
            let kind = match &fb.group(fb.group_id(&name)?).kind {
                GroupKind::Fg(g) => g.to_string(),
                GroupKind::Named(k) => named_kind(k),
            };
            vec![("name", name), ("kind", kind)]
        }
        Expr::Family(f) => {
            let product = match normal_form(&f) {
                Ok(nf) => nf.to_string(),
                Err(FamilyError::NotSelfSmall) => "none (not self-small)".into(),
                Err(e) => return Err(e.into()),
            };
            vec![("family", print_family(&f)), ("product", product)]
        }
    };
    let text = if records {
        write_result("normalize", &entries)
    } else {
        entries.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    };
    Ok((EXIT_YES, text))
}

fn named_kind(k: &NamedKind) -> String {
    match k {
        NamedKind::Rationals => "Q".into(),
        NamedKind::RationalsModIntegers => "Q/Z".into(),
        NamedKind::ProdZp => "product of Z/p over all primes".into(),
        NamedKind::SumZp => "direct sum of Z/p over all primes".into(),
        NamedKind::ZPow(c) => format!("Z^{c}"),
        NamedKind::QPowOmega => "Q^omega".into(),
        NamedKind::Opaque => "opaque".into(),
    }
}

fn decide(cli: &Cli, d: &Decide) -> Result<Verdict, CliError> {
    Ok(match d {
        Decide::Product { family } => decide_product_self_small(&parse_family(family)?),
        Decide::Sum { members } => {
            let fb = catalogue(cli.facts.as_ref())?;
            let ms = members.iter().map(|m| parse_group(m, Names::Catalogue(&fb))).collect::<Result<Vec<_>, _>>()?;
            decide_finite_sum_self_small(&ms, &fb)?
        }
        Decide::Power { base, count, kind } => {
            let fb = catalogue(cli.facts.as_ref())?;
            let base = parse_group(base, Names::Catalogue(&fb))?;
            let fb = with_members(&fb, std::slice::from_ref(&base))?;
            decide_repeat_power(&base, &parse_count(count)?, (*kind).into(), &fb)?
        }
    })
}

fn query(cli: &Cli, q: &Query) -> Result<(i32, String), CliError> {
    let fb = catalogue(cli.facts.as_ref())?;
    let (kind, a, b) = match q {
        Query::Small { a, b } => (SubjectKind::Small, a, Some(b)),
        Query::Selfsmall { a } => (SubjectKind::SelfSmall, a, None),
        Query::Homzero { a, b } => (SubjectKind::HomZero, a, Some(b)),
    };
    let mut members = vec![parse_group(a, Names::Catalogue(&fb))?];
    if let Some(b) = b {
        members.push(parse_group(b, Names::Catalogue(&fb))?);
    }
    let fb = with_members(&fb, &members)?;
    let names: Vec<String> = members
        .iter()
        .map(|m| match m {
            Member::Named(n) => n.clone(),
            Member::Fg(g) => fb.group(fb.find_fg(g).expect("added by with_members")).name.clone(),
        })
        .collect();
    let answer = fb.query_named(kind, &names[0], names.get(1).map(String::as_str))?;
    let text = if cli.format == Format::Records {
        write_answer(&fb, answer.subject, answer.value, answer.trace.as_ref())
    } else {
        render::answer(&fb, &answer)
    };
    Ok((truth_status(answer.value), text))
}

fn oracle(cli: &Cli, o: &Oracle) -> Result<(i32, String), CliError> {
    let records = cli.format == Format::Records;
    let emit = |kind: &str, entries: Vec<(&str, String)>| {
        if records {
            write_result(kind, &entries)
        } else {
            entries.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
        }
    };
    let verdict = |ok: bool| if ok { "pass".to_string() } else { "fail".to_string() };
    match o {
        Oracle::Homcount { a, b } => {
            let (a, b) = (parse_fg_group(a)?, parse_fg_group(b)?);
            let formula = hom_count(&a, &b)?;
            let listed = BigUint::from(enumerate_homs(&a, &b, cli.bound)?.len());
            let ok = listed == formula;
            Ok((
                pass_status(ok),
                emit(
                    "homcount",
                    vec![("enumerated", listed.to_string()), ("formula", formula.to_string()), ("result", verdict(ok))],
                ),
            ))
        }
        Oracle::Structure { a, b } => {
            let ok = hom_structure_check(&parse_fg_group(a)?, &parse_fg_group(b)?, cli.bound)?;
            Ok((pass_status(ok), emit("structure", vec![("result", verdict(ok))])))
        }
        Oracle::Additivity { a, b, c } => {
            let ok =
                finite_sum_additivity_check(&parse_fg_group(a)?, &parse_fg_group(b)?, &parse_fg_group(c)?, cli.bound)?;
            Ok((pass_status(ok), emit("additivity", vec![("result", verdict(ok))])))
        }
        Oracle::Support { a, b, n } => {
            let ok = image_support_check(&parse_fg_group(a)?, &parse_fg_group(b)?, *n, cli.bound)?;
            Ok((pass_status(ok), emit("support", vec![("result", verdict(ok))])))
        }
        Oracle::Suite { pairs, triples } => {
            let report = oracle_suite(cli.seed, *pairs, *triples, cli.bound)?;
            let ok = report.failures == 0;
            Ok((
                pass_status(ok),
                emit(
                    "suite",
                    vec![
                        ("seed", cli.seed.to_string()),
                        ("pairs", pairs.to_string()),
                        ("triples", triples.to_string()),
                        ("failures", report.failures.to_string()),
                        ("result", verdict(ok)),
                    ],
                ),
            ))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checked: usize,
    pub failures: usize,
}

/// Random finite groups of order at most 256: enumerated hom counts
/// against the gcd formula and `|Hom(A, B)|`, the structure check on every
/// pair, and the additivity check on every triple.
pub fn oracle_suite(seed: u64, pairs: usize, triples: usize, bound: u64) -> Result<SuiteReport, OracleError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    for _ in 0..pairs {
        let a = random::finite_group(&mut rng, 256);
        let b = random::finite_group(&mut rng, 256);
        let listed = BigUint::from(enumerate_homs(&a, &b, bound)?.len());
        let ok = listed == hom_count(&a, &b)?
            && Some(&listed) == hom_group(&a, &b).order().as_ref()
            && hom_structure_check(&a, &b, bound)?;
        report.checked += 1;
        report.failures += usize::from(!ok);
    }
    for _ in 0..triples {
        let g: Vec<FgGroup> = (0..3).map(|_| random::finite_group(&mut rng, 64)).collect();
        report.checked += 1;
        report.failures += usize::from(!finite_sum_additivity_check(&g[0], &g[1], &g[2], bound)?);
    }
    Ok(report)
}
