use clap::Parser;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use selfsmall::cli::{Cli, Command, Decide, Format, KindArg, Oracle, Query};
use selfsmall::expr::{parse_family, parse_fg_group, print_family};
use selfsmall::random;
use selfsmall::records::{read_verdict, write_verdict};
use selfsmall_core::decision::{check_certificate, decide_product_self_small};
use selfsmall_core::FgGroup;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() }
}

fn group() -> impl Strategy<Value = FgGroup> {
    (0usize..4, prop::collection::vec(2u64..200, 0..4))
        .prop_map(|(r, orders)| FgGroup::from_cyclic_orders(r, orders.into_iter().map(BigUint::from)))
        .prop_filter("nonzero", |g| !g.is_zero())
}

fn expr() -> impl Strategy<Value = String> {
    prop_oneof![
        group().prop_map(|g| g.to_string()),
        any::<u64>().prop_map(|s| print_family(&random::family(&mut StdRng::seed_from_u64(s), false))),
        Just("Q/Z".to_string()),
        Just("prod_Zp".to_string()),
    ]
}

fn command() -> impl Strategy<Value = Command> {
    let kind = prop_oneof![Just(KindArg::Sum), Just(KindArg::Product)];
    prop_oneof![
        expr().prop_map(|expr| Command::Normalize { expr }),
        (expr(), expr()).prop_map(|(a, b)| Command::Hom { a, b }),
        expr().prop_map(|expr| Command::Primary { expr }),
        expr().prop_map(|family| Command::Decide(Decide::Product { family })),
        prop::collection::vec(expr(), 1..4).prop_map(|members| Command::Decide(Decide::Sum { members })),
        (expr(), prop_oneof![Just("omega".to_string()), (1u32..9).prop_map(|n| n.to_string())], kind)
            .prop_map(|(base, count, kind)| Command::Decide(Decide::Power { base, count, kind })),
        (expr(), expr()).prop_map(|(a, b)| Command::Query(Query::Small { a, b })),
        expr().prop_map(|a| Command::Query(Query::Selfsmall { a })),
        (expr(), expr()).prop_map(|(a, b)| Command::Query(Query::Homzero { a, b })),
        (expr(), expr(), 0usize..5).prop_map(|(a, b, n)| Command::Oracle(Oracle::Support { a, b, n })),
        (expr(), expr(), expr()).prop_map(|(a, b, c)| Command::Oracle(Oracle::Additivity { a, b, c })),
        (0usize..500, 0usize..50).prop_map(|(pairs, triples)| Command::Oracle(Oracle::Suite { pairs, triples })),
        "[a-z]{1,8}\\.txt".prop_map(|f| Command::Check { file: f.into() }),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn groups_round_trip(g in group()) {
        prop_assert_eq!(parse_fg_group(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn families_round_trip(seed: u64) {
        let f = random::family(&mut StdRng::seed_from_u64(seed), false);
        prop_assert_eq!(parse_family(&print_family(&f)).unwrap(), f);
    }

    #[test]
    fn verdict_records_round_trip(seed: u64) {
        let f = random::family(&mut StdRng::seed_from_u64(seed), seed % 2 == 0);
        let v = decide_product_self_small(&f);
        let back = read_verdict(&write_verdict(&v)).unwrap();
        prop_assert!(check_certificate(&back));
        prop_assert_eq!(back, v);
    }

    #[test]
    fn commands_round_trip(c in command(), records: bool, bound in 1u64..10_000_000, seed: u64) {
        let cli = Cli {
            facts: None,
            format: if records { Format::Records } else { Format::Text },
            bound,
            seed,
            command: c,
        };
        prop_assert_eq!(Cli::try_parse_from(cli.to_args()).unwrap(), cli);
    }
}
