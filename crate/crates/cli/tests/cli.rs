use std::process::Command;

use brauer_cli::grammar::{
    format_symbol_sum, parse_class, parse_list, parse_omega2, parse_ratfunc, parse_symbol_sum,
};
use brauer_cli::report::format_class;
use brauer_cli::request::{CommandKind, Payload};
use brauer_cli::{execute, parse_request, CliError, Status};
use brauer_core::cdvf::CdvfModel;
use brauer_core::differentials::format_omega2;
use brauer_core::sampling::{random_br1_class, random_omega2, random_ratfunc, random_symbol_sum};
use brauer_core::{Error, FieldDescriptor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn argv(s: &[&str]) -> Vec<String> {
    std::iter::once("brauer")
        .chain(s.iter().copied())
        .map(String::from)
        .collect()
}

#[test]
fn requests_resolve() {
    let r = parse_request(argv(&[
        "k2-vanish",
        "--p",
        "2",
        "--vars",
        "t1,t2",
        "sym(t1, t2)",
    ]))
    .unwrap();
    assert_eq!(r.command, CommandKind::K2Vanish);
    assert!(matches!(r.payload, Payload::Symbols { ref sum, .. } if sum.len() == 1));

    let r = parse_request(argv(&[
        "index-bounds",
        "--p",
        "2",
        "--vars",
        "t1,t2,t3,t4",
        "sym(t1,t2)+sym(t3,t4)",
    ]))
    .unwrap();
    assert!(matches!(r.payload, Payload::Class(ref c) if c.symbol_count() == 2));

    let e = parse_request(argv(&[
        "normal-form",
        "--p",
        "3",
        "--vars",
        "t",
        "sym(t, t)",
    ]))
    .unwrap_err();
    assert!(matches!(e, CliError::Core(Error::UnsupportedPrime(3))));
    // residue-field commands accept odd primes
    assert!(parse_request(argv(&["k2-vanish", "--p", "3", "--vars", "t", "sym(t, 2)"])).is_ok());
    assert!(parse_request(argv(&["k2-vanish", "--p", "7", "sym(1, 1)"])).is_err());
    assert!(parse_request(argv(&["frobnicate"])).is_err());
    assert!(parse_request(argv(&["brdim", "sym(2, 2)"])).is_err());
    assert!(parse_request(argv(&["omega-cert", "--vars", "t", "0"])).is_err());
}

#[test]
fn parse_errors_point_at_the_input() {
    let e = parse_request(argv(&["k2-vanish", "--vars", "t1,t2", "sym(t1,\n  t3)"])).unwrap_err();
    match e {
        CliError::Parse { source, .. } => assert_eq!((source.line, source.column), (2, 3)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn spec_examples_execute() {
    let run = |args: &[&str]| execute(&parse_request(argv(args)).unwrap());
    let r = run(&["k2-vanish", "--vars", "t", "sym(t, t)"]);
    assert_eq!(r.verdict.as_deref(), Some("zero"));
    let r = run(&["k2-vanish", "--p", "3", "--vars", "t1,t2", "sym(t1, t2)"]);
    assert_eq!(r.verdict.as_deref(), Some("nonzero"));

    let r = run(&[
        "index-bounds",
        "--vars",
        "t1,t2,t3,t4",
        "sym(t1,t2)+sym(t3,t4)",
    ]);
    assert_eq!(r.result["lower_exp"], 2);
    assert_eq!(r.result["upper_exp"], 2);

    let r = run(&["brdim", "--vars", "t1"]);
    assert_eq!(
        (r.result["lower"].as_u64(), r.result["upper"].as_u64()),
        (Some(1), Some(2))
    );

    let r = run(&["normal-form", "--vars", "t", "sym(3*t, 2*t)"]);
    assert_eq!(r.status, Status::Rejected);
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.error.as_ref().unwrap().kind, "not_in_br1");
    let r = run(&["normal-form", "--vars", "t", "--reduce", "sym(3*t, 2*t)"]);
    assert_eq!(r.status, Status::Ok);
    assert_eq!(r.result["hilbert_checks"]["agree"], 20);

    let r = run(&["split-field", "--vars", "t1,t2"]);
    assert_eq!(r.result["degree"], 16);

    let r = run(&[
        "omega-cert",
        "--vars",
        "t1,t2",
        "dt1^dt2",
        "--gens",
        "t1,t1^2",
    ]);
    assert_eq!(r.error.as_ref().unwrap().kind, "dependent_generators");
}

fn strip_timing(json: &str) -> String {
    json.lines()
        .filter(|l| !l.contains("\"timing_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &[
            "normal-form",
            "--vars",
            "t1,t2",
            "--seed",
            "7",
            "sym(5*t1, t2) + sym(pi, 3)",
        ][..],
        &[
            "omega-cert",
            "--vars",
            "t1,t2,t3",
            "(t2) * dt1^dt2",
            "--gens",
            "t1",
        ],
        &["index-bounds", "--vars", "t1,t2", "sym(t1, t2)"],
    ] {
        let a = execute(&parse_request(argv(args)).unwrap()).to_json();
        let b = execute(&parse_request(argv(args)).unwrap()).to_json();
        assert_eq!(strip_timing(&a), strip_timing(&b));
        assert!(a.contains("\"schema_version\": 1"));
    }
}

#[test]
fn printed_values_reparse() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2, 3, 5] {
        for n in 1..=3 {
            let k = FieldDescriptor::standard(p, n).unwrap();
            for _ in 0..20 {
                let f = random_ratfunc(&mut rng, n, p, 3);
                assert_eq!(parse_ratfunc(&k.format(&f), &k).unwrap(), f);
                let s = random_symbol_sum(&mut rng, n, p, 3, 2);
                assert_eq!(parse_symbol_sum(&format_symbol_sum(&s, &k), &k).unwrap(), s);
                let a = random_omega2(&mut rng, n, p, 2);
                assert_eq!(parse_omega2(&format_omega2(&k, &a), &k).unwrap(), a);
            }
            let g: Vec<_> = (0..n).map(|j| k.var(j)).collect();
            let shown: Vec<_> = g.iter().map(|x| k.format(x)).collect();
            assert_eq!(parse_list(&shown.join(", "), &k).unwrap(), g);
        }
    }
    for n in 0..=2 {
        let m = CdvfModel::new(FieldDescriptor::standard(2, n).unwrap()).unwrap();
        for _ in 0..20 {
            let c = random_br1_class(&mut rng, &m).unwrap();
            assert_eq!(parse_class(&format_class(&c), &m).unwrap(), c);
            assert_eq!(parse_class(&c.format(), &m).unwrap(), c);
        }
    }
}

fn run_binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn exit_codes() {
    let (code, out) = run_binary(&["k2-vanish", "--vars", "t1,t2", "sym(t1, t2 + 1)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "nonzero");

    assert_eq!(
        run_binary(&["normal-form", "--vars", "t", "sym(t, pi)"]).0,
        2
    );
    assert_eq!(run_binary(&["normal-form", "--p", "3", "sym(2, 2)"]).0, 1);
    assert_eq!(run_binary(&["k2-vanish", "--vars", "t", "sym(t"]).0, 1);
    assert_eq!(run_binary(&["--help"]).0, 0);

    let (code, out) = run_binary(&["brdim", "--text"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: [0, 1]"));
}
