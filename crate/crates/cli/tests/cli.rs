use std::fs;
use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use doldkit::Int;
use doldkit_cli::{execute, parse_bfile, run, Cli, CliError, Output, Report, Verdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_doldkit"))
}

fn report(args: &[&str]) -> Report {
    let cli = Cli::try_parse_from(std::iter::once("doldkit").chain(args.iter().copied())).unwrap();
    run(&cli, &mut std::io::empty()).unwrap().0
}

fn text(r: &Report, key: &str) -> String {
    match &r.outputs[key] {
        Output::Text(s) => s.clone(),
        other => panic!("{key} is {other:?}"),
    }
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("doldkit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn lucas_bfile(terms: usize) -> String {
    // OEIS-style offset 0: L_0 = 2, L_1 = 1, L_2 = 3, ...
    let mut s = String::from("# Lucas numbers\n");
    let (mut a, mut b) = (Int::from(2), Int::from(1));
    for n in 0..=terms {
        s.push_str(&format!("{n} {a}\n"));
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    s
}

#[test]
fn bfile_examples() {
    let w = parse_bfile("1 1\n2 3\n3 4").unwrap().window().unwrap();
    assert_eq!(w.0.to_string(), "(1, 3, 4)");
    assert!(w.1.is_empty());

    let (w, notices) = parse_bfile("# comment\n0 2\n1 1\n2 3")
        .unwrap()
        .window()
        .unwrap();
    assert_eq!(w.to_string(), "(1, 3)");
    assert_eq!(notices.len(), 1);

    assert!(matches!(
        parse_bfile("1 1\n1 2"),
        Err(CliError::NonMonotoneIndex(2))
    ));
    assert!(matches!(
        parse_bfile("1 1\n\n2 x"),
        Err(CliError::MalformedLine(3))
    ));
    assert!(matches!(
        parse_bfile("1 1 1"),
        Err(CliError::MalformedLine(1))
    ));
    assert!(matches!(
        parse_bfile("2 5\n3 6").unwrap().window(),
        Err(CliError::NoWindow(2))
    ));

    let (w, notices) = parse_bfile("1 1\n2 3\n4 7").unwrap().window().unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(notices.len(), 1);
}

#[test]
fn non_realizable_prefix_report() {
    let r = report(&[
        "check",
        "--criterion",
        "realizable",
        "--seq",
        "4,8,316,2320,16564,116920",
    ]);
    assert_eq!(r.verdict, Verdict::Fails);
    assert_eq!(r.witness_index.as_deref(), Some("6"));
    assert_eq!(r.witness_value.as_deref(), Some("58300/3"));
    assert_eq!(r.exit_code(), 1);

    let b = report(&[
        "transform",
        "--op",
        "B",
        "--seq",
        "4,8,316,2320,16564,116920",
    ]);
    assert_eq!(
        b.outputs["values"],
        Output::list(["4", "2", "104", "578", "3312", "58300/3"])
    );
}

#[test]
fn hankel_golden_report() {
    let r = report(&[
        "hankel",
        "--bound",
        "4",
        "--width",
        "0",
        "--raw",
        "--seq",
        "1 3 2 4 5 7 6 8 9",
    ]);
    assert_eq!(r.witness_index.as_deref(), Some("4"));
    assert_eq!(r.witness_value.as_deref(), Some("-256"));
}

#[test]
fn failure_report() {
    let r = report(&["failure", "--gen", "fib-power-2", "--N", "60"]);
    assert_eq!(text(&r, "failure"), "5");
    assert_eq!(r.verdict, Verdict::Ok);
    let r = report(&["failure", "--gen", "stirling2-5", "--N", "50"]);
    assert_eq!(text(&r, "failure"), "12");
}

#[test]
fn criteria_and_transforms() {
    let lucas = "1,3,4,7,11,18,29,47,76,123,199,322";
    for c in ["dold", "phi", "prime-power", "psi", "realizable"] {
        let r = report(&["check", "--criterion", c, "--seq", lucas]);
        assert_eq!(r.verdict, Verdict::Holds, "{c}");
        assert_eq!(r.exit_code(), 0);
    }
    let r = report(&[
        "check",
        "--criterion",
        "psi",
        "--psi",
        "1,1,2,2,4,2",
        "--seq",
        "1,2,3,4,5,6",
    ]);
    assert_eq!(r.witness_index.as_deref(), Some("2"));

    let r = report(&["transform", "--op", "C", "--seq", lucas]);
    let Output::List(c) = &r.outputs["values"] else {
        panic!()
    };
    assert_eq!(&c[..3], ["1", "1", "0"]);
    let r = report(&["transform", "--op", "invC", "--seq", "1 1 0 0 0"]);
    assert_eq!(r.outputs["values"], Output::list([1, 3, 4, 7, 11]));
}

#[test]
fn qdold_check() {
    // a_n(q) = 1 is q-Dold; (1, q) fails at n = 2 since q - 1 is -2 mod 1 + q.
    let r = report(&["check", "--criterion", "qdold", "--seq", "1; 1; 1; 1"]);
    assert_eq!(r.verdict, Verdict::Holds);
    let r = report(&["check", "--criterion", "qdold", "--seq", "1; 0,1"]);
    assert_eq!(r.verdict, Verdict::Fails);
    assert_eq!(r.witness_index.as_deref(), Some("2"));
    assert_eq!(r.witness_value.as_deref(), Some("-2"));
    let r = report(&["check", "--criterion", "qdold", "--seq", "1; 0,0,1"]);
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn realize_and_zeta() {
    let r = report(&["realize", "--seq", "1,3,4,7"]);
    assert_eq!(text(&r, "size"), "10");
    let r = report(&["realize", "--seq", "1,1,2"]);
    assert_eq!(r.verdict, Verdict::Fails);
    assert_eq!(r.witness_value.as_deref(), Some("1/3"));

    let r = report(&[
        "zeta",
        "--from",
        "fix",
        "--fit",
        "2",
        "--seq",
        "4,40,316,2320,16564,116920",
    ]);
    assert_eq!(text(&r, "fit"), "(1 - 3z)/(1 - 7z)");
    let r = report(&["zeta", "--from", "orbits", "--seq", "2,0,0,0"]);
    assert_eq!(r.outputs["coefficients"], Output::list([1, 2, 3, 4, 5]));
}

#[test]
fn trace_and_timechange() {
    let m = scratch("golden.txt", "2\n1 1\n1 0\n");
    let r = report(&["trace", "--matrix", m.to_str().unwrap(), "--N", "6"]);
    assert_eq!(r.outputs["traces"], Output::list([1, 3, 4, 7, 11, 18]));

    let r = report(&[
        "timechange",
        "--h",
        "mono:2:1",
        "--gen",
        "fibonacci",
        "--N",
        "4",
    ]);
    assert_eq!(r.outputs["values"], Output::list([1, 3, 34, 987]));
    // Without --N, the window covers every n with h(n) inside the input.
    let r = report(&["timechange", "--h", "gp:2", "--seq", "0,2,0,2,0,2,0,2"]);
    assert_eq!(r.outputs["indices"], Output::list([1, 4, 3, 8, 5]));
}

#[test]
fn classify_lucas_bfile() {
    let path = scratch("lucas.txt", &lucas_bfile(120));
    let cli = Cli::try_parse_from(["doldkit", "classify", path.to_str().unwrap()]).unwrap();
    let (r, notices) = run(&cli, &mut std::io::empty()).unwrap();
    assert_eq!(notices.len(), 1, "index 0 is dropped with a notice");
    assert_eq!(r.verdict, Verdict::Holds);
    assert_eq!(text(&r, "window"), "120");
    assert_eq!(text(&r, "dold"), "holds through 120");
    assert_eq!(text(&r, "realizable"), "holds through 120");
    assert!(text(&r, "periodic").starts_with("not periodic"));
    let Output::Map(zeta) = &r.outputs["zeta"] else {
        panic!()
    };
    let Output::Text(degree) = &zeta["degree"] else {
        panic!()
    };
    assert!(degree.parse::<usize>().unwrap() <= 2);
    let Output::Map(hankel) = &r.outputs["hankel"] else {
        panic!()
    };
    assert_eq!(hankel["vanishes_from"], Output::Text("2".into()));
}

#[test]
fn classify_periodic_window() {
    let path = scratch(
        "reg.txt",
        "1 0\n2 2\n3 3\n4 2\n5 0\n6 5\n7 0\n8 2\n9 3\n10 2\n11 0\n12 5\n",
    );
    let r = report(&["classify", path.to_str().unwrap(), "--bound", "6"]);
    assert_eq!(text(&r, "periodic"), "periodic {2: 1, 3: 1}");
}

#[test]
fn json_round_trip_is_byte_identical() {
    let m = scratch("rt.txt", "2\n2 1\n1 1\n");
    let path = scratch("rt-lucas.txt", &lucas_bfile(40));
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "check",
            "--criterion",
            "realizable",
            "--seq",
            "4,8,316,2320,16564,116920",
        ],
        vec![
            "zeta",
            "--from",
            "fix",
            "--fit",
            "1",
            "--seq",
            "4,40,316,2320",
        ],
        vec!["trace", "--matrix", m.to_str().unwrap()],
        vec!["classify", path.to_str().unwrap()],
        vec!["property", "--name", "duality", "--trials", "5"],
    ];
    for args in runs {
        let json = report(&args).to_json();
        let parsed = Report::from_json(&json).unwrap();
        assert_eq!(parsed.to_json(), json, "{args:?}");
        assert_eq!(report(&args).to_json(), json, "deterministic: {args:?}");
    }
}

#[test]
fn properties_hold() {
    for name in ["duality", "criteria", "hankel"] {
        let r = report(&["property", "--name", name, "--seed", "7", "--trials", "25"]);
        assert_eq!(r.verdict, Verdict::Holds, "{name}");
    }
}

#[test]
fn exit_codes() {
    let status = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(
        status(&["check", "--criterion", "dold", "--seq", "1,3,4,7"]),
        Some(0)
    );
    assert_eq!(
        status(&["check", "--criterion", "dold", "--seq", "1,2"]),
        Some(1)
    );
    assert_eq!(
        status(&["check", "--criterion", "dold", "--seq", "1,x"]),
        Some(2)
    );
    assert_eq!(
        status(&["check", "--criterion", "nope", "--seq", "1"]),
        Some(2)
    );
    assert_eq!(status(&["failure", "--gen", "catalan"]), Some(2));
    assert_eq!(
        status(&["hankel", "--bound", "4", "--width", "0", "--raw", "--seq", "1,2,3"]),
        Some(2)
    );
}

#[test]
fn stdin_and_notices() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = bin()
        .args(["check", "--criterion", "realizable", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1 3 4 7 11 18\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);

    let path = scratch("offset.txt", "0 2\n1 1\n2 3\n");
    let out = bin()
        .args([
            "check",
            "--criterion",
            "dold",
            "--bfile",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("dropped entry at index 0"));
}

#[test]
fn text_format_matches_report() {
    let cli = Cli::try_parse_from([
        "doldkit",
        "check",
        "--criterion",
        "realizable",
        "--seq",
        "1,1,2",
    ])
    .unwrap();
    let (rendered, _, code) = execute(&cli, &mut std::io::empty()).unwrap();
    assert_eq!(code, 1);
    assert!(
        rendered.contains("verdict: fails at 3 (witness 1/3)"),
        "{rendered}"
    );
}
