use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shellings"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shellings-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn hexagon_file_metric_axioms() {
    let text = stdout(&run(&["catalog", "@hexagon"]));
    let path = scratch("hexagon.cplx", &text);
    let out = run(&[
        "check-axioms",
        path.to_str().unwrap(),
        "--structure",
        "metric",
    ]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    let checks: Vec<&str> = s.lines().filter(|l| l.starts_with("CHECK")).collect();
    assert!(checks.len() >= 14);
    assert!(checks.iter().all(|l| l.contains(" PASS")), "{s}");
}

#[test]
fn building_duality_table() {
    let out = run(&["building", "--n", "4", "--q", "2", "--check", "duality"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    for line in [
        "h[{1}] = q + q^2 + q^3",
        "h[{2}] = q + 2q^2 + q^3 + q^4",
        "h[{1,2}] = q^3 + q^4 + q^5",
        "h[{1,3}] = q^2 + q^3 + 2q^4 + q^5",
        "h[{1,2,3}] = q^6",
    ] {
        assert!(s.lines().any(|l| l == line), "missing {line}\n{s}");
    }
}

#[test]
fn expect_fail_inverts_exit() {
    let plain = run(&["catalog", "@petersen", "--emit", "check"]);
    assert_eq!(plain.status.code(), Some(1));
    assert!(stdout(&plain).contains("CHECK gate FAIL"));
    let inverted = run(&["--expect-fail", "catalog", "@petersen", "--emit", "check"]);
    assert_eq!(inverted.status.code(), Some(0));
    let passing = run(&["--expect-fail", "check-axioms", "@hexagon"]);
    assert_eq!(passing.status.code(), Some(1));
}

#[test]
fn arrangement_commutativity_lines() {
    let out = run(&["arrangement", "--coxeter", "B3", "--check", "commutativity"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    for id in ["C(1,2)", "C(1,3)", "C(2,3)"] {
        assert!(s.contains(&format!("CHECK {id} PASS")), "{s}");
    }
    assert!(s.contains("48 chambers"));
}

#[test]
fn dehn_sommerville_fails_on_building() {
    let out = run(&["hvector", "@building:3:2", "--labelled"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{s}");
    assert!(s.contains("CHECK DS FAIL"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["building", "--n", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["building", "--n", "3", "--q", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check-axioms", "/nonexistent/x.cplx"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check-axioms", "@dodecahedron"]).status.code(),
        Some(2)
    );
    let bad = scratch("bad.cplx", "vertex a\nvertex a\n");
    let out = run(&["check-axioms", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn bundled_structure_round_trips_through_file() {
    let cplx = scratch("ngon6.cplx", &stdout(&run(&["catalog", "@ngon:6"])));
    let st = scratch(
        "ngon6.st",
        &stdout(&run(&["catalog", "@ngon:6", "--emit", "structure"])),
    );
    let out = run(&[
        "check-axioms",
        cplx.to_str().unwrap(),
        "--structure",
        st.to_str().unwrap(),
    ]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    let check = stdout(&run(&["catalog", "@ngon:6", "--emit", "check"]));
    assert!(
        check.lines().any(|l| l.starts_with("non-metric: C=")),
        "{check}"
    );
}

#[test]
fn tsv_and_determinism() {
    let a = run(&["--format", "tsv", "hvector", "@hexagon", "--labelled"]);
    let b = run(&["--format", "tsv", "hvector", "@hexagon", "--labelled"]);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.lines().any(|l| l == "h[{s,t}]\t1"), "{s}");
    assert!(s.lines().any(|l| l == "h[{s}]\t2"), "{s}");
}

#[test]
fn walk_prints_exact_distribution() {
    let out = run(&["walk", "@coxeter:B3"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    let pis: Vec<&str> = s.lines().filter(|l| l.starts_with("pi ")).collect();
    assert_eq!(pis.len(), 48);
    assert!(pis.iter().all(|l| l.ends_with("= 1/48")));
}

#[test]
fn shelling_with_reverse() {
    let out = run(&["shell", "@ngon:5", "--reverse"]);
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{s}");
    assert!(s.starts_with("R e0 -> -\n"));
    assert!(s.contains("CHECK reverse-shelling PASS"));
}
