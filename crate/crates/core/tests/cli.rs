use std::process::Command as Proc;

use uptrans::cli::{emit_report, exit_code, parse_module, print_module, run_in, Command, Decl, Format, Report, Status};
use uptrans::stdlib;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_uptrans"))
}

fn write(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("uptrans-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn grammar_examples() {
    let d = parse_module("def idn : nat -> nat := fun x : nat => x").unwrap();
    assert!(matches!(&d[..], [Decl::Def { name, .. }] if name == "idn"));
    let d = parse_module("transport plus_N_comm from plus_comm blackbox").unwrap();
    assert!(matches!(&d[..], [Decl::Transport { name, source, .. }] if name == "plus_N_comm" && source == "plus_comm"));
    assert!(parse_module("").unwrap().is_empty());
    let d = parse_module("goal g : eq@0 nat O O by compute\naxiom a : forall x : nat, nat").unwrap();
    assert_eq!(d.len(), 2);
}

#[test]
fn parse_errors_carry_a_position() {
    let e = parse_module("def a : nat := O\nrelate type nat").unwrap_err();
    assert!(e.to_string().starts_with("2:"), "{}", e);
}

#[test]
fn print_parse_round_trip_on_shipped_modules() {
    for decls in [stdlib::prelude_decls().unwrap(), stdlib::corpus_decls().unwrap(), stdlib::replay_decls().unwrap()] {
        let text = print_module(&decls);
        assert_eq!(parse_module(&text).unwrap(), decls);
    }
}

#[test]
fn json_lines_field_order() {
    let r = Report::new("x", "def", Status::Ok);
    let line = emit_report(&[r], Format::JsonLines);
    let keys: Vec<usize> = ["\"name\"", "\"status\"", "\"steps\"", "\"axioms\"", "\"mode\""]
        .iter()
        .map(|k| line.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{}", line);
    assert!(line.contains("\"status\":\"ok\"") && line.contains("\"axioms\":[]"));
    assert_eq!(line.lines().count(), 1);
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let mut s = stdlib::load_session().unwrap();
    s.budget = 1000;
    let decls = parse_module("goal slow : eq@0 nat (pow (3 : nat) (5 : nat)) (243 : nat) by compute").unwrap();
    let reports = run_in(&mut s, Command::Bench, &decls);
    assert!(reports.iter().all(|r| r.status == Status::Inconclusive), "{:?}", reports);
    assert_eq!(exit_code(&reports), 0);
}

fn replay_json() -> String {
    let out = bin().args(["replay", "--format", "json-lines"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    text.lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("elapsed_ms");
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn replay_is_ok_and_deterministic() {
    let a = replay_json();
    assert_eq!(a, replay_json());
    assert!(a.lines().all(|l| l.contains("\"status\":\"ok\"")));
    let g = a.lines().find(|l| l.contains("\"name\":\"g_N\"")).unwrap();
    assert!(g.contains("\"axioms\":[\"funext\"]"), "{}", g);
}

#[test]
fn check_with_unrelated_constant_fails() {
    let p = write("unrelated.upt", "axiom u : nat -> nat\ndef h (n : nat) : nat := u n\n");
    let out = bin().arg("check").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fail") && text.contains("`u` has no relation"), "{}", text);
}

#[test]
fn parse_error_exits_2() {
    let p = write("broken.upt", "relate type nat\n");
    let out = bin().arg("transport").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("check").arg("/nonexistent/file.upt").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_check_passes_for_programs() {
    let out = bin().args(["check", "--format", "json-lines"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["square", "poly", "evalPoly", "sequence", "Lib", "g"] {
        let l = text.lines().find(|l| l.contains(&format!("\"name\":\"{}\"", name))).unwrap();
        assert!(l.contains("\"status\":\"ok\""), "{}", l);
    }
}

#[test]
fn export_round_trips() {
    let out = bin().arg("export").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(parse_module(&text).unwrap(), stdlib::prelude_decls().unwrap());
}
