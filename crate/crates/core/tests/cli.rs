mod common;

use std::path::Path;
use std::process::{Command, Output};

use aeroqa::fusion_eval::{EvalReport, Source, SystemResponse};
use common::{built_data_dir, fixtures};

fn aeroqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aeroqa")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_writes_artifacts_and_stats() {
    let out = tempfile::tempdir().unwrap();
    let f = fixtures();
    let o = aeroqa(&[
        "build",
        "--reports",
        s(&f.join("reports")),
        "--patterns",
        s(&f.join("patterns.json")),
        "--taxonomy",
        s(&f.join("taxonomy.txt")),
        "--out",
        s(out.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["kg.nt", "passages.json", "passages.jsonl", "stats.json"] {
        assert!(out.path().join(name).is_file(), "{name} missing");
    }
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("177"), "{table}");
}

#[test]
fn build_on_empty_directory_succeeds() {
    let reports = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = aeroqa(&[
        "build",
        "--reports",
        s(reports.path()),
        "--patterns",
        s(&fixtures().join("patterns.json")),
        "--out",
        s(out.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out.path().join("kg.nt")).unwrap().trim(), "");
}

#[test]
fn build_names_malformed_report_and_fails() {
    let reports = tempfile::tempdir().unwrap();
    let good = fixtures().join("reports/ERA02LA047.txt");
    std::fs::copy(&good, reports.path().join("ERA02LA047.txt")).unwrap();
    std::fs::write(reports.path().join("broken.txt"), "no header block here\n").unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = aeroqa(&[
        "build",
        "--reports",
        s(reports.path()),
        "--patterns",
        s(&fixtures().join("patterns.json")),
        "--out",
        s(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken.txt"), "{}", stderr(&o));
    // the good report is still built
    assert!(!std::fs::read_to_string(out.path().join("kg.nt")).unwrap().is_empty());
}

fn ask_json(data: &Path, question: &str, extra: &[&str]) -> SystemResponse {
    let mut args = vec!["ask", question, "--data", s(data), "--json"];
    args.extend(extra);
    let o = aeroqa(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn ask_puts_kg_answers_first() {
    let data = built_data_dir();
    let resp = ask_json(
        data.path(),
        "Which accidents involved aircraft operated by Johnny Thornley and manufactured by Subaru?",
        &[],
    );
    assert_eq!(resp.items[0].source, Source::Kg);
    assert_eq!(resp.items[0].text, "ERA05FA112");
    assert!(resp.items.len() <= 10);
}

#[test]
fn kg_abstention_hands_every_slot_to_passages() {
    let data = built_data_dir();
    let q = "What did the pilot report about the fuel gauges?";
    let hybrid = ask_json(data.path(), q, &[]);
    assert_eq!(hybrid.count(Source::Kg), 0);
    assert!(hybrid.count(Source::Dl) > 5, "{:?}", hybrid.answers());
    assert_eq!(hybrid, ask_json(data.path(), q, &["--system", "dl"]));
}

#[test]
fn ask_single_module_and_explain() {
    let data = built_data_dir();
    let kg = ask_json(data.path(), "Who operated ERA05FA112?", &["--system", "kg"]);
    assert_eq!(kg.answers(), ["Johnny Thornley"]);

    let o = aeroqa(&["ask", "How many accidents occurred in 2002?", "--data", s(data.path()), "--explain"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("COUNT(DISTINCT ?x)"), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("1. [KG] 2"));
}

#[test]
fn ask_without_build_explains_what_to_do() {
    let empty = tempfile::tempdir().unwrap();
    let o = aeroqa(&["ask", "Who operated ERA05FA112?", "--data", s(empty.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("aeroqa build"), "{}", stderr(&o));
}

#[test]
fn ask_rejects_bad_tau() {
    let data = built_data_dir();
    let o = aeroqa(&["ask", "Who operated ERA05FA112?", "--data", s(data.path()), "--tau", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_writes_three_reports_and_table() {
    let data = built_data_dir();
    let out = data.path().join("report.json");
    let o = aeroqa(&[
        "eval",
        "--testset",
        s(&fixtures().join("testset.json")),
        "--data",
        s(data.path()),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let reports: Vec<EvalReport> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.system.as_str()).collect();
    assert_eq!(names, ["KGQA", "DLQA", "Hybrid"]);
    let golden: Vec<EvalReport> =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("golden/eval_report.json")).unwrap()).unwrap();
    assert_eq!(reports, golden);
    let table = std::fs::read_to_string(out.with_extension("txt")).unwrap();
    assert_eq!(table, String::from_utf8(o.stdout).unwrap());
    assert!(table.contains("SemAcc"));
}

#[test]
fn eval_rejects_empty_testset() {
    let data = built_data_dir();
    let empty = data.path().join("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    let o = aeroqa(&["eval", "--testset", s(&empty), "--data", s(data.path()), "--out", s(&data.path().join("r.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"), "{}", stderr(&o));
}
