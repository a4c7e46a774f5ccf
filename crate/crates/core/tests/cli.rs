use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kga")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/lymphokine").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn strip_timing(report: &str) -> String {
    report.split("\n[timing]").next().unwrap().to_string()
}

#[test]
fn match_threshold_one_keeps_exact_label() {
    let d = tempfile::tempdir().unwrap();
    let out = path(&d, "c.tsv");
    let o = kga(&[
        "match",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--out",
        &out,
        "--candidate-threshold",
        "1.0",
    ]);
    assert!(o.status.success());
    let rows = fs::read_to_string(out).unwrap().lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1);
}

#[test]
fn unreadable_input_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let o =
        kga(&["match", "--source", "/nonexistent.ttl", "--target", &fixture("nci.ttl"), "--out", &path(&d, "c.tsv")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent.ttl"));
}

#[test]
fn parse_error_exits_2_with_position() {
    let d = tempfile::tempdir().unwrap();
    let bad = path(&d, "bad.ttl");
    fs::write(&bad, "@prefix owl: <http://www.w3.org/2002/07/owl#> .\nex:A a owl:Class .\n").unwrap();
    let o = kga(&["match", "--source", &bad, "--target", &fixture("nci.ttl"), "--out", &path(&d, "c.tsv")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.ttl:2:1: error"));
}

#[test]
fn bad_flag_value_exits_2() {
    let o = kga(&["repair", "--mode", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hard_repair_report_names_the_conflict() {
    let d = tempfile::tempdir().unwrap();
    let (out, rep) = (path(&d, "r.tsv"), path(&d, "report.txt"));
    let o = kga(&[
        "repair",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
        "--mode",
        "hard",
        "--out",
        &out,
        "--report",
        &rep,
    ]);
    assert!(o.status.success());
    let report = fs::read_to_string(&rep).unwrap();
    let line = report.lines().find(|l| l.starts_with("rejected-inconsistent")).unwrap();
    assert!(line.contains("fma/Lymphokine\t"));
    assert!(line.ends_with("{http://purl.org/sig/ont/fma/Lymphokine = http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#Therapeutic_Lymphokine, http://purl.org/sig/ont/fma/Protein = http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#Protein}"));
    assert!(report.contains("objective_value = 1.000000"));
    assert!(report.contains("[timing]\nelapsed_ms = "));
}

#[test]
fn repair_report_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let run = |n: &str| {
        let (out, rep) = (path(&d, &format!("{n}.tsv")), path(&d, &format!("{n}.txt")));
        let o = kga(&[
            "repair",
            "--source",
            &fixture("fma.ttl"),
            "--target",
            &fixture("nci.ttl"),
            "--alignment",
            &fixture("candidates.tsv"),
            "--mode",
            "soft",
            "--gamma",
            "0.05",
            "--out",
            &out,
            "--report",
            &rep,
        ]);
        assert!(o.status.success());
        (fs::read_to_string(out).unwrap(), strip_timing(&fs::read_to_string(rep).unwrap()))
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn soft_iteration_cap_exits_3_and_still_writes() {
    let d = tempfile::tempdir().unwrap();
    let out = path(&d, "r.tsv");
    // neither mapping can reach the floor of 1, so one removal is not enough
    let weaker = path(&d, "weaker.tsv");
    fs::write(&weaker, fs::read_to_string(fixture("candidates.tsv")).unwrap().replace("1.000000", "0.900000")).unwrap();
    let o = kga(&[
        "repair",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &weaker,
        "--mode",
        "soft",
        "--gamma",
        "1.0",
        "--max-soft-iterations",
        "1",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(Path::new(&out).exists());
}

#[test]
fn none_mode_echoes_input() {
    let d = tempfile::tempdir().unwrap();
    let out = path(&d, "r.tsv");
    let o = kga(&[
        "repair",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
        "--mode",
        "none",
        "--out",
        &out,
    ]);
    assert!(o.status.success());
    let rows: Vec<String> =
        fs::read_to_string(out).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    let input: Vec<String> = fs::read_to_string(fixture("candidates.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    assert_eq!(rows, input);
}

#[test]
fn exact_flag_on_fixture() {
    let d = tempfile::tempdir().unwrap();
    let out = path(&d, "r.tsv");
    let o = kga(&[
        "repair",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
        "--exact",
        "--out",
        &out,
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert!(text.contains("fma/Protein\t"));
    assert!(!text.contains("fma/Lymphokine\t"));
}

#[test]
fn diagnose_reports() {
    let d = tempfile::tempdir().unwrap();
    let o = kga(&[
        "diagnose",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("unsat = 2\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with("\t2")).count(), 4);

    let only_m1 = path(&d, "m1.tsv");
    let cand = fs::read_to_string(fixture("candidates.tsv")).unwrap();
    fs::write(&only_m1, cand.lines().filter(|l| !l.contains("Lymphokine")).collect::<Vec<_>>().join("\n") + "\n")
        .unwrap();
    let empty = path(&d, "empty.tsv");
    fs::write(&empty, "").unwrap();
    for al in [only_m1, empty] {
        let o =
            kga(&["diagnose", "--source", &fixture("fma.ttl"), "--target", &fixture("nci.ttl"), "--alignment", &al]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.contains("unsat = 0\n"));
        assert!(text.contains("[unsat]\n# concept\tjustifications\n\n[entities]\n# entity\tunsat_count\n\n[timing]"));
    }
}

#[test]
fn eval_identical_files() {
    let o = kga(&["eval", "--alignment", &fixture("reference.tsv"), "--reference", &fixture("reference.tsv")]);
    assert!(o.status.success());
    let text = stdout(&o);
    for k in ["precision", "recall", "f1"] {
        assert!(text.contains(&format!("{k} = 1.000000")));
    }
}

#[test]
fn diff_same_graph_is_empty() {
    let o = kga(&["diff", "--kg1", &fixture("nci.ttl"), "--kg2", &fixture("nci.ttl")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 statements\n");
}

#[test]
fn diff_with_alignment_shows_unsatisfiability() {
    let o = kga(&[
        "diff",
        "--kg1",
        &fixture("fma.ttl"),
        "--kg2",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
    ]);
    let text = stdout(&o);
    assert!(text.contains("http://purl.org/sig/ont/fma/Lymphokine ⊑ ⊥\n"));
    assert!(text.ends_with("10 statements\n"));
}

#[test]
fn calibrate_prints_best_parameter() {
    let o = kga(&[
        "calibrate",
        "--source",
        &fixture("fma.ttl"),
        "--target",
        &fixture("nci.ttl"),
        "--alignment",
        &fixture("candidates.tsv"),
        "--reference",
        &fixture("reference.tsv"),
        "--mode",
        "hard",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("candidate_threshold = 0.000000\n"));
    assert!(text.contains("f1 = 0.666667\n"));
}

fn dir_digest(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().into(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn benchgen_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = kga(&[
            "benchgen",
            "--seed",
            "42",
            "--n-classes",
            "60",
            "--n-conflicts",
            "3",
            "--out-dir",
            &d.path().display().to_string(),
        ]);
        assert!(o.status.success());
    }
    let (da, db) = (dir_digest(a.path()), dir_digest(b.path()));
    assert_eq!(da.len(), 4);
    assert_eq!(da, db);
}

#[test]
fn benchgen_rejects_too_many_conflicts() {
    let d = tempfile::tempdir().unwrap();
    let o = kga(&["benchgen", "--n-classes", "8", "--n-conflicts", "3", "--out-dir", &d.path().display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
}
