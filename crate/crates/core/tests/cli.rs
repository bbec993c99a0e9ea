use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_prolfa");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).env_remove("PROLFA_THREADS").output().unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    let out = run(dir, args);
    out.status.code().unwrap_or_else(|| panic!("killed: {out:?}"))
}

fn synth(dir: &Path) {
    assert_eq!(code(dir, &["synth", "--output", "d.plfa", "--seed", "3"]), 0);
}

fn without_line(text: &str, key: &str) -> String {
    text.lines().filter(|l| !l.contains(key)).collect::<Vec<_>>().join("\n")
}

#[test]
fn pipeline_commands_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    assert!(d.join("d.plfa.run.cfg").exists());
    assert_eq!(code(d, &["train", "--input", "d.plfa", "--output", "m.plfm"]), 0);
    let trace = std::fs::read_to_string(d.join("m.plfm.trace.csv")).unwrap();
    assert!(trace.lines().any(|l| l.starts_with("k,objective")), "{trace}");
    assert_eq!(code(d, &["aggregate", "--input", "d.plfa", "--model", "m.plfm", "--output", "r.csv"]), 0);
    let reps = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert_eq!(reps.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert_eq!(code(d, &["eval", "--input", "d.plfa", "--output", "e.txt", "--repetitions", "2"]), 0);
    let report = std::fs::read_to_string(d.join("e.txt")).unwrap();
    assert!(report.contains("repetitions=2") && report.contains("seeds=0,1"), "{report}");
    let args = ["sweep", "--input", "d.plfa", "--output", "s.csv", "--grid", "d_bar=2,4", "--repetitions", "1"];
    assert_eq!(code(d, &args), 0);
    assert_eq!(std::fs::read_to_string(d.join("s.csv")).unwrap().lines().filter(|l| !l.starts_with('#')).count(), 3);
    let args = ["bench", "--output", "t.csv", "--bench-N", "100,200", "--dim", "2", "--repeats", "1"];
    assert_eq!(code(d, &args), 0);
}

#[test]
fn iteration_cap_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let args = ["train", "--input", "d.plfa", "--output", "m.plfm", "--max-outer", "1", "--tol-outer", "1e-12"];
    assert_eq!(code(dir.path(), &args), 2);
    assert!(dir.path().join("m.plfm").exists());
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    assert_eq!(code(d, &["eval", "--input", "d.plfa", "--output", "e.txt", "--k", "0"]), 3);
    assert_eq!(code(d, &["sweep", "--input", "d.plfa", "--output", "s.csv", "--grid", "mu=1,2"]), 3);
    assert_eq!(code(d, &["sweep", "--input", "d.plfa", "--output", "s.csv", "--grid", "d_bar=2,x"]), 3);
    assert_eq!(code(d, &["train", "--input", "d.plfa", "--output", "m.plfm", "--tol-outer", "0"]), 3);
    assert_eq!(code(d, &["eval", "--input", "d.plfa", "--output", "e.txt", "--metric", "minkowski", "--p", "0.5"]), 3);
    assert_eq!(code(d, &["frobnicate"]), 3);
}

#[test]
fn minkowski_exponent_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let args = ["eval", "--input", "d.plfa", "--output", "e.txt", "--metric", "minkowski", "--p", "3", "--repetitions", "1"];
    assert_eq!(code(dir.path(), &args), 0);
    let report = std::fs::read_to_string(dir.path().join("e.txt")).unwrap();
    assert!(report.contains("# metric=minkowski") && report.contains("# p=3"), "{report}");
}

#[test]
fn missing_and_corrupt_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["train", "--input", "nope.plfa", "--output", "m.plfm"]), 6);
    std::fs::write(d.join("bad.plfa"), b"not a dataset").unwrap();
    assert_eq!(code(d, &["train", "--input", "bad.plfa", "--output", "m.plfm"]), 4);
    synth(d);
    let out = run(d, &["train", "--input", "d.plfa", "--output", "m.plfm", "--semi"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("label mask"));
}

#[test]
fn semi_supervised_from_a_masked_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["synth", "--output", "d.plfa", "--labeled-fraction", "0.2"]), 0);
    assert_eq!(code(d, &["train", "--input", "d.plfa", "--output", "m.plfm", "--semi"]), 0);
    let args = ["aggregate", "--input", "d.plfa", "--model", "m.plfm", "--output", "u.csv", "--unlabeled"];
    assert_eq!(code(d, &args), 0);
    let text = std::fs::read_to_string(d.join("u.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);
}

#[test]
fn runs_are_deterministic_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    assert_eq!(code(d, &["train", "--input", "d.plfa", "--output", "a.plfm", "--prototypes", "3", "--seed", "5"]), 0);
    assert_eq!(code(d, &["train", "--input", "d.plfa", "--output", "b.plfm", "--prototypes", "3", "--seed", "5"]), 0);
    let a = std::fs::read(d.join("a.plfm")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.plfm")).unwrap());

    assert_eq!(code(d, &["train", "--config", "a.plfm.run.cfg", "--output", "c.plfm"]), 0);
    assert_eq!(a, std::fs::read(d.join("c.plfm")).unwrap());

    let threaded = Command::new(BIN)
        .current_dir(d)
        .args(["train", "--input", "d.plfa", "--output", "t.plfm", "--prototypes", "3", "--seed", "5"])
        .env("PROLFA_THREADS", "1")
        .status()
        .unwrap();
    assert!(threaded.success());
    assert_eq!(a, std::fs::read(d.join("t.plfm")).unwrap());

    for out in ["e1.txt", "e2.txt"] {
        assert_eq!(code(d, &["eval", "--input", "d.plfa", "--output", out, "--repetitions", "3", "--k", "3"]), 0);
    }
    let strip = |p: &str| {
        let t = std::fs::read_to_string(d.join(p)).unwrap();
        without_line(&without_line(&t, "seconds="), "output=")
    };
    assert_eq!(strip("e1.txt"), strip("e2.txt"));
}

#[test]
fn csv_input_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut x = String::from("sample,f1,f2\n");
    let mut y = String::new();
    for s in 0..6 {
        let c = s % 2;
        for j in 0..5 {
            let off = if c == 0 { 0.0 } else { 8.0 };
            x.push_str(&format!("s{s},{},{}\n", off + j as f64 * 0.1, off - s as f64 * 0.2));
        }
        y.push_str(&format!("s{s},{c}\n"));
    }
    std::fs::write(d.join("x.csv"), x).unwrap();
    std::fs::write(d.join("y.csv"), y).unwrap();
    assert_eq!(code(d, &["train", "--input", "x.csv", "--labels", "y.csv", "--output", "m.plfm"]), 0);
    let args = ["aggregate", "--input", "x.csv", "--labels", "y.csv", "--model", "m.plfm", "--output", "r.csv"];
    assert_eq!(code(d, &args), 0);
    let text = std::fs::read_to_string(d.join("r.csv")).unwrap();
    let ids: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, vec!["s0", "s1", "s2", "s3", "s4", "s5"]);
}
