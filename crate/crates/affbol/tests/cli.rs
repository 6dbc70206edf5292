//! End-to-end CLI tests: the exit-code contract (0 verified/success,
//! 1 violations/invalid certificate, 2 usage errors, 3 budget exhaustion),
//! report shape, and file handling.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affbol"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn affbol")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

fn write_construct(dir: &Path, n: u32, q: u32) -> std::path::PathBuf {
    let path = dir.join(format!("fam-{q}-{n}.json"));
    let out = bin()
        .args(["construct", "--n", &n.to_string(), "--q", &q.to_string(), "-o"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    path
}

#[test]
fn construct_then_verify_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 3);

    let out = bin().arg("verify").arg(&fam).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "verify");
    assert_eq!(report["result"]["m"], 4);
    assert_eq!(report["result"]["verdict"], "ok");
    assert_eq!(report["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn construct_to_stdout_parses_back() {
    let out = run(&["construct", "--n", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = affbol::fileio::FamilyFile::parse(&text).unwrap();
    assert_eq!(parsed.len(), 4);
    assert_eq!(parsed.to_canonical_string(), text, "stdout is canonical");
}

#[test]
fn certify_constructed_family() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 3);

    let out = bin().arg("certify").arg(&fam).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["verdict"], "valid");
    assert_eq!(report["result"]["p"], 2);
    assert_eq!(report["result"]["implied_bound"], 10);
    assert_eq!(report["result"]["rank"], 4);
    // m = 4 <= 64, so the full matrix is included.
    assert_eq!(report["result"]["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn certify_q2_family_is_a_typed_failure() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 2);

    let out = bin().arg("certify").arg(&fam).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let msg = report["error"].as_str().unwrap();
    assert!(msg.contains("q = 2"), "message names the q = 2 failure: {msg}");
}

#[test]
fn certify_rejects_bad_prime() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 3);

    let out = bin().args(["certify", "--p", "3"]).arg(&fam).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert!(report["error"].as_str().unwrap().contains("not a prime divisor"));
}

#[test]
fn verify_reports_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{
            "format_version": 1,
            "geometry": "sets",
            "ground_size": 4,
            "mode": "skew",
            "pairs": [{"A": [1], "B": [1]}]
        }"#,
    )
    .unwrap();

    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["verdict"], "violations");
    let violations = report["result"]["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["kind"], "diagonal_nonempty");
    assert_eq!(violations[0]["i"], 1);
    assert_eq!(violations[0]["witness"], 1);
}

#[test]
fn mode_override_changes_the_verdict() {
    // Skew-valid but symmetric-violating: A_2 ∩ B_1 = ∅.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("skewonly.json");
    std::fs::write(
        &path,
        r#"{
            "format_version": 1,
            "geometry": "sets",
            "ground_size": 5,
            "mode": "skew",
            "pairs": [{"A": [1], "B": [2]}, {"A": [3], "B": [1]}]
        }"#,
    )
    .unwrap();

    let skew = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(skew.status.code(), Some(0));

    let symmetric = bin()
        .args(["verify", "--mode", "symmetric"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(symmetric.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    // Unknown subcommand (clap).
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing file.
    let out = run(&["verify", "/nonexistent/family.json"]);
    assert_eq!(out.status.code(), Some(2));

    // q = 6 surfaces as NotPrimePower at parse time.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q6.json");
    std::fs::write(
        &path,
        r#"{"format_version": 1, "geometry": "affine", "mode": "skew",
            "n": 2, "pairs": [], "q": 6}"#,
    )
    .unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"]
        .as_str()
        .unwrap()
        .contains("not a prime power"));

    // Unknown fields are rejected.
    let path = dir.path().join("extra.json");
    std::fs::write(
        &path,
        r#"{"format_version": 1, "geometry": "sets", "ground_size": 3,
            "mode": "skew", "pairs": [], "surprise": true}"#,
    )
    .unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Version mismatch.
    let path = dir.path().join("v9.json");
    std::fs::write(
        &path,
        r#"{"format_version": 9, "geometry": "sets", "ground_size": 3,
            "mode": "skew", "pairs": []}"#,
    )
    .unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // construct with a non-prime-power order.
    let out = run(&["construct", "--n", "2", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_completes_with_exit_0_and_checkpoint_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ckpt.json");

    let out = bin()
        .args(["search", "--n", "1", "--q", "3", "--checkpoint"])
        .arg(&ckpt)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["best_m"], 2);
    assert_eq!(report["result"]["optimal"], true);
    assert!(ckpt.exists());

    // Resume: all seeds already exhausted, same answer, no new work.
    let out = bin()
        .args(["search", "--n", "1", "--q", "3", "--checkpoint"])
        .arg(&ckpt)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["best_m"], 2);
    assert_eq!(report["result"]["resumed_from_checkpoint"], true);
    assert_eq!(report["result"]["stats"]["expanded"], 0);
}

#[test]
fn search_budget_exhaustion_exits_3() {
    let out = run(&["search", "--n", "2", "--q", "3", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["optimal"], false);
    // The construction seed keeps a valid witness available.
    assert!(report["result"]["best_m"].as_u64().unwrap() >= 4);
}

#[test]
fn search_dimension_filters_apply() {
    // Points only on both sides: the optimum on the line drops out of the
    // hyperplane construction but filters still admit it for n = 1
    // (hyperplanes of the line are points).
    let out = run(&[
        "search", "--n", "1", "--q", "4", "--dims-a", "0", "--dims-b", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["best_m"], 2);

    // Lines only on the A side in the plane.
    let out = run(&[
        "search", "--n", "2", "--q", "2", "--dims-a", "1", "--dims-b", "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let witness_pairs = report["result"]["witness"]["pairs"].as_array().unwrap();
    for pair in witness_pairs {
        assert_eq!(pair["A"]["basis"].as_array().unwrap().len(), 1, "A is a line");
    }
}

#[test]
fn projective_search_reports_conjecture_comparison() {
    let out = run(&["search", "--n", "1", "--q", "2", "--geometry", "projective"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["best_m"], 2);
    assert_eq!(report["result"]["conjecture"]["bound"], 2);
    assert_eq!(report["result"]["conjecture"]["exceeded"], false);
    assert_eq!(report["result"]["witness"]["geometry"], "projective");
}

#[test]
fn enumerate_counts_lines_of_the_plane() {
    let out = run(&["enumerate", "--n", "2", "--q", "3", "--dims", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["count"], 12);
    assert_eq!(report["result"]["subspaces"].as_array().unwrap().len(), 12);
}

#[test]
fn enumerate_budget_exhaustion_exits_3() {
    let out = bin()
        .args(["enumerate", "--n", "2", "--q", "3"])
        .env("AFFBOL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sum_on_the_tight_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.json");
    std::fs::write(
        &path,
        r#"{
            "format_version": 1,
            "geometry": "sets",
            "ground_size": 4,
            "mode": "symmetric",
            "pairs": [
                {"A": [0, 1], "B": [2, 3]},
                {"A": [0, 2], "B": [1, 3]},
                {"A": [0, 3], "B": [1, 2]},
                {"A": [1, 2], "B": [0, 3]},
                {"A": [1, 3], "B": [0, 2]},
                {"A": [2, 3], "B": [0, 1]}
            ]
        }"#,
    )
    .unwrap();

    let out = bin().arg("sum").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["sum"], "1/1");
    assert_eq!(report["result"]["sum_le_one"], true);

    // Skew mode is refused: the inequality needs the symmetric hypothesis.
    let skew = dir.path().join("tight-skew.json");
    let text = std::fs::read_to_string(&path).unwrap().replace("symmetric", "skew");
    std::fs::write(&skew, text).unwrap();
    let out = bin().arg("sum").arg(&skew).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sum_rejects_non_sets_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 3);
    let out = bin().arg("sum").arg(&fam).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timings_flag_adds_wall_time_and_breaks_nothing_else() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write_construct(dir.path(), 2, 3);

    let plain = bin().arg("verify").arg(&fam).output().unwrap();
    let timed = bin().args(["--timings", "verify"]).arg(&fam).output().unwrap();
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(timed.status.code(), Some(0));

    let plain = stdout_json(&plain);
    let timed = stdout_json(&timed);
    assert!(plain.get("wall_time_ms").is_none(), "stable by default");
    assert!(timed.get("wall_time_ms").is_some());
    assert_eq!(plain["result"], timed["result"]);
}
