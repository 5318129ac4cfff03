use std::io::Write;
use std::process::{Command, Stdio};

use nicensus::cli::{run, Outcome, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn nicensus(args: &[&str]) -> Outcome {
    run(std::iter::once("nicensus").chain(args.iter().copied()))
}

fn result_of(o: &Outcome) -> Value {
    assert_eq!(o.code, EXIT_OK, "stderr: {}", o.stderr);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    doc["result"].clone()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nicensus"))
}

#[test]
fn decompose_diagonal_idempotent() {
    let r = result_of(&nicensus(&["decompose", "2 2 : 1 0 0 0"]));
    assert_eq!(r["fitting"]["inv_dim"], 1);
    assert_eq!(r["fitting"]["nil_dim"], 1);
}

#[test]
fn decompose_companion_has_no_nilpotent_part() {
    let r = result_of(&nicensus(&["decompose", "2 2 : 0 1 1 1"]));
    assert_eq!(r["fitting"]["nil_dim"], 0);
    assert_eq!(r["fitting"]["inv_dim"], 2);
}

#[test]
fn decompose_reads_json_from_stdin() {
    let mut child = bin().args(["decompose", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"field": "2", "d": 2, "entries": [1, 0, 0, 0]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["fitting"]["nil_dim"], 1);
}

#[test]
fn malformed_matrix_reports_position() {
    let o = nicensus(&["decompose", "2 2 : 1 0 7 0"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("parse error at byte 10"), "{}", o.stderr);
    let o = nicensus(&["decompose", "2 2 : 1 0 0"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("parse error"), "{}", o.stderr);
}

#[test]
fn pc_test_scalar_of_degree_two() {
    let r = result_of(&nicensus(&["pc-test", "--tower", "4/2", "1 4 : 2"]));
    assert_eq!(r["member"], true);
    assert_eq!(r["f"]["coeffs"], serde_json::json!([1, 1, 1]));
    assert_eq!(r["blowup_route_agrees"], true);
}

#[test]
fn pc_test_non_members() {
    for m in ["1 4 : 1", "2 4 : 1 0 0 1"] {
        let r = result_of(&nicensus(&["pc-test", "--tower", "4/2", m]));
        assert_eq!(r["member"], false, "{m}");
    }
}

#[test]
fn unknown_names_exit_with_usage_code() {
    let o = nicensus(&["verify", "no-such-suite"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("unknown suite"));
    assert_eq!(nicensus(&["census", "--spec", "nope", "--d", "2", "--q", "2"]).code, EXIT_USAGE);
    assert_eq!(nicensus(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(nicensus(&["census", "--spec", "all", "--d", "2", "--q", "6"]).code, EXIT_USAGE);
}

#[test]
fn help_and_version_succeed() {
    let o = nicensus(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("verify"));
    assert_eq!(nicensus(&["--version"]).code, EXIT_OK);
}

#[test]
fn census_anchor() {
    let r = result_of(&nicensus(&["census", "--spec", "primary-cyclic-some-f-not-t", "--d", "2", "--q", "2", "--flag-check"]));
    assert_eq!(r["n_total"], "11");
    assert_eq!(r["lhs"], serde_json::json!({"num": "11", "den": "6"}));
    assert_eq!(r["identity_holds"], true);
}

#[test]
fn verify_by_alias_and_name() {
    for name in ["theorem1", "flag-sum", "orbit-count"] {
        let o = nicensus(&["verify", name]);
        assert_eq!(o.code, EXIT_OK, "{name}: {}", o.stderr);
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["estimate", "--d", "2", "--q", "3", "--spec", "invertible", "--n", "9000", "--seed", "5"];
    let one = nicensus(&[&["--threads", "1"][..], &args[..]].concat());
    let four = nicensus(&[&["--threads", "4"][..], &args[..]].concat());
    assert_eq!(one.code, EXIT_OK, "{}", one.stderr);
    assert_eq!(one.stdout, four.stdout);
    let c1 = nicensus(&["--threads", "1", "census", "--spec", "all", "--d", "2", "--q", "3"]);
    let c3 = nicensus(&["--threads", "3", "census", "--spec", "all", "--d", "2", "--q", "3"]);
    assert_eq!(c1.stdout, c3.stdout);
}

#[test]
fn manifest_digest_matches_result() {
    let o = nicensus(&["quokka", "--c", "2", "--q", "2", "--r", "2"]);
    let doc: Value = serde_json::from_str(&o.stdout).unwrap();
    let m = &doc["manifest"];
    assert_eq!(m["subcommand"], "quokka");
    assert_eq!(m["outputs_digest"], nicensus::manifest::digest(&doc["result"]).as_str());
}

#[test]
fn estimate_writes_csv_and_json_files() {
    let dir = std::env::temp_dir().join(format!("nicensus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("rows.csv");
    let json = dir.join("doc.json");
    let o = nicensus(&[
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "estimate",
        "--instances",
        "2,2,2",
        "--n",
        "4000",
        "--seed",
        "3",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,n,estimate,ci_low,ci_high,exact_num,exact_den,bound,verdict"));
    assert!(lines.next().unwrap().starts_with("\"pc-large-degree(2):M(2,4)\",4000,"));
    assert_eq!(std::fs::read_to_string(&json).unwrap(), o.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn budget_flag_overrides_environment() {
    let args = ["census", "--spec", "all", "--d", "2", "--q", "2"];
    let out = bin().args(args).env("NICENSUS_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds budget 10"));
    let out = bin().args(["--budget", "16"]).args(args).env("NICENSUS_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let out = bin().args(args).env("NICENSUS_BUDGET", "lots").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn table_mode_puts_manifest_on_stderr() {
    let o = nicensus(&["--table", "decompose", "2 2 : 1 0 0 0"]);
    assert!(o.stdout.contains("dim V_inv = 1, dim V_nil = 1"));
    let m: Value = serde_json::from_str(o.stderr.trim()).unwrap();
    assert_eq!(m["subcommand"], "decompose");
}
