use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ternary-dht"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = run(args);
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, value)
}

#[test]
fn field_info_reports_modulus() {
    let (code, v) = run_json(&["field", "info", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "ternary-dht/1");
    assert_eq!(v["q"], 27);
    assert_eq!(v["modulus"], serde_json::json!([1, 0, 2, 1]));
    assert_eq!(v["alphaOrder"], 26);
}

#[test]
fn field_info_rejects_non_primitive_modulus() {
    let (code, _, stderr) = run(&["field", "info", "--n", "3", "--poly", "0,0,0,1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not a primitive polynomial"));
}

#[test]
fn verify_lin_passes_and_rejects_even_degree() {
    let (code, v) = run_json(&["verify", "lin", "--n", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert!(v.get("elapsedMs").is_none());
    let (code, _, stderr) = run(&["verify", "lin", "--n", "4"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("must be odd"));
}

#[test]
fn verify_hamming_reports_equality_set_size() {
    let (code, v) = run_json(&["verify", "hamming", "--n", "5", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["equalitySetSize"], 10);
}

#[test]
fn verify_lemmas_sampled_is_seeded() {
    let args = [
        "verify",
        "lemmas",
        "--n",
        "9",
        "--samples",
        "500",
        "--seed",
        "11",
        "--json",
    ];
    let (code, a) = run_json(&args);
    let (_, b) = run_json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
}

#[test]
fn check_pair_exit_code_follows_realizability() {
    let (code, _, _) = run(&["dht", "check-pair", "--n", "3", "--v", "16", "--t", "7"]);
    assert_eq!(code, 0);
    // (2, 7) fails the weight criterion at n = 3
    let (code, v) = run_json(&[
        "dht",
        "check-pair",
        "--n",
        "3",
        "--v",
        "2",
        "--t",
        "7",
        "--json",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert!(v["summary"].get("witness").is_some());
}

#[test]
fn search_output_is_independent_of_jobs() {
    let base = [
        "dht", "search", "--n", "3", "--v-from", "1", "--v-to", "25", "--t-from", "1", "--t-to",
        "25", "--screen", "both", "--json",
    ];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let eight = run(&[&base[..], &["--jobs", "8"]].concat());
    assert_eq!(one.0, 0);
    assert_eq!(one.1, eight.1);
    let v: Value = serde_json::from_str(&one.1).unwrap();
    assert_eq!(
        v["summary"]["result"]["disagreements"],
        serde_json::json!([])
    );
}

#[test]
fn search_rejects_unknown_screen() {
    let (code, _, stderr) = run(&[
        "dht", "search", "--n", "3", "--v-from", "1", "--v-to", "2", "--t-from", "1", "--t-to",
        "2", "--screen", "fast",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown screen mode"));
}

#[test]
fn spectrum_csv_has_one_row_per_element() {
    let (code, stdout, _) = run(&[
        "dht", "spectrum", "--n", "3", "--v", "16", "--t", "7", "--gamma", "1", "--csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 28);
    assert!(stdout.lines().skip(1).all(|l| l.ends_with(",729")));
}

#[test]
fn seq_gen_then_autocorr() {
    let dir = tempfile::tempdir().unwrap();
    for (family, extra) in [
        ("m", vec![]),
        ("lin", vec![]),
        ("dht", vec!["--v", "16", "--t", "7"]),
    ] {
        let path = dir.path().join(format!("{family}.json"));
        let path_str = path.to_str().unwrap();
        let mut args = vec![
            "seq", "gen", "--family", family, "--n", "3", "--out", path_str,
        ];
        args.extend(extra);
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 0, "{stderr}");

        let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(file["digits"].as_str().unwrap().len(), 26);
        assert_eq!(file["modulus"], serde_json::json!([1, 0, 2, 1]));

        let (code, v) = run_json(&["seq", "autocorr", path_str, "--json"]);
        assert_eq!(code, 0);
        assert_eq!(v["twoLevel"], true);
        assert_eq!(v["rows"].as_array().unwrap().len(), 26);

        let (_, csv, _) = run(&["seq", "autocorr", path_str, "--csv"]);
        assert_eq!(csv.lines().count(), 27);
    }
}

#[test]
fn seq_gen_dht_requires_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let (code, _, stderr) = run(&[
        "seq",
        "gen",
        "--family",
        "dht",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--v and --t"));
}

#[test]
fn gauss_check_passes() {
    let (code, v) = run_json(&["gauss", "check", "--n", "3", "--tol", "1e-6", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"].as_array().unwrap().len(), 6);
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = run_json(&["verify", "lin", "--n", "3", "--json", "--timing"]);
    assert!(v["elapsedMs"].is_u64());
}
