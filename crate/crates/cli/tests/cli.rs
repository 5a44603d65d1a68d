//! End-to-end tests of the `coopgame` binary on the fixture corpus.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn coopgame<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_coopgame")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn assert_valid(schema_name: &str, text: &str) -> Value {
    let instance: Value = serde_json::from_str(text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema(schema_name)).unwrap();
    if let Err(errors) = compiled.validate(&instance) {
        let messages: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("{schema_name}: {messages:?}\n{text}");
    }
    instance
}

/// Runs with `--json`, checks the exit code and validates the reports.
fn json_reports(args: &[&str], code: i32) -> Vec<Value> {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let run = coopgame(&full);
    assert_eq!(run.code, code, "{args:?}: {}", run.stderr);
    assert_valid("report.schema.json", &run.stdout).as_array().unwrap().clone()
}

fn report<'a>(reports: &'a [Value], property: &str) -> &'a Value {
    reports.iter().find(|r| r["property"] == property).unwrap()
}

fn construct(kind: &str, input: &str, dir: &Path) -> PathBuf {
    let out = dir.join(format!("{kind}.json"));
    let run = coopgame(["construct", kind, fixture(input).to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_valid("game.schema.json", &std::fs::read_to_string(&out).unwrap());
    out
}

#[test]
fn gmac_construct_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let game = construct("gmac", "gmac_powers.json", dir.path());
    let text: Value = serde_json::from_str(&std::fs::read_to_string(&game).unwrap()).unwrap();
    let values: Vec<f64> = text["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(&values[..3], &[0.0, 1.0, 1.0]);
    assert!((values[3] - 1.403677).abs() < 1e-6);

    let run = coopgame(["analyze", game.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("balanced: true"));
    assert!(run.stdout.contains("modularity: submodular"));
    assert!(run.stdout.contains("shapley: (0.701839, 0.701839)"));

    let reports = json_reports(&["analyze", game.to_str().unwrap()], 0);
    assert_eq!(report(&reports, "balanced")["verdict"], true);
    assert_eq!(report(&reports, "modularity")["verdict"], "submodular");
    assert_eq!(report(&reports, "balanced")["mode"], "float");
    let shapley = &report(&reports, "shapley_in_core")["certificate"]["shapley"];
    assert!((shapley[0].as_f64().unwrap() - 0.701839).abs() < 1e-6);
}

#[test]
fn construct_then_analyze_is_byte_stable() {
    let outputs: Vec<String> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let game = construct("sw", "dsbs.json", dir.path());
            let run = coopgame(["--json", "--seed", "5", "analyze", game.to_str().unwrap()]);
            assert_eq!(run.code, 0);
            std::fs::read_to_string(&game).unwrap() + &run.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn every_constructor_emits_a_valid_game_file() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, input) in [
        ("sw", "dsbs.json"),
        ("swmod", "dsbs.json"),
        ("dmmac", "adder_channel.json"),
        ("gmac", "gmac_powers.json"),
        ("la", "la_powers.json"),
        ("esum", "integer_sources.json"),
        ("epower", "gaussians.json"),
        ("shifted", "variances.json"),
        ("degame", "de_sources.json"),
    ] {
        let game = construct(kind, input, dir.path());
        json_reports(&["analyze", game.to_str().unwrap()], 0);
    }
    let adder = dir.path().join("dmmac.json");
    let text: Value = serde_json::from_str(&std::fs::read_to_string(adder).unwrap()).unwrap();
    let values: Vec<f64> = text["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (got, want) in values.iter().zip([0.0, 1.0, 1.0, 1.5]) {
        assert!((got - want).abs() < 1e-6);
    }
}

#[test]
fn construct_writes_to_stdout_without_output_flag() {
    let run = coopgame(["construct", "gmac", fixture("gmac_powers.json").to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert_valid("game.schema.json", &run.stdout);
}

#[test]
fn degame_sample_flag_overrides_the_file() {
    let run = coopgame([
        "construct",
        "degame",
        fixture("de_sources.json").to_str().unwrap(),
        "--samples",
        "2",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let game: Value = serde_json::from_str(&run.stdout).unwrap();
    assert!((game["values"][1].as_f64().unwrap() - 1.0 / 24.0).abs() < 1e-3);
}

#[test]
fn rational_analysis_of_a_balanced_game_without_large_core() {
    let reports = json_reports(&["analyze", fixture("balanced_not_large.json").to_str().unwrap()], 0);
    assert_eq!(report(&reports, "balanced")["verdict"], true);
    assert_eq!(report(&reports, "balanced")["mode"], "rational");
    assert_eq!(report(&reports, "balanced")["tolerance"], 0.0);
    assert_eq!(report(&reports, "large_core")["verdict"], false);
    assert_eq!(report(&reports, "exact")["verdict"], false);
    let unbalanced = json_reports(&["analyze", fixture("unbalanced.json").to_str().unwrap()], 0);
    assert_eq!(report(&unbalanced, "balanced")["verdict"], false);
    let partition = &report(&unbalanced, "balanced")["certificate"]["partition"];
    assert!(partition["sets"].as_array().is_some());
}

#[test]
fn mode_and_tolerance_flags_are_recorded() {
    let path = fixture("balanced_not_large.json");
    let reports = json_reports(&["--mode", "float", "--tol", "1e-7", "analyze", path.to_str().unwrap()], 0);
    assert!(reports.iter().all(|r| r["mode"] == "float" && r["tolerance"] == 1e-7));
}

#[test]
fn mbc_lists_collections() {
    let run = coopgame(["mbc", "2"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("2 minimal balanced collections"));
    let reports = json_reports(&["mbc", "3"], 0);
    assert_eq!(reports[0]["verdict"], 6);
    assert_eq!(coopgame(["mbc", "9"]).code, 2);
}

#[test]
fn robust_allocations() {
    let reports = json_reports(&["robust", fixture("dsbs.json").to_str().unwrap()], 0);
    let allocation: Vec<f64> = reports[0]["certificate"]["allocation"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((allocation.iter().sum::<f64>() - 1.811278).abs() < 1e-6);
    json_reports(&["robust", fixture("gmac_powers.json").to_str().unwrap()], 0);
    assert_eq!(coopgame(["robust", fixture("variances.json").to_str().unwrap()]).code, 2);
}

#[test]
fn tolerance_command() {
    let game = fixture("balanced_not_large.json");
    let feasible = json_reports(&["tolerance", game.to_str().unwrap(), "--T", "1,1,1"], 0);
    assert_eq!(feasible[0]["certificate"]["allocation"], serde_json::json!(["1", "1", "1"]));
    json_reports(&["tolerance", game.to_str().unwrap(), "--T", "0,0,0"], 1);
    let run = coopgame(["tolerance", game.to_str().unwrap(), "--T", "1,x,1"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--T"));
}

#[test]
fn xos_command() {
    let dir = tempfile::tempdir().unwrap();
    let game = construct("gmac", "gmac_powers.json", dir.path());
    let reports = json_reports(&["xos", game.to_str().unwrap()], 0);
    assert_eq!(reports[0]["verdict"], true);
    json_reports(&["xos", fixture("nonmonotone.json").to_str().unwrap()], 1);
    assert_eq!(coopgame(["xos", fixture("unbalanced.json").to_str().unwrap()]).code, 2);
}

#[test]
fn epi_check_modes() {
    let uniform = json_reports(&["epi-check", fixture("gaussians.json").to_str().unwrap()], 0);
    assert_eq!(uniform[0]["verdict"], true);
    assert!(uniform[0].get("notes").is_none());
    let partition = json_reports(
        &[
            "epi-check",
            fixture("gaussians.json").to_str().unwrap(),
            "--partition",
            fixture("pairs_partition.json").to_str().unwrap(),
        ],
        0,
    );
    assert_eq!(partition[0]["notes"], serde_json::json!(["conjecture-evidence"]));
    assert_eq!(partition[0]["certificate"]["conjecture_evidence"], true);
}

#[test]
fn capacity_commands() {
    let u = fixture("capacity_u.json");
    let v = fixture("capacity_v.json");
    let lfp = json_reports(&["lfp", u.to_str().unwrap(), v.to_str().unwrap()], 0);
    assert_eq!(lfp[0]["notes"], serde_json::json!(["finite-Ω realization"]));
    assert_eq!(lfp[0]["verdict"], true);
    let reverse = json_reports(&["lfp", "--reverse", u.to_str().unwrap(), v.to_str().unwrap()], 0);
    assert_eq!(reverse[0]["certificate"]["direction"], "reverse");
    let lr = json_reports(&["lr-check", u.to_str().unwrap(), v.to_str().unwrap()], 0);
    assert_eq!(lr[0]["verdict"], true);
    let bad = coopgame(["lfp", fixture("bad_capacity.json").to_str().unwrap(), v.to_str().unwrap()]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("capacity"));
}

#[test]
fn searches_print_their_seed() {
    for kind in ["la-nonconcave", "la-shapley", "balanced-not-large"] {
        let run = coopgame(["--seed", "3", "search", kind]);
        assert_eq!(run.code, 0, "{kind}: {}", run.stdout);
        assert!(run.stdout.starts_with("seed: 3\n"));
        let again = coopgame(["--seed", "3", "search", kind]);
        assert_eq!(run.stdout, again.stdout);
        let reports = json_reports(&["--seed", "3", "search", kind], 0);
        assert_eq!(reports[0]["certificate"]["seed"], 3);
    }
    let none = json_reports(&["search", "la-shapley", "--trials", "0"], 1);
    assert_eq!(none[0]["verdict"], false);
}

#[test]
fn malformed_inputs_exit_two_and_name_the_field() {
    for (args, field) in [
        (vec!["analyze", "bad_length.json"], "`values`"),
        (vec!["analyze", "bad_missing_n.json"], "`n`"),
        (vec!["analyze", "bad_value.json"], "values[1]"),
        (vec!["analyze", "bad_orientation.json"], "sideways"),
        (vec!["construct", "gmac", "bad_missing_n.json"], "`P`"),
        (vec!["construct", "sw", "bad_pmf.json"], "sum to 1"),
        (vec!["lfp", "bad_capacity.json", "capacity_v.json"], "capacity"),
    ] {
        let paths: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") { fixture(a).display().to_string() } else { a.to_string() })
            .collect();
        let run = coopgame(&paths);
        assert_eq!(run.code, 2, "{args:?}");
        assert!(run.stderr.contains(field), "{args:?}: {}", run.stderr);
    }
    assert_eq!(coopgame(["analyze", "/nonexistent/game.json"]).code, 2);
    assert_eq!(coopgame(["frobnicate"]).code, 2);
}
