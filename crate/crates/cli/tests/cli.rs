use std::io::Write;
use std::process::{Command, Output, Stdio};

use hyperdist::format::{parse_hyper, Workspace};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperdist"))
}

fn workspace(name: &str) -> String {
    format!("{}/workspaces/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_workspace(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn hypercond_prints_the_tagged_posteriors() {
    let ws = workspace("table.json");
    let o = run(&["hypercond", "--in", &ws, "--dist", "omega", "--test", "p_test"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "5/8|k0(1/5|a> + 2/15|b> + 2/3|c>)> + 3/8|k1(1/3|a> + 2/3|b>)>\n"
    );
}

#[test]
fn refine_prints_the_postprocessing() {
    let ws = workspace("coin.json");
    let o = run(&["refine", "--in", &ws, "--from", "s", "--to", "t"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 -> 2/3|0> + 1/3|1>\n1 -> 1/3|1> + 2/3|2>\nREFINES\n");

    let o = run(&["refine", "--in", &ws, "--from", "Phi", "--to", "Psi"]);
    assert!(stdout(&o).ends_with("REFINES\n"));

    let o = run(&["refine", "--in", &ws, "--from", "t", "--to", "s"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "DOES NOT REFINE\n");
}

#[test]
fn refinement_outside_the_support_conditions_is_undetermined() {
    let o = run(&["refine", "--in", &workspace("partial.json"), "--from", "Phi", "--to", "Psi"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("IncompleteSupport"));
}

#[test]
fn witnesses_are_built_and_checked() {
    let ws = workspace("coin.json");
    let o = run(&["witness", "--in", &ws, "--witness", "Omega", "--from", "Phi", "--to", "Psi"]);
    assert_eq!(stdout(&o), "VALID\n");
    let o = run(&["witness", "--in", &ws, "--witness", "Omega", "--from", "Psi", "--to", "Phi"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["witness", "--in", &ws, "--dist", "omega", "--from", "s", "--to", "t", "--format", "json"]);
    assert!(o.status.success());
    let built = Workspace::from_json(&stdout(&o)).unwrap();
    let given = Workspace::from_json(&std::fs::read_to_string(&ws).unwrap()).unwrap();
    assert_eq!(built.witnesses["result"].value, given.witnesses["Omega"].value);
}

#[test]
fn normalising_zero_fails_with_a_domain_error() {
    let o = run(&["nrm", "--in", &workspace("abcd.json"), "--dist", "zero"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ZeroSubdistribution"));

    let o = run(&["nrm", "--in", &workspace("abcd.json"), "--dist", "colour"]);
    assert_eq!(stdout(&o), "1/7|R> + 2/7|G> + 4/7|B>\n");
}

#[test]
fn load_errors_exit_with_the_parse_status() {
    let bad = temp_workspace(r#"{"spaces":{"A":["a","b"]},"dists":{"w":{"space":"A","mass":{"a":"1/2","b":"2/5"}}}}"#);
    let o = run(&["nrm", "--in", bad.path().to_str().unwrap(), "--dist", "w"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dists.w"));
    assert!(stderr(&o).contains("distribution mass 9/10 ≠ 1"));

    let neg = temp_workspace("{\"spaces\":{\"A\":[\"a\"]},\n\"dists\":{\"w\":{\"space\":\"A\",\"mass\":{\"a\":\"-1/2\"}}}}");
    let o = run(&["nrm", "--in", neg.path().to_str().unwrap(), "--dist", "w"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = run(&["nrm", "--in", &workspace("abcd.json"), "--dist", "missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`missing`"));

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_reloads_to_the_same_value() {
    let ws = workspace("abcd.json");
    let ket = stdout(&run(&["hypernorm", "--in", &ws, "--dist", "omega"]));
    let json = stdout(&run(&["hypernorm", "--in", &ws, "--dist", "omega", "--format", "json"]));
    let loaded = Workspace::from_json(&json).unwrap();
    let result = &loaded.hyperdists["result"];
    assert_eq!(result.value.arity(), 3);
    assert_eq!(parse_hyper(ket.trim_end(), &result.space, 3).unwrap(), result.value);
    assert_eq!(loaded.to_json(), json);
}

#[test]
fn output_is_byte_deterministic() {
    let ws = workspace("medical.json");
    for args in [
        vec!["hypercond", "--in", &ws, "--dist", "omega", "--test", "s", "--format", "json"],
        vec!["denote", "--in", &ws, "--dist", "omega", "--test", "s"],
        vec!["laws", "--suite", "norm", "--max-size", "2", "--max-arity", "2", "--max-denominator", "2", "--format", "json"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn workspace_can_come_from_stdin() {
    let text = std::fs::read_to_string(workspace("medical.json")).unwrap();
    let mut child = bin()
        .args(["condition", "--dist", "omega", "--pred", "positive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "validity = 117/2000\n2/13|d> + 11/13|d̄>\n");
}

#[test]
fn disintegrate_splits_a_joint() {
    let o = run(&["disintegrate", "--in", &workspace("abcd.json"), "--dist", "omega"]);
    assert_eq!(
        stdout(&o),
        "marginal = 1/8|a> + 1/4|b> + 1/2|c> + 1/8|d>\na -> 1|0>\nb -> 1|0>\nc -> 1|1>\nd -> 1|1>\n"
    );
}

#[test]
fn examples_replay() {
    let o = run(&["examples", "--all"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("8/8 fixtures exact\n"));

    let o = run(&["examples", "--only", "non-affine"]);
    let text = stdout(&o);
    assert!(text.contains("1/4|k0(1|a>)> + 3/4|k0(1|b>)>"));
    assert!(text.contains("1|k0(1/4|a> + 3/4|b>)>"));

    let o = run(&["examples", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn laws_command_reports_suites() {
    let o = run(&["laws", "--suite", "kleisli", "--max-size", "2", "--max-arity", "1", "--max-denominator", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS          kleisli.compose"));
    assert!(stdout(&o).contains("1/1 suites ok"));

    let o = run(&["laws", "--suite", "distributive", "--max-size", "2", "--max-arity", "2", "--max-denominator", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
    let reports = v["suites"][0]["reports"].as_array().unwrap();
    let stored = reports.iter().find(|r| r["law"] == "distributive.counit-rectangle-stored").unwrap();
    assert_eq!(stored["verdict"], "expected-fail");

    let o = run(&["laws", "--suite", "norm", "--trials", "20", "--seed", "5", "--max-size", "3"]);
    assert!(o.status.success());

    let o = run(&["laws", "--max-size", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
