use std::path::PathBuf;
use std::process::Command;

use varcone_cli::galleries::{self, NAMES};
use varcone_cli::runner::{Outcome, Verdict, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use varcone_cli::{parse, run, Report, RunOptions};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_varcone"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const MINIMAL: &str = r#"{
  "version": 1,
  "sets": {
    "H": { "pieces": [ { "dim": 2, "h_rep": [ { "normal": ["0", "-1"], "offset": "0" } ] } ] }
  },
  "tasks": [
    { "op": "clarke_tangent_cone", "args": { "set": "H" } },
    { "op": "tangential_intersection", "args": { "a": "H", "b": "H" } }
  ]
}"#;

#[test]
fn every_gallery_round_trips_to_the_same_report() {
    for (name, _) in NAMES {
        let built = galleries::build(name).unwrap();
        let text = serde_json::to_string_pretty(&built).unwrap();
        let reparsed = parse(&text).unwrap();
        reparsed.validate(6).unwrap();
        let a = run(&built, &RunOptions::default()).without_timing();
        let b = run(&reparsed, &RunOptions::default()).without_timing();
        assert_eq!(a, b, "{name}");
        assert_eq!(a.summary.exit_code, EXIT_PASS, "{name}: {}", a.render_text());
    }
}

#[test]
fn parallel_runs_match_sequential_runs() {
    for name in ["quadrant-union-clarke-collapse", "abs-sum-rule"] {
        let s = galleries::build(name).unwrap();
        let seq = run(&s, &RunOptions { seed: None, parallel: false }).without_timing();
        let mut par = run(&s, &RunOptions { seed: None, parallel: true }).without_timing();
        par.parallel = false;
        assert_eq!(seq, par, "{name}");
    }
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    let s = galleries::build("nontransversal-complements").unwrap();
    let report = run(&s, &RunOptions::default());
    let text = report.render_text();
    let json: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    for t in &json.tasks {
        let line = text.lines().find(|l| l.starts_with(&format!("#{} ", t.index))).unwrap();
        let word = match t.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::InputError => "INPUT ERROR",
        };
        assert!(line.contains(word), "{line}");
    }
    assert_eq!(json.tasks[0].outcome, Outcome::Fails);
}

#[test]
fn gallery_commands() {
    let out = bin().arg("list-galleries").output().unwrap();
    assert!(out.status.success());
    let listing = String::from_utf8(out.stdout).unwrap();
    for (name, _) in NAMES {
        assert!(listing.contains(name));
    }
    let out = bin().args(["gallery", "transversal-halfplanes", "--run", "--json-only"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.tasks.iter().all(|t| t.verdict == Verdict::Pass));

    let out = bin().args(["gallery", "soc-nonclosed-sum", "--run"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8(out.stdout).unwrap().contains("not_closed_evidence"));

    let out = bin().args(["gallery", "no-such-thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8(out.stderr).unwrap().contains("abs-sum-rule"));
}

#[test]
fn emitted_gallery_runs_from_a_file() {
    let out = bin().args(["gallery", "indicator-qualification-failure"]).output().unwrap();
    let path = scratch("qualification.json", std::str::from_utf8(&out.stdout).unwrap());
    let out = bin().arg("run").arg(&path).args(["--json-only", "--seed", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
}

#[test]
fn run_and_validate_a_hand_written_file() {
    let path = scratch("minimal.json", MINIMAL);
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("T = cone{(0, 1)} + span{(1, 0)}"), "{text}");
}

#[test]
fn unresolved_reference_is_an_input_error() {
    let path = scratch("unresolved.json", &MINIMAL.replace(r#""b": "H""#, r#""b": "G""#));
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown set `G`"));
}

#[test]
fn schema_errors_name_the_field_and_line() {
    let path = scratch("bad_offset.json", &MINIMAL.replace(r#""offset": "0""#, r#""offset": "zero""#));
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4") && err.contains("sets.H"), "{err}");

    let path = scratch("bad_version.json", &MINIMAL.replace(r#""version": 1"#, r#""version": 9"#));
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn dimension_cap_is_enforced() {
    let path = scratch("capped.json", MINIMAL);
    let out = bin().arg("run").arg(&path).args(["--max-dim", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn unmet_expectation_is_a_certification_failure() {
    let doc = MINIMAL.replace(
        r#"{ "op": "tangential_intersection", "args": { "a": "H", "b": "H" } }"#,
        r#"{ "op": "tangential_intersection", "args": { "a": "H", "b": "H" }, "expect": "fails" }"#,
    );
    let path = scratch("unmet.json", &doc);
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
}

#[test]
fn runtime_input_errors_map_to_exit_two() {
    let doc = r#"{
      "version": 1,
      "functions": { "f": { "type": "max", "pieces": [ { "gradient": ["1"], "offset": "0" } ],
                            "domain": { "dim": 1, "h_rep": [ { "normal": ["-1"], "offset": "0" } ] } } },
      "tasks": [ { "op": "subdifferential", "args": { "f": "f", "x0": ["-1"] } } ]
    }"#;
    let s = parse(doc).unwrap();
    let r = run(&s, &RunOptions::default());
    assert_eq!(r.tasks[0].verdict, Verdict::InputError);
    assert_eq!(r.summary.exit_code, EXIT_INPUT);
}
