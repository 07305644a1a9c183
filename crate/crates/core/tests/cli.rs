//! Command-line behaviour: reports, exit codes, formats and schema conformance.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use clap::{CommandFactory, Parser};
use jsonschema::Registry;
use serde_json::{json, Value};

use homlie::cli::{execute, Cli, Format, Report};

fn report(args: &[&str]) -> Report {
    let cli = Cli::try_parse_from(std::iter::once("homlie").chain(args.iter().copied())).unwrap();
    execute(&cli).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&report(args).render(Format::Json)).unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_homlie"))
        .args(args)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let mut registry = Registry::new();
    for part in ["ring", "algebra", "family", "presentation", "report"] {
        let s = schema(part);
        let id = s["$id"].as_str().unwrap().to_string();
        registry = registry.add(id, s).unwrap();
    }
    let registry = registry.prepare().unwrap();
    let validator = jsonschema::options().with_registry(&registry).build(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{doc:#}");
}

#[test]
fn clap_definition_is_consistent() {
    Cli::command().debug_assert();
}

#[test]
fn reports_conform_to_schemas() {
    let cases: [&[&str]; 9] = [
        &["gen", "kummer-witt", "--n", "4", "--r", "1"],
        &["gen", "artin-schreier", "--p", "5"],
        &["analyze", "solvability", "--family", "kummer-witt", "--n", "4", "--r", "2"],
        &["analyze", "zero-brackets", "--family", "kummer-witt", "--n", "6", "--r", "2"],
        &["env", "presentation", "--family", "jackson", "--n", "4"],
        &["env", "confluence", "--n", "3", "--degree", "4"],
        &["env", "normal-elt"],
        &["env", "presentation", "--family", "sl2"],
        &["zeta", "--q", "7", "--terms", "1"],
    ];
    for args in cases {
        let v = json_of(args);
        assert_valid("report", &v);
        if args[0] == "gen" {
            assert_valid("algebra", &v["result"]["algebra"]);
            assert_valid("family", &v["config"]);
        }
        if args[1] == "presentation" && args[3] == "jackson" {
            assert_valid("presentation", &v["result"]["presentation"]);
        }
    }
    // Schemas reject what the parsers reject.
    let mut bad = json_of(&["gen", "jackson", "--n", "3"])["result"]["algebra"].clone();
    bad["extra"] = json!(1);
    let mut registry = Registry::new();
    for part in ["ring", "algebra"] {
        let s = schema(part);
        registry = registry.add(s["$id"].as_str().unwrap().to_string(), s).unwrap();
    }
    let registry = registry.prepare().unwrap();
    let v = jsonschema::options().with_registry(&registry).build(&schema("algebra")).unwrap();
    assert!(!v.is_valid(&bad));
}

#[test]
fn gen_reports_reference_discrepancies() {
    let v = json_of(&["gen", "kummer-witt", "--n", "4", "--r", "1", "--b", "sym"]);
    assert_eq!(v["verdict"], "pass");
    let d = v["discrepancies"].as_array().unwrap();
    assert_eq!(d.len(), 1);
    assert!(d[0].as_str().unwrap().contains("<e2, e3>"));
    assert_eq!(v["result"]["comparison"]["exact_match"], true);
    let exact = json_of(&["gen", "kummer-witt", "--n", "3", "--r", "1", "--b", "sym"]);
    assert!(exact["discrepancies"].as_array().unwrap().is_empty());
    // Numeric b has no reference table.
    assert_eq!(json_of(&["gen", "kummer-witt", "--n", "3", "--b", "2"])["result"]["comparison"], Value::Null);
    let p5 = json_of(&["gen", "artin-schreier", "--p", "5"]);
    assert!(!p5["discrepancies"].as_array().unwrap().is_empty());
    assert_eq!(p5["verdict"], "pass");
    // --spec is equivalent to the flags.
    let spec = json_of(&["gen", "kummer-witt", "--spec", r#"{"family":"kummer-witt","n":4,"r":1}"#]);
    assert_eq!(spec["result"], v["result"]);
}

#[test]
fn analyze_results() {
    let s = json_of(&["analyze", "solvability", "--family", "kummer-witt", "--n", "4", "--r", "2"]);
    assert_eq!(s["result"], json!({ "dims": [4, 2, 0], "solvable": true }));
    let j = json_of(&["analyze", "solvability", "--family", "jackson", "--n", "5", "--b", "1"]);
    assert_eq!(j["result"]["solvable"], false);
    let z = json_of(&["analyze", "zero-brackets", "--family", "kummer-witt", "--n", "4", "--r", "2"]);
    assert_eq!(z["result"]["zeroPairs"], json!([[0, 2], [1, 3]]));
    let subs = json_of(&["analyze", "subalgebras", "--family", "kummer-witt", "--n", "5", "--r", "1"]);
    assert!(subs["result"]["subalgebras"].as_array().unwrap().contains(&json!([0, 1, 4])));
}

#[test]
fn env_results() {
    let nf = json_of(&["env", "nf", "--n", "3", "--element", "e2*e1"]);
    assert_eq!(nf["result"]["normalForm"], "(-xi-1)*e1*e2 + b*e0 + ((xi+2)*b)");
    let centre = json_of(&["env", "center", "--n", "3", "--b", "1", "--degree", "3"]);
    assert_eq!(centre["result"]["centralBasis"].as_array().unwrap().len(), 5);
    assert_eq!(centre["result"]["report"]["nth_powers_central"], json!([true, true, true]));
    let not_central = report(&["env", "center", "--n", "3", "--element", "e1^2"]);
    assert!(!not_central.passed());
    assert!(not_central.witness.is_some());
    let kw = report(&["env", "confluence", "--family", "kummer-witt", "--n", "4", "--degree", "4"]);
    assert!(!kw.passed());
    assert!(kw.witness.is_some());
    assert!(report(&["env", "downup", "--n", "5"]).passed());
    let sl2 = json_of(&["env", "presentation", "--family", "sl2"]);
    assert_eq!(sl2["verdict"], "pass");
    assert_eq!(sl2["discrepancies"].as_array().unwrap().len(), 1);
    let sl2q = json_of(&["env", "presentation", "--family", "sl2q"]);
    assert_eq!(sl2q["discrepancies"].as_array().unwrap().len(), 1);
    let shift = json_of(&["env", "presentation", "--family", "jackson-brackets", "--n", "5"]);
    assert_eq!(shift["result"]["shift"]["matches_simplified"], true);
}

#[test]
fn presentation_input_round_trip() {
    let v = json_of(&["env", "presentation", "--n", "3", "--b", "2"]);
    let path = std::env::temp_dir().join(format!("homlie_pres_{}.json", std::process::id()));
    std::fs::write(&path, v["result"]["presentation"].to_string()).unwrap();
    let p = path.to_str().unwrap();
    let nf = json_of(&["env", "nf", "--input", p, "--element", "e2*e1"]);
    assert_eq!(nf["result"]["normalForm"], "(-xi-1)*e1*e2 + 2*e0 + (2*xi+4)");
    let c = json_of(&["env", "confluence", "--input", p, "--degree", "5"]);
    assert_eq!(c["verdict"], "pass");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn zeta_report() {
    let v = json_of(&["zeta", "--family", "jackson", "--n", "3", "--q", "7", "--terms", "2"]);
    assert_eq!(v["result"]["zetaRam"], json!(["1", "11", "85"]));
    assert_eq!(v["result"]["zetaTangent"], json!(["1", "22", "314"]));
    assert_eq!(v["result"]["perK"][0]["complete"], true);
    assert_eq!(v["result"]["perK"][1]["complete"], false);
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["roundTrip"], true);
}

#[test]
fn formats() {
    let r = report(&["gen", "jackson", "--n", "3"]);
    let latex = r.render(Format::Latex);
    assert!(latex.starts_with("\\begin{align*}") && latex.contains("\\xi"));
    let text = r.render(Format::Text);
    assert!(text.starts_with("homlie ") && text.contains("<e1, e2> ="));
    let z = report(&["zeta", "--q", "7", "--terms", "1"]).render(Format::Latex);
    assert!(z.contains("\\zeta_{\\mathrm{ram}}(t) &= 1 + 11\\,t + O(t^{2})"));
}

#[test]
fn exit_codes() {
    let gen = run(&["gen", "kummer-witt", "--n", "3"], None);
    assert_eq!(gen.code, 0);
    assert_eq!(run(&["check", "-"], Some(&gen.stdout)).code, 0);
    // A bare algebra document is accepted too.
    let v: Value = serde_json::from_str(&gen.stdout).unwrap();
    let mut doc = v["result"]["algebra"].clone();
    assert_eq!(run(&["check", "-"], Some(&doc.to_string())).code, 0);
    // Corrupt one structure constant: Jacobi fails with a witness.
    doc["brackets"][0]["coeffs"][1] = json!("7");
    let bad = run(&["check", "-"], Some(&doc.to_string()));
    assert_eq!(bad.code, 1);
    let out: Value = serde_json::from_str(&bad.stdout).unwrap();
    assert_eq!(out["verdict"], "fail");
    assert_eq!(out["witness"]["axiom"], "jacobi");
    // Usage and parse errors.
    assert_eq!(run(&["gen", "kummer-witt", "--n", "3", "--bogus", "1"], None).code, 2);
    assert_eq!(run(&["frobnicate"], None).code, 2);
    let spec = run(&["gen", "jackson", "--spec", r#"{"family":"jackson","n":3,"zz":1}"#], None);
    assert_eq!(spec.code, 2);
    assert!(spec.stderr.contains("zz"));
    assert_eq!(run(&["check", "/nonexistent/file.json"], None).code, 2);
    assert_eq!(run(&["env", "nf", "--family", "sl2", "--element", "e"], None).code, 2);
    assert_eq!(run(&["zeta", "--q", "9"], None).code, 2);
    assert_eq!(run(&["zeta", "--q", "7", "--xi", "3"], None).code, 2);
    assert_eq!(run(&["--help"], None).code, 0);
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("homlie_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("report.json");
    let args = ["gen", "artin-schreier", "--p", "3", "--seed", "9", "--output", target.to_str().unwrap()];
    let r = run(&args, None);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let first = std::fs::read_to_string(&target).unwrap();
    assert!(run(&args, None).code == 0);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), first);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1, "temporary file left behind");
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["seed"], 9);
    assert!(v.get("timing_ms").is_none());
    let timed = json_of(&["gen", "artin-schreier", "--p", "3", "--timing"]);
    assert!(timed["timing_ms"].is_u64());
    std::fs::remove_dir_all(dir).unwrap();
}
