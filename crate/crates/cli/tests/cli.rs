use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use vlasym::catalog::{make_rep, Assignments, RepKind};
use vlasym::exprparse::print_vfield;
use vlasym::symexpr::int;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vlasym"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

/// Runs with `--json`, validates against the schema and checks the exit code
/// agrees with the verdict.
fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let r = run(&a);
    assert!(r.code == 0 || r.code == 1, "{args:?}: {}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    assert_eq!(v["ok"].as_bool().unwrap(), r.code == 0);
    let names: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    (r.code, v)
}

fn record<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no record {name} in {v}"))
}

fn summary<'a>(v: &'a Value, name: &str) -> &'a str {
    record(v, name)["summary"].as_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn verify_case_b2_infers_its_constants() {
    let (code, v) = run_json(&["verify", "--rep", "caseB2", "--z", "2"]);
    assert_eq!(code, 0);
    assert!(summary(&v, "z=2/table").starts_with("15/15 pairs, inferred (k, q) = (mu, -mu + 1)"));
    assert_eq!(v["records"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_example1_symbolic_k() {
    let (code, v) = run_json(&["verify", "--rep", "example1", "--z", "3", "--k", "symbolic"]);
    assert_eq!(code, 0);
    assert!(summary(&v, "z=3/table").starts_with("15/15 pairs"));
    let syms = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["name"].as_str().unwrap().starts_with("z=3/symmetry/") && r["ok"] == true)
        .count();
    assert_eq!(syms, 6);
    assert_eq!(v["config"]["k"], "symbolic");
    assert!(record(&v, "z=3/system")["ok"].as_bool().unwrap());
}

#[test]
fn verify_default_z_samples() {
    let (code, v) = run_json(&["verify", "--rep", "caseA"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["z"], "2,3,-1,1/2");
    for z in ["2", "3", "-1", "1/2"] {
        assert!(record(&v, &format!("z={z}/table"))["ok"].as_bool().unwrap());
    }
}

#[test]
fn verify_errors() {
    let r = run(&["verify", "--rep", "caseB1", "--z", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("set A110=0 before z→1"), "{}", r.stderr);
    let r = run(&["verify", "--rep", "nosuch"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unknown representation"));
    let r = run(&["verify", "--rep", "caseA", "--phi0", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not used by caseA"));
    let r = run(&["verify", "--rep", "standard", "--z", "3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn verify_representation_file() {
    let dir = tempfile::tempdir().unwrap();
    let rep = make_rep(RepKind::CaseB2, &int(3), &Assignments::new()).unwrap();
    let p = write(dir.path(), "rep.txt", &rep.to_text());
    let (code, v) = run_json(&["verify", "--rep-file", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(summary(&v, "table").contains("(mu, -mu + 1)"));

    // a generator with a wrong coefficient breaks the table and its multiplier
    let bad = rep.to_text().replace("Y[1] = ", "Y[1] = 2*Dt + ");
    let p = write(dir.path(), "bad.txt", &bad);
    let (code, v) = run_json(&["verify", "--rep-file", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!record(&v, "table")["ok"].as_bool().unwrap());
}

#[test]
fn bracket_examples() {
    let dir = tempfile::tempdir().unwrap();
    let std_rep = make_rep(RepKind::Standard, &int(1), &Assignments::new()).unwrap();
    let x0 = write(dir.path(), "x0.txt", &print_vfield(&std_rep.basis[1]));
    let xm1 = write(dir.path(), "xm1.txt", &print_vfield(&std_rep.basis[0]));
    let (code, v) = run_json(&["bracket", x0.to_str().unwrap(), xm1.to_str().unwrap(), "--basis", "standard"]);
    assert_eq!(code, 0);
    assert_eq!(summary(&v, "expansion"), "X[-1]");

    let ex = make_rep(RepKind::Example1, &int(2), &Assignments::new()).unwrap();
    let y0 = write(dir.path(), "y0.txt", &format!("# Y[0]\n{}\n", print_vfield(&ex.basis[4])));
    let ym1 = write(dir.path(), "ym1.txt", &print_vfield(&ex.basis[3]));
    let (code, v) = run_json(&[
        "bracket",
        y0.to_str().unwrap(),
        ym1.to_str().unwrap(),
        "--basis",
        "example1",
        "--z",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(summary(&v, "expansion"), "k*X[-1] + ((-mu^2 + k)/(mu))*Y[-1]");

    let (code, v) = run_json(&["bracket", y0.to_str().unwrap(), y0.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(summary(&v, "bracket"), "0");

    let broken = write(dir.path(), "broken.txt", "t*Dt +\n  * r");
    let r = run(&["bracket", broken.to_str().unwrap(), y0.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2, column"), "{}", r.stderr);
}

#[test]
fn nogo_zero_only_at_one() {
    let (code, v) = run_json(&["nogo", "--z", "1,2,3,-1,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(summary(&v, "z=1"), "zero");
    for z in ["2", "3", "-1", "1/2"] {
        assert!(summary(&v, &format!("z={z}")).starts_with("nonzero"));
    }
}

#[test]
fn ode_d12_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d12.csv");
    let (code, v) = run_json(&[
        "ode", "d12", "--z", "2", "--phi0", "1", "--mu", "1", "--x", "1", "--compare-closed", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(record(&v, "d12/closed_form")["residual"].as_f64().unwrap() <= 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("u,value,derivative,residual\n"));
    assert_eq!(v["artifacts"][0], csv.to_str().unwrap());
}

#[test]
fn ode_other_equations() {
    let (code, v) = run_json(&[
        "ode", "b12", "--z", "2", "--phi0", "1", "--mu", "1", "--b120", "1", "--b121", "-0.5", "--compare-closed",
    ]);
    assert_eq!(code, 0);
    assert!(record(&v, "c12/closed_form")["ok"].as_bool().unwrap());
    let (code, _) = run_json(&["ode", "b0", "--z", "3", "--phi0", "1"]);
    assert_eq!(code, 0);
    let (code, v) = run_json(&["ode", "quadrature", "--z", "3", "--phi0", "1", "--mu", "2", "--x", "1"]);
    assert_eq!(code, 0);
    assert!(summary(&v, "quadrature/fit").contains("2 mu x / z = 1.3333333333"));

    // Phi = 1 - u^2/2 vanishes inside the grid
    let r = run(&["ode", "d12", "--z", "1/2", "--phi0", "1", "--mu", "1", "--x", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("vanishes"), "{}", r.stderr);
    let r = run(&["ode", "d12", "--z", "2", "--phi0", "1", "--mu", "symbolic", "--x", "1"]);
    assert_eq!(r.code, 2);
    let r = run(&["ode", "d12", "--z", "3", "--phi0", "1", "--mu", "1", "--x", "1", "--compare-closed"]);
    assert_eq!(r.code, 2);
}

#[test]
fn pde_symcheck_and_control() {
    let (code, v) = run_json(&["pde", "symcheck", "--rep", "example1", "--z", "2", "--k", "1", "--gen", "Y0"]);
    assert_eq!(code, 0);
    assert!(record(&v, "symcheck/Y[0]")["residual"].as_f64().unwrap() >= 1.9);

    let (code, v) = run_json(&["pde", "symcheck", "--rep", "example1", "--corrupt", "X1"]);
    assert_eq!(code, 1);
    let bad = record(&v, "symcheck/X[1] (corrupted)");
    let slope = bad["residual"].as_f64().unwrap();
    assert!((0.7..=1.3).contains(&slope), "{slope}");
    assert!(!bad["ok"].as_bool().unwrap());
}

#[test]
fn pde_trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let (code, _) = run_json(&["pde", "trace", "--force", "inverse-cube", "--phi0", "0.7", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,r,v,f,residual\n"));
    assert_eq!(text.lines().count(), 1002);
}

fn strip_timing(mut v: Value) -> Value {
    for r in v["records"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("timing_ms");
    }
    v
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["verify", "--rep", "caseB2"][..],
        &["pde", "symcheck", "--rep", "caseA", "--points", "32"][..],
    ] {
        let (_, a) = run_json(args);
        let (_, b) = run_json(args);
        assert_eq!(strip_timing(a), strip_timing(b));
    }
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# defaults\nz = 2, 3\nmu = 2\njson = true\n");
    let out = dir.path().join("report.json");
    let r = run(&["nogo", "--config", cfg.to_str().unwrap(), "--z", "-1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(schema().is_valid(&v));
    // the flag wins over the file
    assert_eq!(v["config"]["z"], "-1");
    assert_eq!(v["config"]["mu"], "2");

    let bad = write(dir.path(), "bad.cfg", "z = 2\nbogus = 1\n");
    let r = run(&["nogo", "--config", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("config line 2"), "{}", r.stderr);
}

#[test]
fn text_report_layout() {
    let r = run(&["verify", "--rep", "standard"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("vlasym verify\n"));
    assert!(r.stdout.contains("PASS  table"));
    assert!(r.stdout.trim_end().ends_with("overall: ok (8/8 checks)"), "{}", r.stdout);
}
