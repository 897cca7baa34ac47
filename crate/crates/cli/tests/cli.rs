use serde_json::Value;
use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpsphere")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains('\r'));
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn eigenvalue_table_for_d4() {
    let out = run(&["eigenvalues", "--d", "4", "--kmax", "6", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let rows = csv(&out);
    assert_eq!(
        rows[0].join(","),
        "d,k,exact_numerator,exact_denominator,omega_index,closed_form_match,numeric,sign"
    );
    assert_eq!(rows.len(), 8);
    let signs: Vec<&str> = rows[1..].iter().map(|r| r[7].as_str()).collect();
    assert_eq!(signs, ["+", "0", "-", "0", "-", "0", "-"]);
    assert!(rows[1..].iter().all(|r| r[5] == "true"));
}

#[test]
fn eigenvalues_in_d8_are_numeric_only() {
    let out = run(&["eigenvalues", "--d", "8", "--kmax", "2"]);
    assert_eq!(code(&out), 0);
    let rows = json(&out)["results"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["exact_numerator"].is_null()));
    assert_eq!(rows[2]["sign"], "+");
    assert!(rows[2]["numeric"].as_f64().unwrap() > 0.0);
}

#[test]
fn eigenvalues_reject_the_circle() {
    let out = run(&["eigenvalues", "--d", "2", "--kmax", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("d ≥ 3"));
}

#[test]
fn constant_for_d3_p4_q2_is_two_pi() {
    let out = run(&["constant", "--d", "3", "--k", "2", "--q", "2"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["results"][0];
    assert!((r["value"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-8);
    assert_eq!(r["p"], 4);
    assert!(r["cross_check_rel_err"].as_f64().unwrap() < 1e-8);
}

#[test]
fn constant_with_q_infinity() {
    let out = run(&["constant", "--d", "3", "--k", "2", "--q", "inf", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let rows = csv(&out);
    assert_eq!(rows[1][2], "inf");
    let v: f64 = rows[1][3].parse().unwrap();
    assert!((v - 4.0 * PI.powf(1.5)).abs() < 1e-8 * v);
}

#[test]
fn constant_names_the_violated_clause() {
    let out = run(&["constant", "--d", "3", "--k", "2", "--q", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("clause (a)"));
}

#[test]
fn identity_suite_passes() {
    let out = run(&["verify", "identity", "--d", "3", "--samples", "1000000", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let r = &doc["results"][0];
    assert_eq!(r["verdict"], "pass");
    assert!(r["lhs"].as_f64().unwrap() <= 1e-12);
    assert_eq!(doc["meta"]["seed"], 7);
    assert_eq!(doc["meta"]["workers"], 1);
}

#[test]
fn chain_collapses_for_the_constant() {
    let out = run(&["verify", "chain", "--d", "5"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.iter().all(|r| r["verdict"] == "pass"));
}

#[test]
fn chain_is_strict_for_a_perturbation() {
    let out = run(&["verify", "chain", "--d", "4", "--trial", "perturbation", "--eps", "0.3"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let last = doc["results"].as_array().unwrap().last().unwrap().clone();
    assert!(last["lhs"].as_f64().unwrap() < last["rhs"].as_f64().unwrap());
}

#[test]
fn cor3_is_pass_or_inconclusive() {
    let out = run(&["verify", "cor3", "--d", "3", "--samples", "100000", "--seed", "1"]);
    assert!([0, 3].contains(&code(&out)), "exit {}", code(&out));
    assert!(!json(&out)["results"].as_array().unwrap().is_empty());
}

#[test]
fn failing_and_inconclusive_exit_codes() {
    // a negative tolerance is a usage error
    let out = run(&["verify", "thm1", "--d", "3", "--tolerance", "-1"]);
    assert_eq!(code(&out), 2);
    // with zero tolerance, rounding in the last place breaks exact equality
    let out = run(&["verify", "thm1", "--d", "3", "--tolerance", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["results"][0]["verdict"], "fail");
    // 64 samples cannot resolve the strict inequalities
    let out = run(&["verify", "cor3", "--d", "4", "--samples", "64", "--seed", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn convolution_rows() {
    let out = run(&["convolution", "--d", "3", "--fold", "2", "--grid", "512"]);
    assert_eq!(code(&out), 0);
    let rows = csv(&out);
    assert_eq!(rows[0].join(","), "r,density");
    let at_one = rows.iter().find(|r| r[0] == "1.0").expect("r = 1 is a node");
    assert!((at_one[1].parse::<f64>().unwrap() - 2.0 * PI).abs() < 1e-12);
    for r in &rows[1..] {
        if r[0].parse::<f64>().unwrap() > 2.0 {
            assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn fourfold_convolution_at_the_origin() {
    let out = run(&["convolution", "--d", "3", "--fold", "4"]);
    assert_eq!(code(&out), 0);
    let rows = csv(&out);
    assert_eq!(rows[1][0], "0.0");
    let v: f64 = rows[1][1].parse().unwrap();
    assert!((v / (32.0 * PI.powi(3)) - 1.0).abs() < 1e-5);
}

#[test]
fn convolution_refuses_the_planar_recursion() {
    assert_eq!(code(&run(&["convolution", "--d", "2", "--fold", "3"])), 2);
    assert_eq!(code(&run(&["convolution", "--d", "3", "--fold", "9"])), 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "bogus", "--d", "3"])), 2);
    assert_eq!(code(&run(&["constant", "--d", "x"])), 2);
    assert_eq!(code(&run(&["eigenvalues"])), 2);
    assert_eq!(code(&run(&["constant", "--d", "3", "--q", "nan"])), 2);
}

#[test]
fn output_is_reproducible_and_worker_independent() {
    let args = ["verify", "cor3", "--d", "4", "--samples", "200000", "--seed", "11", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut wide = args.to_vec();
    wide.extend(["--workers", "3"]);
    assert_eq!(run(&wide).stdout, a.stdout);
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("sharpsphere-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&["eigenvalues", "--d", "3", "--kmax", "4", "--output", p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(doc["meta"]["flags"]["command"], "eigenvalues");
    let signs: Vec<&str> = doc["results"].as_array().unwrap().iter().map(|r| r["sign"].as_str().unwrap()).collect();
    assert_eq!(signs, ["+", "-", "-", "-", "-"]);
}
