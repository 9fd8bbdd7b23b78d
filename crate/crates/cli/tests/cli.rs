use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use strassman::{strassman_count_ball, Ball, IntPoly, Prime};

fn padic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic"))
        .args(args)
        .env_remove("PADIC_DEFAULT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("padic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn solve_lists_both_balls_of_two_t_plus_t_squared() {
    let o = padic(&["solve", "--p", "2", "--coeffs", "0,2,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("2 roots"), "{out}");
    assert!(out.contains("  0 mod 2^2"), "{out}");
    assert!(out.contains("  2 mod 2^2"), "{out}");
}

#[test]
fn constant_polynomial_has_no_roots() {
    let o = padic(&["solve", "--p", "2", "--coeffs", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no roots"));
}

#[test]
fn double_root_exceeds_the_depth_limit() {
    let o = padic(&["solve", "--p", "2", "--coeffs", "0,0,1"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn kappa_of_two_t_plus_t_squared() {
    let o = padic(&["kappa", "--p", "2", "--coeffs", "0,2,1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("kappa(f) = 2^1"), "{out}");
    assert!(out.contains("kappa(f, 1) = 2^0"), "{out}");

    let o = padic(&["kappa", "--p", "2", "--coeffs", "0,2,1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "padic/kappa/v1");
    assert_eq!(v["kappa"]["exponent"], 1);
}

#[test]
fn count_on_a_ball() {
    let o = padic(&["count", "--p", "2", "--coeffs", "0,2,1", "--ball", "0:1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "2");
    let o = padic(&["count", "--p", "2", "--coeffs", "0,2,1", "--ball", "1:1"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = padic(&["count", "--p", "2", "--coeffs", "0,2,1"]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn sample_reports_the_exact_prediction() {
    let o = padic(&["sample", "--experiment", "st-unit", "--p", "2", "--d", "2", "--trials", "2000", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("prediction 4/7"), "{}", stdout(&o));
}

#[test]
fn sample_writes_a_json_report() {
    let path = std::env::temp_dir().join(format!("padic-sample-{}.json", std::process::id()));
    let o = padic(&[
        "sample", "--experiment", "projection", "--n", "3", "--r", "1", "--s", "1", "--trials", "2000", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "padic/sample/v1");
    assert_eq!(v["experiment"], "projection");
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn solve_json_round_trips_and_every_ball_isolates() {
    let o = padic(&["solve", "--p", "7", "--coeffs", "-2,0,1", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "padic/solve/v1");

    let path = scratch_file("roundtrip.json", &v["input"].to_string());
    let again = padic(&["solve", "--input", path.to_str().unwrap(), "--format", "json"]);
    let w: Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(v["roots"], w["roots"]);

    let input = &v["input"];
    let prime = Prime::new(input["p"].as_u64().unwrap()).unwrap();
    let coeffs: Vec<&str> = input["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let f: IntPoly = coeffs.join(",").parse().unwrap();
    let f = f.to_padic(prime, input["precision"].as_u64().unwrap() as u32).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    for root in roots {
        let ball: Ball = serde_json::from_value(root["ball"].clone()).unwrap();
        assert_eq!(strassman_count_ball(&f, &ball).unwrap(), 1, "{ball}");
    }
}

#[test]
fn parse_errors_report_the_position() {
    let o = padic(&["solve", "--p", "2", "--coeffs", "1,2,x3"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("coefficient 2"), "{}", stderr(&o));
}

#[test]
fn precision_comes_from_flag_then_file_then_environment() {
    let path = scratch_file("precision.json", r#"{"p": 2, "precision": 20, "coeffs": ["0", "2", "1"]}"#);
    let file = path.to_str().unwrap();
    let precision = |args: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_padic"));
        cmd.args(args).args(["--format", "json"]).env_remove("PADIC_DEFAULT_PRECISION");
        if let Some(e) = env {
            cmd.env("PADIC_DEFAULT_PRECISION", e);
        }
        let v: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["input"]["precision"].as_u64().unwrap()
    };
    assert_eq!(precision(&["solve", "--input", file, "--precision", "12"], Some("30")), 12);
    assert_eq!(precision(&["solve", "--input", file], Some("30")), 20);
    assert_eq!(precision(&["solve", "--p", "2", "--coeffs", "0,2,1"], Some("30")), 30);
    assert_eq!(precision(&["solve", "--p", "2", "--coeffs", "0,2,1"], None), 10);
}

#[test]
fn exit_codes_are_stable() {
    assert_eq!(code(&padic(&["--help"])), 0);
    assert_eq!(code(&padic(&["--version"])), 0);
    assert_eq!(code(&padic(&["frobnicate"])), 1);
    assert_eq!(code(&padic(&["solve", "--p", "4", "--coeffs", "0,1"])), 1);
    assert_eq!(code(&padic(&["solve", "--p", "2", "--coeffs", "0,1", "--precision", "0"])), 1);
    assert_eq!(code(&padic(&["solve", "--coeffs", "0,1"])), 1);
    let mismatch = scratch_file("mismatch.json", r#"{"p": 3, "coeffs": [0, 1]}"#);
    assert_eq!(code(&padic(&["solve", "--p", "5", "--input", mismatch.to_str().unwrap()])), 1);
    assert_eq!(code(&padic(&["solve", "--p", "2", "--coeffs", "0,0,1"])), 2);
    // refine needs a ball with count 1
    assert_eq!(code(&padic(&["refine", "--p", "2", "--coeffs", "0,2,1", "--ball", "0:0"])), 4);
    assert_eq!(code(&padic(&["sample", "--experiment", "projection", "--n", "2", "--r", "3", "--trials", "10"])), 4);
}

#[test]
fn refine_reaches_the_root_of_t_squared_minus_17() {
    let o = padic(&["refine", "--p", "2", "--coeffs", "-17,0,1", "--ball", "1:3", "--steps", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("x1 = 9 "), "{out}");
}

#[test]
fn tree_formats() {
    let text = stdout(&padic(&["tree", "--p", "2", "--coeffs", "0,2,1"]));
    assert!(text.contains("depth 2, width 2, 4 nodes"), "{text}");
    let dot = stdout(&padic(&["tree", "--p", "2", "--coeffs", "0,2,1", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 3);
    let v: Value = serde_json::from_str(&stdout(&padic(&["tree", "--p", "2", "--coeffs", "0,2,1", "--format", "json"]))).unwrap();
    assert_eq!(v["schema"], "padic/tree/v1");
    assert_eq!(v["stats"]["depth"], 2);
}
