use std::process::{Command, Output};

use laxforge::{BenentiSpec, CheckReport, CoeffPoly, LaxMatrix, LaxSystem, Viete};
use serde_json::Value;

fn laxforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxforge")).args(args).env_remove("LAXFORGE_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn build_prints_hamiltonians_and_matrices() {
    let o = laxforge(&["build", "--n", "2", "--f", "-1", "--g", "0", "--sigma", "-2:1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("system: n=2 f=l^-1 g=l^0 sigma=l^-2"));
    assert!(text.contains("\nH1 = ") && text.contains("\nH2 = "));
    assert!(text.contains("  e12 = l^2 + (q1)*l + (q2)"));
    assert!(text.contains("U1:") && text.contains("U2:"));
}

#[test]
fn build_one_degree_of_freedom() {
    let o = laxforge(&["build", "--n", "1", "--sigma", "1:1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("H1 = 1/2*p1^2 + q1"), "{text}");
    assert!(text.contains("U1:\n  e11 = 0\n  e12 = (1/2)\n  e21 = 0\n  e22 = 0"), "{text}");
}

#[test]
fn build_json_round_trips() {
    let o = laxforge(&["build", "--n", "3", "--f", "1", "--g", "-1", "--sigma", "5:1,-1:2/3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let spec: BenentiSpec = serde_json::from_value(doc["spec"].clone()).unwrap();
    let sys = LaxSystem::build(&spec).unwrap();
    let vars = Viete::new(3).vars().clone();
    let hs: Vec<CoeffPoly> =
        doc["hamiltonians"].as_array().unwrap().iter().map(|h| CoeffPoly::from_json(&vars, h).unwrap()).collect();
    assert_eq!(hs, sys.hamiltonians.h);
    assert_eq!(LaxMatrix::from_json(&vars, &doc["L"]).unwrap(), sys.l);
    for (k, u) in doc["U"].as_array().unwrap().iter().enumerate() {
        assert_eq!(LaxMatrix::from_json(&vars, u).unwrap(), sys.u_matrix(k + 1).unwrap());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&laxforge(&["build", "--n", "0"])), 2);
    assert_eq!(code(&laxforge(&["build", "--n", "2", "--sigma", "3:0"])), 2);
    assert_eq!(code(&laxforge(&["build", "--n", "2", "--sigma", "x"])), 2);
    assert_eq!(code(&laxforge(&["build"])), 2);
    assert_eq!(code(&laxforge(&["verify", "--example", "ex9"])), 2);
    assert_eq!(code(&laxforge(&["simulate", "--n", "2", "--q0", "0.1,0.2"])), 2);
}

fn reports(o: &Output) -> Vec<CheckReport> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn small_grid_verifies() {
    let o = laxforge(&["verify", "--grid", "small", "--seed", "42", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rs = reports(&o);
    assert!(rs.len() > 81 * 5 && rs.iter().all(CheckReport::passed));
}

#[test]
fn example_verifies() {
    for id in ["ex1", "ex3_g0"] {
        let o = laxforge(&["verify", "--example", id]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
    }
}

#[test]
fn corrupted_systems_fail() {
    let o = laxforge(&["verify", "--corrupt", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let rs = reports(&o);
    assert_eq!(rs.len(), 2);
    assert!(rs.iter().all(|r| !r.passed() && r.witness.is_some()));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify", "--n", "2", "--f", "1", "--sigma", "4:-1", "--format", "json", "--seed", "9"];
    let (a, b) = (laxforge(&args), laxforge(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_laxforge"))
        .args(&args[..args.len() - 2])
        .env("LAXFORGE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn simulate_bounded_example() {
    let o = laxforge(&["simulate", "--example", "ex2_g0", "--t-end", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["report"]["steps"], 2000);
    assert!(doc["report"]["eigen_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn zero_length_simulation() {
    let o = laxforge(&[
        "simulate", "--n", "2", "--f", "-1", "--sigma", "-2:1", "--q0", "0.5,0.3", "--p0", "0.1,-0.2", "--t-end", "0",
        "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["report"]["steps"], 0);
    assert_eq!(doc["report"]["eigen_drift"], 0.0);
    assert!(doc["report"]["energy_drift"].as_array().unwrap().iter().all(|d| d == 0.0));
}

#[test]
fn singular_start_exits_3() {
    let o = laxforge(&["simulate", "--example", "ex3_g0", "--q0", "0.5,0", "--p0", "0.1,0.2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singularity"));
}

#[test]
fn examples_list_errata_and_pass() {
    let o = laxforge(&["examples"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for id in laxforge::verify::EXAMPLE_IDS {
        assert!(text.contains(&format!("== {id}\n")));
        assert!(text.contains(&format!("PASS fixture[{id}]")));
    }
    assert!(text.contains("erratum: "));
    let o = laxforge(&["examples", "--example", "ex1", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["example"], "ex1");
    assert_eq!(doc["check"]["status"], "pass");
}
