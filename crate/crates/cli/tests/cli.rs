use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susy-calogero")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_similarity_unitary_example() {
    let o = bin(&["verify", "--check", "similarity_unitary", "--k1", "1", "--k2", "1", "--beta1", "1", "--beta2", "4", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v[0];
    assert_eq!(r["check"], "similarity_unitary");
    assert_eq!(r["seed"], 7);
    assert!(r["max_rel_residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(r["passed"], true);
}

#[test]
fn sweep_decoupling_example() {
    let o = bin(&["sweep", "--check", "decoupling", "--grid", "2,2;3,3;0.5,0.5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "beta1,beta2,check,max_rel_residual,passed");
    assert_eq!(lines.len(), 4);
    for (line, prefix) in lines[1..].iter().zip(["2,2,decoupling,", "3,3,decoupling,", "0.5,0.5,decoupling,"]) {
        assert!(line.starts_with(prefix), "{line}");
        assert!(line.ends_with(",true"), "{line}");
    }
}

#[test]
fn specfun_half_integer_example() {
    let o = bin(&["specfun", "--hankel", "1", "--nu", "0.5", "--z", "2+0i"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let got = susy_calogero_cli::complex::parse_complex(v[0]["value"].as_str().unwrap()).unwrap();
    // −i √(1/π) e^{2i}
    let want = Complex64::new(0.0, -1.0) * (1.0 / std::f64::consts::PI).sqrt() * Complex64::new(0.0, 2.0).exp();
    assert!((got - want).norm() / want.norm() < 1e-14, "{got} vs {want}");
}

#[test]
fn failed_check_exits_one() {
    let o = bin(&["verify", "--check", "cast_osp", "--samples", "10"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["passed"], false);
    assert!(v[0]["measured_constant"].is_number());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&bin(&["verify", "--check", "nope"])), 2);
    assert_eq!(code(&bin(&["verify", "--check", "decoupling", "--samples", "0"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"command\": \"verify\", ").unwrap();
    assert_eq!(code(&bin(&["--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn io_errors_exit_three() {
    assert_eq!(code(&bin(&["verify", "--check", "decoupling", "--output", "/nonexistent/dir/x.json"])), 3);
    assert_eq!(code(&bin(&["--config", "/nonexistent/run.json"])), 3);
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--output", &p]);
    let o = bin(&all);
    assert!(o.stdout.is_empty());
    std::fs::read(path).unwrap()
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--check", "similarity_osp,eigen_psi11,hermiticity", "--seed", "11", "--samples", "20"];
    let a = run_to(dir.path(), "a.json", &args);
    let b = run_to(dir.path(), "b.json", &args);
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let sweep = ["sweep", "--check", "similarity_unitary", "--grid", "1,4;4,1;0.5,2;2,2", "--format", "csv", "--seed", "3"];
    assert_eq!(run_to(dir.path(), "c.csv", &sweep), run_to(dir.path(), "d.csv", &sweep));
}

#[test]
fn run_config_file_reproduces_flags() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--check", "reduction", "--grid", "1,4;2,3", "--seed", "5", "--format", "csv"];
    let cli = <susy_calogero_cli::Cli as clap::Parser>::try_parse_from(std::iter::once("susy-calogero").chain(args)).unwrap();
    let config = cli.into_config().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, config.to_json()).unwrap();
    let from_file = bin(&["--config", path.to_str().unwrap()]);
    let from_flags = bin(&args);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn model_file_supplies_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    std::fs::write(&path, r#"{"family": "susy_osp", "k1": 2, "k2": 1, "beta1": 0.5, "beta2": 4}"#).unwrap();
    let o = bin(&["verify", "--check", "similarity_osp", "--config", path.to_str().unwrap(), "--beta2", "2", "--samples", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = &v[0]["params"];
    assert_eq!((p["family"].as_str(), p["k1"].as_u64(), p["beta1"].as_f64(), p["beta2"].as_f64()), (Some("susy_osp"), Some(2), Some(0.5), Some(2.0)));
}

#[test]
fn eval_outputs_points_and_seed() {
    let o = bin(&["eval", "--family", "two_band", "--k1", "2", "--k2", "1", "--point=-0.5,1.5;0.25", "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["points"][0]["s1"], serde_json::json!([-0.5, 1.5]));
    for key in ["f", "h", "kinetic", "potential", "cross"] {
        susy_calogero_cli::complex::parse_complex(v["points"][0][key].as_str().unwrap()).unwrap();
    }
    let o = bin(&["eval", "--function", "psi11", "--beta2", "9", "--samples", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines().skip(1) {
        let residual: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(residual < 1e-10, "{line}");
    }
    assert_eq!(code(&bin(&["eval", "--family", "ordinary_cs", "--n", "2", "--point", "1,1"])), 2);
}

#[test]
fn specfun_csv_lists() {
    let o = bin(&["specfun", "--bessel", "--nu", "0,1", "--z", "1+0i,-2.5+1i", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("function,nu,z,value,error\nbessel_j,0,1+0i,0.765197686557966"));
}
