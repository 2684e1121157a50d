use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_veech-ladder"));
    cmd.args(args).env_remove("LADDER_DEPTH_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "veech-ladder/1");
    v
}

#[test]
fn lambda_golden_and_rejections() {
    let o = run(&["lambda", "--k", "2", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lambda = -1/2 + 1/2*sqrt(5)"), "{out}");
    assert!(out.contains("approx = 0.618033988749"), "{out}");
    assert!(out.contains("residual = 0"), "{out}");

    assert_eq!(run(&["lambda", "--k", "1", "--l", "1"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "--k", "3", "--l", "2"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "--k", "2", "--l", "0"]).status.code(), Some(2));
}

#[test]
fn lambda_json_for_k3() {
    let v = json(&["lambda", "--k", "3", "--l", "1"]);
    assert_eq!(v["lambda"]["exact"], "-1/2 + 1/2*sqrt(3)");
    assert_eq!(v["lambda"]["approx"], "0.366025403784");
    assert_eq!(v["D"], 3);
    assert_eq!(v["residual"], "0");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["lambda", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["render", "--figure", "teapot"]).status.code(), Some(2));
    assert_eq!(run(&["membership", "1 x 0 1"]).status.code(), Some(2));
    assert_eq!(run(&["membership", "1 1 0"]).status.code(), Some(2));
    assert_eq!(run(&["membership", "--word", "T^"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["cylinders", "--depth", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--max-word-len", "17"]).status.code(), Some(2));
    assert_eq!(run_env(&["lambda"], &[("LADDER_DEPTH_LIMIT", "many")]).status.code(), Some(2));
}

#[test]
fn cylinders_golden_tables() {
    let v = json(&["cylinders", "--depth", "12"]);
    let dirs = v["directions"].as_array().unwrap();
    assert_eq!(dirs.len(), 3);
    let h = &dirs[0];
    assert_eq!(h["direction"], "horizontal");
    let cyl = h["cylinders"].as_array().unwrap();
    assert_eq!(cyl[0]["modulus"]["exact"], "1/2 + 1/2*sqrt(5)");
    for c in &cyl[1..] {
        // 1/lambda + 1 + lambda = 1 + sqrt(5)
        assert_eq!(c["modulus"]["exact"], "1 + sqrt(5)");
    }
    assert_eq!(h["commensurability"]["status"], "commensurable");
    let mult: Vec<u64> = serde_json::from_value(h["commensurability"]["multipliers"].clone()).unwrap();
    assert_eq!(mult[0], 2);
    assert!(mult[1..].iter().all(|&x| x == 1));
    assert_eq!(h["shear"]["exact"], "1 + sqrt(5)");
    assert!(h["shear"]["approx"].as_str().unwrap().starts_with("3.2360679"));
    assert_eq!(h["parabolic"]["b"], "1 + sqrt(5)");

    let vert = &dirs[1];
    assert_eq!(vert["direction"], "vertical");
    let moduli = |d: &Value| -> Vec<Value> {
        d["cylinders"].as_array().unwrap().iter().map(|c| c["modulus"].clone()).collect()
    };
    assert_eq!(moduli(h), moduli(vert));
}

#[test]
fn depth_limit_caps_depth() {
    let o = run_env(&["cylinders", "--depth", "40", "--direction", "horizontal", "--format", "json"], &[(
        "LADDER_DEPTH_LIMIT",
        "5",
    )]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["depth"], 5);
    assert_eq!(v["directions"][0]["cylinders"].as_array().unwrap().len(), 6);
    assert!(stderr(&o).contains("capped"));
}

#[test]
fn membership_answers() {
    let yes_t = run(&["membership", "1", "1 + sqrt(5)", "0", "1"]);
    assert_eq!(yes_t.status.code(), Some(0));
    assert!(stdout(&yes_t).contains("yes: T"), "{}", stdout(&yes_t));

    let no = run(&["membership", "1 1 0 1"]);
    assert_eq!(no.status.code(), Some(0));
    assert!(stdout(&no).trim_end().ends_with("no"));

    let w = run(&["membership", "--word", "R T^2 R^2"]);
    assert!(stdout(&w).contains("yes: R T^2 R^2"), "{}", stdout(&w));

    let v = json(&["membership", "--word", "R T^2 R^2", "--trace"]);
    assert_eq!(v["question"], "G-membership");
    assert_eq!(v["answer"], "yes");
    assert!(!v["trace"].as_array().unwrap().is_empty());

    // for l > 1 the answer carries a warning
    let o = run(&["membership", "--k", "5", "--l", "2", "--word", "T"]);
    assert!(stdout(&o).contains("yes: T"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn reduce_reports_a_word() {
    let v = json(&["reduce", "--re", "3/7", "--im", "1/50"]);
    assert!(v["iterations"].as_u64().unwrap() >= 1);
    assert_ne!(v["word"], "id");
}

#[test]
fn check_passes_and_faults_fail() {
    let o = run(&["check"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 12, "{out}");

    for (fault, name) in [
        ("chart-factor", "conjugation-identity"),
        ("hexagon-gluing", "hexagon-rotation-symmetry"),
        ("area-tail", "area-identity"),
    ] {
        let o = run(&["check", "--depth", "8", "--max-word-len", "3", "--inject-fault", fault]);
        assert_eq!(o.status.code(), Some(1), "{fault}");
        assert!(stderr(&o).contains(name), "{}", stderr(&o));
    }
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for figure in ["surface", "cylinders", "segments", "domain"] {
        let mut bodies = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{figure}-{i}.svg"));
            let o = run(&["render", "--figure", figure, "--depth", "6", "--output", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            bodies.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(bodies[0], bodies[1], "{figure}");
        assert!(bodies[0].starts_with(b"<?xml"));
    }
    let o = run(&["render", "--figure", "cylinders", "--direction", "antidiagonal"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_figure_has_strip_and_arcs() {
    let o = run(&["render", "--figure", "domain", "--k", "2", "--l", "1"]);
    let svg = stdout(&o);
    assert!(svg.contains(r#"x1="-2.000000""#), "left side at -2");
    assert!(svg.contains(r#"x1="1.236068""#), "right side at 2(1+lambda)-2");
    assert!(svg.matches("<path").count() >= 2, "two unit arcs");
}

#[test]
fn report_round_trips_through_json() {
    let o = run(&["report", "--depth", "6", "--max-word-len", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "veech-ladder/1");
    assert_eq!(v["area"]["exact"], "5/2 + 1/2*sqrt(5)");
    assert_eq!(v["generators"]["T"]["b"], "1 + sqrt(5)");
    assert_eq!(v["domain"]["strip_left"]["exact"], "-2");
    assert_eq!(v["checks"].as_array().unwrap().len(), 12);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}
