use std::process::{Command, Output};

use serde_json::Value;

const HEADER: &str = "g0,gamma0,g_tau,gamma_tau,beta,C,D,S_irr,ratio,W,dF,lowT,error";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyquench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn field(line: &str, name: &str) -> String {
    let i = HEADER
        .split(',')
        .position(|h| h == name)
        .expect("known column");
    line.split(',').nth(i).expect("column present").to_string()
}

fn num(line: &str, name: &str) -> f64 {
    field(line, name).parse().expect("numeric field")
}

#[test]
fn csv_schema_and_line_endings() {
    let o = run(&[
        "sweep", "--g0", "0:2:5", "--gamma0", "1", "--beta", "0.1,inf", "--delta", "0.01",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 1 + 10);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 13, "{line}");
        let mantissa = field(line, "C");
        let digits: String = mantissa.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(digits.len(), 12, "{mantissa}");
    }
    let g0s: Vec<f64> = lines[1..].iter().map(|l| num(l, "g0")).collect();
    assert!(g0s.windows(2).all(|w| w[0] <= w[1]));
    let low_t = lines[2];
    assert_eq!(field(low_t, "beta"), "inf");
    assert_eq!(field(low_t, "lowT"), "1");
    assert!(field(low_t, "W").is_empty() && field(low_t, "dF").is_empty());
    assert_eq!(field(lines[1], "lowT"), "0");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let base = [
        "sweep",
        "--g0",
        "0.2:1.8:9",
        "--gamma0",
        "0.3,1",
        "--beta",
        "0.5:20:3:log",
        "--delta",
        "-0.02",
    ];
    let outputs: Vec<Vec<u8>> = ["1", "2", "7"]
        .iter()
        .map(|t| {
            let mut args = base.to_vec();
            args.extend(["--threads", t]);
            let o = run(&args);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let args = [
        "sweep",
        "--g0",
        "0.4,1.6",
        "--gamma0",
        "0.7",
        "--beta",
        "3",
        "--kind",
        "anisotropy",
        "--delta",
        "0.05",
    ];
    let direct = run(&args);
    let mut to_file = args.to_vec();
    to_file.extend(["--output", path.to_str().unwrap()]);
    let o = run(&to_file);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn point_agrees_with_single_point_sweep() {
    for beta in ["0.7", "inf"] {
        let p = run(&[
            "point",
            "--g0",
            "0.8",
            "--gamma0",
            "0.6",
            "--gtau",
            "0.83",
            "--gammatau",
            "0.6",
            "--beta",
            beta,
        ]);
        let s = run(&[
            "sweep", "--g0", "0.8", "--gamma0", "0.6", "--beta", beta, "--delta", "0.03",
        ]);
        assert!(p.status.success() && s.status.success());
        assert_eq!(stdout(&p), stdout(&s));
    }
}

#[test]
fn high_temperature_ising_point() {
    let o = run(&[
        "point",
        "--g0",
        "0.5",
        "--gamma0",
        "1",
        "--gtau",
        "0.51",
        "--gammatau",
        "1",
        "--beta",
        "0.01",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!((num(row, "ratio") - 0.5).abs() < 1e-3);
    let s = num(row, "S_irr");
    let (w, df) = (num(row, "W"), num(row, "dF"));
    assert!((0.01 * (w - df) - s).abs() < 1e-9 * s);
}

#[test]
fn null_quench_point_is_zero() {
    let o = run(&["point", "--g0", "1.3", "--gamma0", "0.4", "--beta", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    for c in ["C", "D", "S_irr", "ratio", "W", "dF"] {
        assert_eq!(num(row, c), 0.0, "{c}");
    }
}

#[test]
fn infinite_beta_spellings() {
    let rows: Vec<String> = ["inf", "INF", "Inf"]
        .iter()
        .map(|b| {
            stdout(&run(&[
                "point", "--g0", "0.5", "--gamma0", "1", "--gtau", "0.51", "--beta", b,
            ]))
        })
        .collect();
    assert_eq!(rows[0], rows[1]);
    assert_eq!(rows[0], rows[2]);
    assert_eq!(field(rows[0].lines().nth(1).unwrap(), "lowT"), "1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["point", "--g0", "0.5"]).status.code(), Some(2));
    assert_eq!(
        run(&["point", "--g0", "0.5", "--gamma0", "1", "--beta", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["point", "--g0", "0.5", "--gamma0", "1.5", "--beta", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sweep", "--g0", "0:1:0", "--gamma0", "1", "--beta", "1", "--delta", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sweep", "--g0", "1", "--gamma0", "1", "--beta", "1", "--delta", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));

    // a row leaving the anisotropy range fails alone; the rest are still written
    let o = run(&[
        "sweep",
        "--g0",
        "0.5",
        "--gamma0",
        "0.5,0.95",
        "--beta",
        "1",
        "--kind",
        "anisotropy",
        "--delta",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(field(lines[1], "error").is_empty());
    assert!(lines[2].contains("anisotropy gamma must lie in [0, 1]"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 of 2 rows failed"));
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON object")
}

#[test]
fn limits_records() {
    let inf = run(&[
        "limits",
        "infinitesimal",
        "--g0",
        "0.3",
        "--gamma0",
        "0.8",
        "--delta",
        "0.01",
    ]);
    assert!(inf.status.success());
    let v = json(&inf);
    assert!((v["lag_coeff"].as_f64().unwrap() - 0.5e-4).abs() < 1e-14);

    let v = json(&run(&[
        "limits", "high-t", "--g0", "0.5", "--gamma0", "1", "--gtau", "0.501",
    ]));
    assert!((v["c_coeff"].as_f64().unwrap() / 1e-6 - 0.25).abs() < 1e-3);
    assert!((v["ratio"].as_f64().unwrap() - 0.5).abs() < 1e-3);

    let v = json(&run(&[
        "limits", "zero-t", "--g0", "0.9", "--gamma0", "1", "--gtau", "1.4",
    ]));
    let c = v["coherence"].as_f64().unwrap();
    assert!(c > 0.0 && c <= 0.5 * 2f64.ln());
    assert_eq!(v["lag_over_beta"], v["population_over_beta"]);

    let v = json(&run(&[
        "limits",
        "susceptibility",
        "--g0",
        "3",
        "--gamma0",
        "1",
    ]));
    let (fd, exact) = (
        v["chi"].as_f64().unwrap(),
        v["chi_integral"].as_f64().unwrap(),
    );
    assert!((fd - exact).abs() < 1e-6 * exact);

    let v = json(&run(&[
        "limits", "scan", "--gamma0", "1", "--delta", "0.01", "--beta", "inf", "--window", "0.05",
        "--step", "1e-3",
    ]));
    assert_eq!(v["non_analytic"], Value::Bool(true));
    assert_eq!(v["beta"], Value::String("inf".into()));
}

#[test]
fn verify_reports_every_check() {
    let o = run(&["verify", "--seed", "11"]);
    let text = stdout(&o);
    let reports: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(reports.len() >= 8);
    for r in &reports {
        for key in ["check", "status", "value", "expected", "tolerance"] {
            assert!(r.get(key).is_some(), "{r}");
        }
        assert_eq!(r["status"], "pass", "{r}");
    }
    assert!(o.status.success());
}

#[test]
fn verify_negative_control() {
    let o = run(&["verify", "--tolerance", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failures: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["status"] == "fail")
        .collect();
    assert!(failures.len() >= 4, "{text}");
    for f in &failures {
        // serde_json parses floats to within an ulp
        assert!((f["tolerance"].as_f64().unwrap() / 1e-30 - 1.0).abs() < 1e-15);
        assert!(f["value"].as_f64().unwrap() > 1e-30);
    }
}
