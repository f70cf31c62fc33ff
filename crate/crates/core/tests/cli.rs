use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fracvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_field(
    dir: &Path,
    name: &str,
    n: usize,
    u: impl Fn(f64) -> f64,
    h: impl Fn(f64) -> f64,
) -> PathBuf {
    let mut text = String::from("x,u,h\n");
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        text.push_str(&format!("{x:.17e},{:.17e},{:.17e}\n", u(x), h(x)));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn linear(dir: &Path) -> PathBuf {
    write_field(dir, "u_linear.csv", 1001, |x| x, |_| 1.0)
}

fn smooth(dir: &Path) -> PathBuf {
    write_field(dir, "smooth.csv", 101, |x| x + 1.0, |x| x * (1.0 - x) + 0.1)
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn square_at_half_order() {
    let dir = TempDir::new().unwrap();
    let field = linear(dir.path());
    let o = fracvar(&[
        "variation",
        "-f",
        "u^2",
        "--alpha",
        "0.5",
        "--field",
        field.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o)["result"]["value"].as_f64().unwrap();
    assert!((v - 0.451_351_666_838_205).abs() < 1e-6, "{v}");
    assert_eq!(json(&o)["result"]["method"], "closed_form");
}

#[test]
fn square_at_order_one_is_classical() {
    let dir = TempDir::new().unwrap();
    let field = linear(dir.path());
    let o = fracvar(&[
        "variation",
        "-f",
        "u^2",
        "--alpha",
        "1",
        "--field",
        field.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // 2∫x·1 dx
    assert!((json(&o)["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn uux_with_oracle_check() {
    let dir = TempDir::new().unwrap();
    let field = smooth(dir.path());
    let f = field.to_str().unwrap();
    let o = fracvar(&[
        "variation",
        "-f",
        "u*ux",
        "--alpha",
        "0.5",
        "--field",
        f,
        "--oracle",
        "--check",
        "--steps",
        "1024",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(json(&o)["rel_dev"].as_f64().unwrap() < 1e-3);
    let o = fracvar(&[
        "variation",
        "-f",
        "u*ux",
        "--alpha",
        "0.5",
        "--field",
        f,
        "--oracle",
        "--check",
        "--steps",
        "1024",
        "--tolerance",
        "1e-15",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn variation_csv_output() {
    let dir = TempDir::new().unwrap();
    let field = smooth(dir.path());
    let o = fracvar(&[
        "variation",
        "-f",
        "u^3",
        "--alpha",
        "0.3",
        "--field",
        field.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,integrand"));
    assert_eq!(lines.count(), 101);
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let field = linear(dir.path());
    let f = field.to_str().unwrap();
    let o = fracvar(&["variation", "-f", "u^^2", "--alpha", "0.5", "--field", f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
    assert_eq!(
        fracvar(&["variation", "-f", "u", "--alpha", "1.5", "--field", f])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fracvar(&[
            "variation",
            "-f",
            "u",
            "--alpha",
            "0.5",
            "--field",
            "/nonexistent.csv"
        ])
        .status
        .code(),
        Some(1)
    );
    let negative = write_field(dir.path(), "neg.csv", 11, |x| x - 0.5, |_| 1.0);
    let o = fracvar(&[
        "variation",
        "-f",
        "u^2",
        "--alpha",
        "0.5",
        "--field",
        negative.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(fracvar(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fracvar(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let o = fracvar(&["verify", "--only", "prop1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let checks = json(&o)["checks"].as_array().unwrap().clone();
    assert!(!checks.is_empty());
    for c in &checks {
        assert!(c["name"].as_str().unwrap().starts_with("prop1."));
        for key in ["anchor", "expected", "computed", "deviation", "pass"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
    let o = fracvar(&["verify", "--only", "prop1.oracle", "--tolerance", "1e-12"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        fracvar(&["verify", "--only", "nothing"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_default_passes() {
    let o = fracvar(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("statement_erratum"));
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[test]
fn sweep_endpoints() {
    let dir = TempDir::new().unwrap();
    let field = smooth(dir.path());
    let o = fracvar(&[
        "sweep",
        "-f",
        "u^2",
        "--field",
        field.to_str().unwrap(),
        "--alpha",
        "0:1:0.1",
        "--steps",
        "512",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.starts_with("alpha,value_closed,value_oracle,rel_dev\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 11);
    assert!(r.windows(2).all(|w| w[0][0] < w[1][0]));
    // F[u] = ∫(x+1)² = 7/3 and δF = 2∫(x+1)(x(1-x)+0.1) = 4/5, up to trapezoid error
    assert!((r[0][1] - 7.0 / 3.0).abs() < 1e-4);
    assert!((r[10][1] - 0.8).abs() < 1e-4);
    assert!(r.iter().all(|row| row[3] < 1e-3));
}

#[test]
fn sweep_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let field = smooth(dir.path());
    let args = [
        "sweep",
        "-f",
        "u*ux + u^3",
        "--field",
        field.to_str().unwrap(),
        "--alpha",
        "0.1:0.9:0.2",
        "--steps",
        "256",
    ];
    assert_eq!(fracvar(&args).stdout, fracvar(&args).stdout);
}

#[test]
fn sweep_errors() {
    assert_eq!(
        fracvar(&["sweep", "--lambda", "2", "--alpha", "0.8:0.2:0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fracvar(&["sweep", "--lambda", "2", "--alpha", "0:1:-1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn lambda_sweep() {
    let o = fracvar(&["sweep", "--lambda", "2", "--alpha", "0:1:0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 21);
    assert!((r[0][1] - 1.0).abs() < 1e-12 && (r[20][1] - 1.0).abs() < 1e-12);
    assert!((r[10][1] - 0.75).abs() < 1e-12);
    // a single interior minimum, slightly left of α = 1/2
    let low = (0..r.len())
        .min_by(|&i, &j| r[i][1].partial_cmp(&r[j][1]).unwrap())
        .unwrap();
    assert_eq!(r[low][0], 0.45);
    assert!(r[..=low].windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(r[low..].windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn specfun_and_deriv() {
    let o = fracvar(&["specfun", "gamma", "0.5"]);
    assert_eq!(stdout(&o).trim(), "1.7724538509055159e0");
    let o = fracvar(&["specfun", "hyp2f1", "0.5", "1", "2", "1"]);
    assert!((stdout(&o).trim().parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
    let o = fracvar(&[
        "deriv",
        "--rule",
        "power",
        "--alpha",
        "0.5",
        "--exponent",
        "1",
        "--x",
        "1",
        "--oracle",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
    assert!(v["rel_dev"].as_f64().unwrap() < 1e-3);
    let o = fracvar(&[
        "deriv",
        "--rule",
        "product",
        "--alpha",
        "0.5",
        "--exponent",
        "1.5",
        "--gamma-exp",
        "2",
        "--base",
        "-1.3",
        "--x",
        "0",
        "--oracle",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(json(&o)["rel_dev"].as_f64().unwrap() < 1e-3);
}

#[test]
fn euler_lagrange_output() {
    let dir = TempDir::new().unwrap();
    let field = smooth(dir.path());
    let o = fracvar(&[
        "euler-lagrange",
        "-f",
        "0.5*ux^2",
        "--alpha",
        "1",
        "--field",
        field.to_str().unwrap(),
        "--multiplier",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.starts_with("x,residual,multiplier\n"));
    // -uₓₓ = 0 for linear u
    assert!(rows(&text).iter().all(|r| r[1].abs() < 1e-9));
}
