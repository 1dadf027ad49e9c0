use alphadiv::densities::{load_density, DensityFormat, LoadOptions};
use std::path::{Path, PathBuf};
use std::process::Command;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn alphadiv<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_alphadiv"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn csv(dir: &TempDir, name: &str, values: &[f64]) -> PathBuf {
    let mut text = String::from("x,value\n");
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{},{}\n", i, v));
    }
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn field(stdout: &str, key: &str) -> String {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{}: ", key)))
        .unwrap_or_else(|| panic!("no {} in {}", key, stdout))
        .to_string()
}

fn json(stdout: &str) -> serde_json::Value {
    serde_json::from_str(stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn compute_examples() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let r = alphadiv([
        "compute",
        "--method",
        "qa",
        "--f",
        "identity",
        "--g",
        "log",
        "--alpha",
        "1",
        p(&a),
        p(&a),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, "value"), "0");

    let two = csv(&dir, "two.csv", &[2.0]);
    let one = csv(&dir, "one.csv", &[1.0]);
    let r = alphadiv([
        "compute",
        "--method",
        "power",
        "--r",
        "1",
        "--s",
        "-1",
        "--alpha",
        "1",
        p(&two),
        p(&one),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, "value"), "1");
    assert_eq!(field(&r.stdout, "limit_branch_used"), "true");
}

#[test]
fn amari_alpha_matches_standard_alpha_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let b = csv(&dir, "b.csv", &[1.1, 0.3, 4.0]);
    let x = alphadiv([
        "compute",
        "--method",
        "standard",
        "--alpha-amari",
        "0",
        "--format",
        "json",
        p(&a),
        p(&b),
    ]);
    let y = alphadiv([
        "compute",
        "--method",
        "standard",
        "--alpha",
        "0.5",
        "--format",
        "json",
        p(&a),
        p(&b),
    ]);
    assert_eq!(x.code, 0);
    let (x, y) = (json(&x.stdout), json(&y.stdout));
    assert_eq!(
        x["value"].as_f64().unwrap().to_bits(),
        y["value"].as_f64().unwrap().to_bits()
    );
    assert_eq!(x, y);
}

#[test]
fn compute_all_methods() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let b = csv(&dir, "b.csv", &[1.1, 0.3, 4.0]);
    let runs: Vec<Vec<&str>> = vec![
        vec!["--method", "standard", "--alpha", "0.3"],
        vec![
            "--method", "qa", "--f", "pow:2", "--g", "recip", "--alpha", "0.3",
        ],
        vec![
            "--method", "power", "--r", "3", "--s", "0.5", "--alpha", "0.3",
        ],
        vec![
            "--method",
            "zhang-rho",
            "--rho",
            "recip",
            "--alpha-amari",
            "0.4",
        ],
        vec![
            "--method",
            "zhang-ab",
            "--alpha-amari",
            "0.4",
            "--beta-amari",
            "0.2",
        ],
        vec!["--method", "kl-fg", "--f", "identity", "--g", "recip"],
        vec!["--method", "jeffreys-fg"],
    ];
    for extra in runs {
        let mut args = vec!["compute", "--format", "json"];
        args.extend(&extra);
        args.extend([p(&a), p(&b)]);
        let r = alphadiv(&args);
        assert_eq!(r.code, 0, "{:?}: {}", extra, r.stderr);
        let v = json(&r.stdout)["value"].as_f64().unwrap();
        assert!(v > 0.0 && v.is_finite(), "{:?} gave {}", extra, v);
    }
    // zhang-rho at α_A equals qa with (identity, ρ) at α = (1 - α_A)/2
    let z = alphadiv([
        "compute",
        "--method",
        "zhang-rho",
        "--rho",
        "recip",
        "--alpha",
        "0.3",
        "--format",
        "json",
        p(&a),
        p(&b),
    ]);
    let q = alphadiv([
        "compute",
        "--method",
        "qa",
        "--f",
        "identity",
        "--g",
        "recip",
        "--alpha",
        "0.3",
        "--format",
        "json",
        p(&a),
        p(&b),
    ]);
    let (z, q) = (
        json(&z.stdout)["value"].as_f64().unwrap(),
        json(&q.stdout)["value"].as_f64().unwrap(),
    );
    assert!((z - q).abs() <= 1e-12 * q);
}

#[test]
fn compute_usage_and_domain_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0]);
    let short = csv(&dir, "short.csv", &[0.5]);
    let zero = csv(&dir, "zero.csv", &[0.0, 1.0]);
    let cases: Vec<Vec<&str>> = vec![
        vec!["compute", "--method", "qa", p(&a), p(&a)],
        vec![
            "compute",
            "--method",
            "power",
            "--alpha",
            "0.5",
            p(&a),
            p(&a),
        ],
        vec![
            "compute",
            "--method",
            "power",
            "--r",
            "-1",
            "--s",
            "1",
            "--alpha",
            "0.5",
            p(&a),
            p(&a),
        ],
        vec![
            "compute",
            "--method",
            "qa",
            "--f",
            "log",
            "--g",
            "identity",
            "--alpha",
            "0.5",
            p(&a),
            p(&a),
        ],
        vec!["compute", "--method", "qa", "--alpha", "1.5", p(&a), p(&a)],
        vec![
            "compute",
            "--alpha",
            "0.5",
            "--alpha-amari",
            "0",
            p(&a),
            p(&a),
        ],
        vec!["compute", "--alpha", "0.5", p(&a), p(&short)],
        vec!["compute", "--alpha", "0.5", p(&a), p(&zero)],
        vec!["compute", "--alpha", "0.5", p(&a), "/nonexistent/file.csv"],
    ];
    for args in cases {
        let r = alphadiv(&args);
        assert_eq!(r.code, 2, "{:?} {}", args, r.stdout);
        assert!(!r.stderr.is_empty());
    }
    let r = alphadiv([
        "compute",
        "--alpha",
        "0.5",
        "--clamp-eps",
        "1e-9",
        "--format",
        "json",
        p(&a),
        p(&zero),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r.stdout)["clamped_values"], 1);
}

#[test]
fn input_format_inference() {
    let dir = TempDir::new().unwrap();
    let txt = dir.path().join("a.txt");
    std::fs::write(&txt, "x,value\n0,1\n").unwrap();
    let r = alphadiv(["compute", "--alpha", "0.5", p(&txt), p(&txt)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--input-format"));
    let r = alphadiv([
        "compute",
        "--alpha",
        "0.5",
        "--input-format",
        "csv",
        p(&txt),
        p(&txt),
    ]);
    assert_eq!(r.code, 0);
    let js = dir.path().join("a.json");
    std::fs::write(&js, r#"{"support": ["u", "v"], "values": [1, 2]}"#).unwrap();
    let r = alphadiv(["compute", "--alpha", "0.5", p(&js), p(&js)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

fn sweep_rows(stdout: &str) -> Vec<(f64, f64)> {
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("alpha,value"));
    lines
        .map(|l| {
            let (a, v) = l.split_once(',').unwrap();
            (a.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn sweep_examples() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let b = csv(&dir, "b.csv", &[1.1, 0.3, 4.0]);

    let r = alphadiv(["sweep", "--range", "0:1:0.1", p(&a), p(&a)]);
    assert_eq!(r.code, 0);
    let rows = sweep_rows(&r.stdout);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|&(_, v)| v == 0.0));

    let fwd = sweep_rows(&alphadiv(["sweep", "--range", "0:1:0.25", p(&a), p(&b)]).stdout);
    let rev = sweep_rows(&alphadiv(["sweep", "--range", "0:1:0.25", p(&b), p(&a)]).stdout);
    assert_eq!(fwd.first().unwrap().0, 0.0);
    assert_eq!(fwd.last().unwrap().0, 1.0);
    assert!(fwd.iter().all(|&(_, v)| v.is_finite() && v > 0.0));
    let (f, r) = (fwd[2].1, rev[2].1);
    assert!((f - r).abs() <= 1e-13 * f);
    for (x, y) in fwd.iter().zip(rev.iter().rev()) {
        assert!((x.1 - y.1).abs() <= 1e-12 * x.1);
    }
}

#[test]
fn sweep_is_continuous_across_the_limit_branch() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let b = csv(&dir, "b.csv", &[1.1, 0.3, 4.0]);
    for method in [
        vec!["--method", "qa", "--g", "recip"],
        vec!["--method", "standard"],
        vec!["--method", "power", "--r", "2", "--s", "-1"],
    ] {
        for range in ["0.9999985:1:0.0000005", "0:0.0000015:0.0000005"] {
            let mut args = vec!["sweep", "--range", range];
            args.extend(&method);
            args.extend([p(&a), p(&b)]);
            let r = alphadiv(&args);
            assert_eq!(r.code, 0, "{}", r.stderr);
            let rows = sweep_rows(&r.stdout);
            assert_eq!(rows.len(), 4);
            for w in rows.windows(2) {
                assert!(
                    (w[1].1 - w[0].1).abs() <= 1e-4 * w[0].1,
                    "{:?} {:?}",
                    method,
                    w
                );
            }
        }
    }
}

#[test]
fn sweep_rejects_bad_ranges() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5]);
    for range in ["0:1", "0:1.5:0.1", "0.5:0.1:0.1", "0:1:0", "x:1:0.1"] {
        assert_eq!(
            alphadiv(["sweep", "--range", range, p(&a), p(&a)]).code,
            2,
            "{}",
            range
        );
    }
    assert_eq!(
        alphadiv(["sweep", "--method", "kl-fg", p(&a), p(&a)]).code,
        2
    );
}

#[test]
fn check_examples() {
    let r = alphadiv(["check", "--f", "identity", "--g", "log"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("Comparable"));
    let r = alphadiv(["check", "--f", "log", "--g", "identity"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("NotComparable"));
    assert!(r.stdout.contains("witness: a="));
    let r = alphadiv(["check", "--f", "log", "--g", "identity", "--format", "json"]);
    let w = &json(&r.stdout)["witness"];
    assert!(w["h_b"].as_f64().unwrap() > w["chord_at_b"].as_f64().unwrap());
    let r = alphadiv(["check", "--f", "pow:2", "--g", "pow:1", "--conformal"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("Comparable"));
    assert!(r.stdout.contains("conformal identity: PASS"));
    let r = alphadiv([
        "check", "--f", "identity", "--g", "log", "--grid", "0.5:2:16", "--format", "json",
    ]);
    assert_eq!(json(&r.stdout)["grid_points"], 16);
    assert_eq!(alphadiv(["check", "--f", "cosh", "--g", "log"]).code, 2);
    assert_eq!(
        alphadiv(["check", "--f", "identity", "--g", "log", "--grid", "1:2:2"]).code,
        2
    );
}

#[test]
fn cauchy_examples() {
    let r = alphadiv([
        "cauchy", "--s1", "1", "--s2", "1", "--alpha", "0.3", "--format", "json",
    ]);
    assert_eq!(r.code, 0);
    let v = json(&r.stdout);
    assert!(v["closed_form"].as_f64().unwrap().abs() <= 1e-12);
    assert!(v["quadrature"].as_f64().unwrap().abs() <= 1e-12);

    let r = alphadiv(["cauchy", "--s1", "1", "--s2", "2", "--alpha", "0.5"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(field(&r.stdout, "rel_error").parse::<f64>().unwrap() <= 1e-3);

    let x = json(
        &alphadiv([
            "cauchy", "--s1", "0.7", "--s2", "2.5", "--alpha", "0.2", "--points", "20001",
            "--format", "json",
        ])
        .stdout,
    );
    let y = json(
        &alphadiv([
            "cauchy", "--s1", "2.5", "--s2", "0.7", "--alpha", "0.8", "--points", "20001",
            "--format", "json",
        ])
        .stdout,
    );
    let (cx, cy) = (
        x["closed_form"].as_f64().unwrap(),
        y["closed_form"].as_f64().unwrap(),
    );
    assert!((cx - cy).abs() <= 1e-14 * cx);
    let (qx, qy) = (
        x["quadrature"].as_f64().unwrap(),
        y["quadrature"].as_f64().unwrap(),
    );
    assert!((qx - qy).abs() <= 1e-12 * qx);

    // a coarse grid misses the tails and must fail the 1e-3 gate
    let r = alphadiv([
        "cauchy",
        "--s1",
        "1",
        "--s2",
        "2",
        "--alpha",
        "0.5",
        "--half-width",
        "10",
        "--points",
        "101",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL"));
    assert_eq!(
        alphadiv(["cauchy", "--s1", "-1", "--s2", "2", "--alpha", "0.5"]).code,
        2
    );
    assert_eq!(
        alphadiv(["cauchy", "--s1", "1", "--s2", "2", "--alpha", "1"]).code,
        2
    );
}

#[test]
fn centroid_examples() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0, 1.5]);
    let r = alphadiv(["centroid", "--alpha", "0.3", "--format", "json", p(&a)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r.stdout);
    assert_eq!(v["objective"], 0.0);
    assert_eq!(v["centroid"]["values"], serde_json::json!([0.5, 2.0, 1.5]));

    let r = alphadiv([
        "centroid",
        "--alpha",
        "0.3",
        "--format",
        "json",
        p(&a),
        p(&a),
    ]);
    assert_eq!(
        json(&r.stdout)["centroid"]["values"],
        serde_json::json!([0.5, 2.0, 1.5])
    );

    let one = csv(&dir, "one.csv", &[1.0]);
    let e = csv(&dir, "e.csv", &[std::f64::consts::E]);
    let out = dir.path().join("c.json");
    let r = alphadiv([
        "centroid",
        "--alpha",
        "1",
        "--output-file",
        p(&out),
        "--format",
        "json",
        p(&one),
        p(&e),
    ]);
    assert_eq!(r.code, 0);
    let v = json(&r.stdout);
    assert_eq!(v["converged"], true);
    let c = v["centroid"]["values"][0].as_f64().unwrap();
    assert!((c - (1.0 + std::f64::consts::E) / 2.0).abs() < 1e-7);
    let trace: Vec<f64> = v["objective_trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    let saved = load_density::<f64>(&out, DensityFormat::Json, LoadOptions::default()).unwrap();
    assert_eq!(saved.density.values()[0], c);

    for side in ["left", "right", "jeffreys"] {
        let r = alphadiv([
            "centroid",
            "--alpha-amari",
            "0.2",
            "--side",
            side,
            "--weights",
            "1,3",
            p(&one),
            p(&e),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(field(&r.stdout, "side"), side);
    }
}

#[test]
fn centroid_errors() {
    let dir = TempDir::new().unwrap();
    let a = csv(&dir, "a.csv", &[0.5, 2.0]);
    let b = csv(&dir, "b.csv", &[0.5]);
    assert_eq!(
        alphadiv(["centroid", "--alpha", "0.5", p(&a), p(&b)]).code,
        2
    );
    assert_eq!(alphadiv(["centroid", p(&a)]).code, 2);
    assert_eq!(
        alphadiv(["centroid", "--alpha", "0.5", "--weights", "1,2", p(&a)]).code,
        2
    );
    assert_eq!(
        alphadiv([
            "centroid",
            "--alpha",
            "0.5",
            "--f",
            "log",
            "--g",
            "identity",
            p(&a)
        ])
        .code,
        2
    );
}

#[test]
fn selftest_command() {
    let r = alphadiv(["selftest"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("properties passed"));
    let x = alphadiv(["selftest", "--seed", "42", "--cases", "40"]);
    let y = alphadiv(["selftest", "--seed", "42", "--cases", "40"]);
    assert_eq!(x.stdout, y.stdout);
    let r = alphadiv(["selftest", "--cases", "40", "--break-duality"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL reference_duality"));
}

#[test]
fn library_entry_point_matches_binary() {
    let lib = alphadiv::cli::run(["alphadiv", "check", "--f", "identity", "--g", "recip"]);
    let bin = alphadiv(["check", "--f", "identity", "--g", "recip"]);
    assert_eq!(lib.code, bin.code);
    assert_eq!(lib.stdout, bin.stdout);
}
