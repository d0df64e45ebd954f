use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magsteklov")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn alpha_command() {
    let o = run(&["alpha"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.7649508673"), "{}", stdout(&o));
}

#[test]
fn crossings_table() {
    let o = run(&["crossings"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,nu,z,lambda,g_residual,defining_residual");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 11);
    let mut prev = 0.0;
    for r in &rows {
        assert!(r[2] > prev);
        prev = r[2];
        assert!(r[4] < 1e-8 && r[5] < 1e-8, "{r:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["curves", "--nu", "0.7"]).status.code(), Some(2));
    assert_eq!(run(&["groundstate", "--b-grid", "1", "2", "10", "cubic"]).status.code(), Some(2));
    assert_eq!(run(&["crossings", "--n-range", "3", "1"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // U(−1/2, 1/2, z) = √z has no zero: mode 0 at ν = 1/2 has no crossing.
    let o = run(&["crossings", "--nu", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["crossings", "--nu", "0.5", "--n-range", "1", "5"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["curves", "--nu", "0.25", "--b-grid", "0.01", "3", "40", "log"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 40 * 8);
}

#[test]
fn out_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gs.json");
    let o = run(&["groundstate", "--b-grid", "0.1", "50", "12", "--log", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for key in ["b", "n_min", "lambda", "asym", "residual"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn check_reports() {
    for args in [&["weakfield"][..], &["weakfield", "--nu", "0.25"], &["norms"], &["strongfield"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for c in v.as_array().unwrap() {
            for key in ["check", "anchor", "value", "bound", "pass"] {
                assert!(c.get(key).is_some());
            }
            assert_eq!(c["pass"], true, "{c}");
        }
    }
}

#[test]
fn oracle_check_passes() {
    let o = run(&["oracle-check", "--n-range", "-3", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 7 * 4);
}

#[test]
fn half_flux_degenerate_first_row() {
    let o = run(&["curves", "--nu", "0.5", "--n-range", "-3", "4", "--b-grid", "0", "5", "200", "linear"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first: Vec<f64> =
        text.lines().skip(1).take(8).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    // rows are n = -3..4, so modes 0 and 1 sit at indices 3 and 4
    assert!((first[3] - first[4]).abs() <= 1e-3);
    assert_eq!(text.lines().count(), 1 + 200 * 8);
}
