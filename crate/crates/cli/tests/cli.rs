use std::path::Path;
use std::process::{Command, Output};

fn nlsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlsp")).args(args).output().expect("spawn nlsp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn repro_tables_all_match() {
    let o = nlsp(&["repro", "tables"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("200/200 labels match"));
}

#[test]
fn survey_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"schema_version":1,"families":[{"family":"hypercube","schedule":[2,3,4,5,6,7,8]},{"family":"ladder","schedule":[4,8,12,16,20,24,28]}]}"#,
    );
    let o = nlsp(&["survey", "run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("HHL=best"));
    for f in ["records.csv", "report.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let o = nlsp(&["survey", "fit", out.join("records.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fits = write(dir.path(), "fits.json", &stdout(&o));

    let o = nlsp(&["survey", "classify", &fits, "--solver", "HHL"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["label"], "hypercube");
    assert_eq!(v[0]["verdicts"]["HHL"]["category"], "best");
    assert_eq!(v[1]["verdicts"]["HHL"]["category"], "bad");

    let o = nlsp(&["survey", "crossover", &fits, "--solver", "CKS(1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("ladder") && l.ends_with("none")));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"schema_version":9,"families":[]}"#);
    assert_eq!(nlsp(&["survey", "run", &bad, "--out", "x"]).status.code(), Some(2));
    assert_eq!(nlsp(&["survey", "run", "/no/such/config.json"]).status.code(), Some(2));
    let o = nlsp(&["survey", "crossover", &bad, "--solver", "NOPE"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn superfamily_commands() {
    let o = nlsp(&["superfamily", "tableau", "--a-max", "3", "--m-max", "3", "--cap", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("a,m,N,kappa_pred,kappa_meas,s_pred,s_meas\n"));
    assert_eq!(text.lines().count(), 1 + 6);

    let o = nlsp(&["superfamily", "slice", "--kind", "column", "--value", "3", "--from", "1", "--to", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["category"], "best");
}

#[test]
fn hhl_commands() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", "undirected 4\n0 1\n1 2\n2 3\n3 0\n");
    let o = nlsp(&["hhl", "reff", &c4, "--i", "0", "--j", "1", "--oracle"]);
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!((r - 0.75).abs() < 1e-12);
    let o = nlsp(&["hhl", "reff", &c4, "--i", "0", "--j", "1", "--n-r", "8"]);
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!((r - 0.75).abs() < 0.01);

    let d = write(dir.path(), "d.txt", "directed 4\n0 1\n1 2\n2 3\n3 0\n");
    let inj = write(dir.path(), "inj.txt", "1 0 -1 0\n");
    let o = nlsp(&["hhl", "traffic", &d, &inj, "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    let unbalanced = write(dir.path(), "u.txt", "1 0 0 0\n");
    assert_eq!(nlsp(&["hhl", "traffic", &d, &unbalanced, "--oracle"]).status.code(), Some(2));

    let prob = write(
        dir.path(),
        "p.json",
        r#"{"matrix":[[2,0],[0,1]],"b":[1,1],"config":{"n_r":2,"t":1.5707963267948966,"c":0.25}}"#,
    );
    let o = nlsp(&["hhl", "solve", &prob]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_abs_delta"].as_f64().unwrap() < 1e-10);
}
