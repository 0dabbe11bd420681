use std::process::{Command, Output};

fn groupwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupwalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header_json(csv: &str) -> serde_json::Value {
    let first = csv.lines().next().unwrap();
    serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap()
}

#[test]
fn return_series_exact_csv() {
    let o = groupwalk(&["walk", "return", "--group", "z:1", "--measure", "srw", "--n", "10", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let h = header_json(&text);
    assert_eq!(h["schema"], 1);
    assert_eq!(h["mode"], "exact");
    assert_eq!(h["seed"], 0);
    assert!(h["command"].as_str().unwrap().contains("walk return --group z:1"));
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows[1].starts_with("2,3/8,"));
}

#[test]
fn return_series_json_and_radial() {
    let o = groupwalk(&["walk", "return", "--group", "free:2", "--radial", "--n", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"][0], "1/4");
    assert!(v["diagnostics"]["log_convexity_checks"].as_u64().unwrap() > 0);
    let bad = groupwalk(&["walk", "return", "--group", "z:1", "--radial"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(groupwalk(&["walk", "return", "--group", "nosuch"]).status.code(), Some(1));
    assert_eq!(groupwalk(&["walk", "nosuch"]).status.code(), Some(1));
    assert_eq!(groupwalk(&["walk", "return", "--group", "z:1", "--mode", "fuzzy"]).status.code(), Some(1));
    assert_eq!(groupwalk(&["walk", "return", "--group", "z:1", "--measure", "lazy:x"]).status.code(), Some(1));
    let help = groupwalk(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("walk"));
}

#[test]
fn dirichlet_identity_holds() {
    let o = groupwalk(&["walk", "dirichlet", "--group", "lamplighter:2", "--trials", "20", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(header_json(&text)["mismatches"], 0);
    assert_eq!(text.lines().count(), 22);
    assert!(text.lines().skip(2).all(|l| l.ends_with(",0/1")));
}

#[test]
fn compare_reports_constant() {
    let o = groupwalk(&["walk", "compare", "--group", "z:1", "--measure2", "uniform-ball:2", "--u", "(-1);(0);(1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["constant"], "20/3");
    assert_eq!(v["violations"], 0);
}

#[test]
fn stability_and_fit() {
    let o = groupwalk(&["walk", "stability", "--group", "z:1", "--measure2", "lazy:1/2", "--n", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], true);
    let o = groupwalk(&["walk", "fit", "--group", "z:1", "--n", "60", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best"], "polynomial");
}

#[test]
fn trace_sweeps() {
    for args in [
        vec!["trace", "prop2", "--pairs", "10", "--specs", "2", "--dim-max", "8"],
        vec!["trace", "lemma2", "--grid", "500"],
        vec!["trace", "thm1", "--instances", "10", "--dim-max", "8"],
    ] {
        let o = groupwalk(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["schema"], 1);
    }
    let o = groupwalk(&["trace", "lemma2", "--cs", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lower_bound_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lb.csv");
    let o = groupwalk(&["sol", "lower-bound", "--q", "2", "--tmin", "64", "--tmax", "1024", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,n_star,confined_prob,volume,bound,log_neg_log_bound"));
    assert_eq!(lines.count(), 5);
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("lb.json")).unwrap()).unwrap();
    assert_eq!(side["schema"], 1);
    assert!(side["summary"]["slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn sol_mc_and_lemma3_are_reproducible() {
    let run = || stdout(&groupwalk(&["sol", "mc", "--t", "2", "--samples", "3000", "--seed", "11"]));
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["samples"], 3000);
    let o = groupwalk(&["sol", "lemma3", "--trials", "500", "--length", "20", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"], 0);
}

#[test]
fn custom_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu.txt");
    std::fs::write(&path, "# two-step walk\n(2) 1/2\n(-2) 1/2\n").unwrap();
    let spec = format!("custom:@{}", path.display());
    let o = groupwalk(&["walk", "return", "--group", "z:1", "--measure", &spec, "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(3).unwrap().starts_with("2,3/8,"));
}
