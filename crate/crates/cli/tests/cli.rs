use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdof-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sdof_reports() {
    let o = lab(&["sdof", "2", "2", "4", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("D_s = 3, case C1, bounds (4, 3, 3.5)\n"));

    let o = lab(&["sdof", "2", "2", "3", "1"]);
    assert!(stdout(&o).starts_with("D_s = 5/2, case C2, bounds (3, 3, 2.5)"));

    let o = lab(&["sdof", "2", "2", "3", "4"]);
    assert_eq!(stdout(&o), "D_s = 0 (degenerate: N_E ≥ M)\n");
    assert!(o.status.success());
}

#[test]
fn sdof_invalid_input_exits_one() {
    for args in [&["sdof", "0", "2", "3", "1"][..], &["sdof", "2", "2", "0", "1"], &["sdof", "2", "x", "3", "1"]] {
        let o = lab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn grid_verify_small() {
    let o = lab(&["grid-verify", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m1,m2,n,ne,case,ds_num,ds_den,bound1,bound2,bound3,plan_ok"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("all 18 configs consistent"));
}

#[test]
fn grid_verify_six_is_consistent() {
    let o = lab(&["grid-verify", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn grid_verify_edges() {
    let o = lab(&["grid-verify", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(lab(&["grid-verify", "11"]).status.code(), Some(1));
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("r.csv");
    std::fs::write(&cfg, r#"{"m1":2,"m2":2,"n":4,"ne":1,"trials":6,"seed":2}"#).unwrap();
    let o = lab(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("p,rate_rx,leak_max,secrecy\n"));
    assert_eq!(csv.lines().count(), 8);

    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["ds_theory"], 3.0);
    let slope = summary["slope"].as_f64().unwrap();
    assert!((2.9..=3.1).contains(&slope), "slope {slope}");
    let on_disk = std::fs::read(dir.path().join("r.summary.json")).unwrap();
    assert_eq!(on_disk, o.stdout);
}

#[test]
fn simulate_without_jamming_leaks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("r.csv");
    std::fs::write(&cfg, r#"{"m1":2,"m2":2,"n":4,"ne":1,"trials":4}"#).unwrap();
    let o = lab(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-jamming"]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // Six decades of P with one eavesdropper antenna.
    assert!(summary["leakage_delta"].as_f64().unwrap() > 15.0);
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    for body in [
        r#"{"m1":2,"m2":2,"n":4,"ne":1,"unknown":1}"#,
        r#"{"m1":2,"m2":2,"n":4,"ne":1,"p_grid":[1e6,1e3,1e9,1e12]}"#,
        r#"{"m1":2,"m2":2,"n":4,"ne":1,"alpha":1.5}"#,
        r#"{"m1":2,"m2":2,"n":4}"#,
        "not json",
    ] {
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, body).unwrap();
        let o = lab(&["simulate", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{body}");
    }
    assert_eq!(lab(&["simulate", "/nonexistent/config.json"]).status.code(), Some(1));
}

#[test]
fn binning_extremes_and_schema() {
    let o = lab(&["binning", "--n", "4,8", "--delta", "1", "--seeds", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,seed,equivocation,normalized\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));
    assert_eq!(text.lines().filter(|l| l.contains(",mean,")).count(), 2);

    let o = lab(&["binning", "--n", "4,8", "--delta", "0", "--seeds", "3"]);
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn binning_trend_goes_up() {
    let o = lab(&["binning", "--n", "4,8,12"]);
    let means: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| l.contains(",mean,"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(means.len(), 3);
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
}

#[test]
fn binning_budget_exceeded() {
    assert_eq!(lab(&["binning", "--n", "14"]).status.code(), Some(1));
}
