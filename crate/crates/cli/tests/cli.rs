use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn moran() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moran"))
}

fn run_ok(args: &[&str]) -> String {
    let out = moran().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read_manifest(prefix: &Path) -> Value {
    let text = std::fs::read_to_string(prefix.with_extension("manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn limits_alpha_prints_json() {
    let v: Value = serde_json::from_str(&run_ok(&["limits", "alpha", "--gamma", "1"])).unwrap();
    let alpha = v["alpha"].as_f64().unwrap();
    assert_eq!(format!("{alpha:.3}"), "1.433");
    assert_eq!(v["gamma"], 1.0);
}

#[test]
fn limits_r_and_progeny_examples() {
    let v: Value =
        serde_json::from_str(&run_ok(&["limits", "r", "--u", "1e-5,1e-4", "--m", "3"])).unwrap();
    assert!((v["r1"].as_f64().unwrap() - 3.1623e-4).abs() < 1e-8);
    assert!((1.0 / v["r1"].as_f64().unwrap() - 3162.3).abs() < 0.1);
    let v: Value = serde_json::from_str(&run_ok(&["limits", "progeny", "--n", "1"])).unwrap();
    assert_eq!(v["tail"], 0.5);
}

#[test]
fn limits_tables_are_csv() {
    let text = run_ok(&["limits", "u", "--gamma", "1", "--table", "--points", "11"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,u,du,d2u"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));

    let text = run_ok(&["limits", "m0", "--n", "10", "--table"]);
    assert_eq!(text.lines().count(), 10);

    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("alpha");
    run_ok(&[
        "limits",
        "alpha",
        "--table",
        "--points",
        "5",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let (header, rows) = read_csv(&dir.path().join("alpha.csv"));
    assert_eq!(header, ["gamma", "alpha"]);
    assert_eq!(rows.len(), 5);
}

#[test]
fn limits_rejects_missing_and_bad_values() {
    for args in [
        vec!["limits", "alpha"],
        vec!["limits", "alpha", "--gamma", "-1"],
        vec!["limits", "g2", "--u2", "0", "--t", "1"],
        vec!["limits", "m0", "--n", "10", "--k", "10"],
        vec!["limits", "r", "--u", "1e-3", "--m", "4"],
    ] {
        let out = moran().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn tau_writes_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let p = prefix.to_str().unwrap();
    run_ok(&[
        "tau",
        "--n",
        "200",
        "--u",
        "1e-3,1e-2",
        "--reps",
        "50",
        "--seed",
        "3",
        "--out",
        p,
    ]);
    let (header, rows) = read_csv(&dir.path().join("run.csv"));
    assert_eq!(
        header,
        [
            "replicate_index",
            "tau",
            "scaled_tau",
            "termination",
            "n_events",
            "mutations_1",
            "mutations_2"
        ]
    );
    assert_eq!(rows.len(), 50);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
        assert_eq!(row[3], "completed");
        assert_eq!(row[6], "1");
    }
    let m = read_manifest(&prefix);
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["command"], "tau");
    assert_eq!(m["params"]["n"], 200);
    assert_eq!(m["params"]["m"], 2);
    assert_eq!(m["params"]["seed"], 3);
    assert_eq!(m["summary"]["censored_fraction"], 0.0);
    assert!(m["summary"]["mean"].as_f64().unwrap() > 0.0);
    assert!(m["regime"]["classification"].is_string());
    assert!(m["tool"]["version"].is_string());
    assert!(m["argv"].as_array().unwrap().len() > 5);
}

#[test]
fn tau_with_zero_replicates() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("empty");
    run_ok(&[
        "tau",
        "--n",
        "100",
        "--u",
        "1e-3,1e-2",
        "--reps",
        "0",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let (header, rows) = read_csv(&dir.path().join("empty.csv"));
    assert_eq!(header.len(), 7);
    assert!(rows.is_empty());
    let m = read_manifest(&prefix);
    assert_eq!(m["summary"]["replicates"], 0);
    assert!(m["summary"]["ks_statistic"].is_null());
}

#[test]
fn tau_rejects_negative_rate() {
    let out = moran()
        .args(["tau", "--n", "1000", "--u", "1e-4,-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("u2"), "{err}");
}

#[test]
fn tau_flags_censoring_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cut");
    let out = moran()
        .args([
            "tau",
            "--n",
            "100",
            "--u",
            "0,1e-2",
            "--reps",
            "5",
            "--max-time",
            "10",
        ])
        .args(["--out", prefix.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let m = read_manifest(&prefix);
    assert_eq!(m["summary"]["censored_fraction"], 1.0);
}

#[test]
fn bad_usage_exits_with_2() {
    for args in [
        vec!["tau", "--n", "100"],
        vec!["figure", "fig9"],
        vec!["tau", "--n", "x", "--u", "1e-3"],
        vec!["tau", "--n", "100", "--u", "1e-3", "--threads", "0"],
        vec!["m0", "--n", "50", "--j0", "50"],
    ] {
        let out = moran().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let prefix = blocker.join("run");
    let out = moran()
        .args([
            "tau",
            "--n",
            "100",
            "--u",
            "1e-2",
            "--reps",
            "2",
            "--out",
            prefix.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn figure_manifests_record_constants() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("fig3");
    run_ok(&[
        "figure",
        "fig3",
        "--reps",
        "20",
        "--seed",
        "1",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let m = read_manifest(&prefix);
    assert_eq!(m["figure"]["gamma"], 1.0);
    assert_eq!(
        format!("{:.3}", m["figure"]["alpha"].as_f64().unwrap()),
        "1.433"
    );
    assert_eq!(m["comparison"]["scale"], "u1");
    let (header, rows) = read_csv(&dir.path().join("fig3.reference.csv"));
    assert_eq!(header, ["t", "cdf", "pdf", "survival"]);
    assert_eq!(rows.len(), 512);

    let prefix = dir.path().join("fig2");
    run_ok(&[
        "figure",
        "fig2",
        "--reps",
        "20",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let m = read_manifest(&prefix);
    assert_eq!(m["figure"]["lambda"], 1.0);
    assert_eq!(m["comparison"]["law"]["kind"], "theorem1");
    assert_eq!(m["comparison"]["law"]["lambda"], 1.0);
}

#[test]
fn figure_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run_ok(&[
        "figure",
        "fig1",
        "--reps",
        "100",
        "--seed",
        "7",
        "--threads",
        "1",
        "--out",
        a.to_str().unwrap(),
    ]);
    run_ok(&[
        "figure",
        "fig1",
        "--reps",
        "100",
        "--seed",
        "7",
        "--threads",
        "3",
        "--out",
        b.to_str().unwrap(),
    ]);
    let read = |p: &Path, s: &str| std::fs::read(p.with_extension(s)).unwrap();
    assert_eq!(read(&a, "csv"), read(&b, "csv"));
    assert_eq!(read(&a, "reference.csv"), read(&b, "reference.csv"));
}

#[test]
fn json_format_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_prefix = dir.path().join("c");
    let json_prefix = dir.path().join("j");
    let base = [
        "tau",
        "--n",
        "100",
        "--u",
        "1e-2,1e-2",
        "--reps",
        "10",
        "--seed",
        "5",
    ];
    run_ok(&[&base[..], &["--out", csv_prefix.to_str().unwrap()]].concat());
    run_ok(
        &[
            &base[..],
            &["--format", "json", "--out", json_prefix.to_str().unwrap()],
        ]
        .concat(),
    );
    let (_, rows) = read_csv(&dir.path().join("c.csv"));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("j.json")).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), rows.len());
    for (row, obj) in rows.iter().zip(arr) {
        assert_eq!(obj["tau"].as_f64().unwrap(), row[1].parse::<f64>().unwrap());
        assert_eq!(obj["termination"], row[3].as_str());
    }
}

#[test]
fn stdout_mode_without_out() {
    let out = moran()
        .args(["m0", "--n", "10", "--reps", "20", "--seed", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 21);
    let manifest: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(manifest["command"], "m0");
}

#[test]
fn m0_levels_table() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("m0");
    run_ok(&[
        "m0",
        "--n",
        "50",
        "--j0",
        "1",
        "--reps",
        "20000",
        "--seed",
        "11",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let (header, rows) = read_csv(&dir.path().join("m0.levels.csv"));
    assert_eq!(header[0], "k");
    assert_eq!(rows.len(), 49);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for row in &rows {
        let get = |name: &str| row[col(name)].parse::<f64>().unwrap();
        let k: f64 = row[0].parse().unwrap();
        assert_eq!(get("expected_l"), 1.0 / k);
        assert!((get("mean_r") - get("expected_r")).abs() <= 5.0 * get("se_r"));
    }
    let m = read_manifest(&prefix);
    let s = &m["summary"];
    let (f, se) = (
        s["fixation_frequency"].as_f64().unwrap(),
        s["fixation_se"].as_f64().unwrap(),
    );
    assert!((f - 0.02).abs() <= 3.0 * se);
    let (t, se) = (s["mean_t"].as_f64().unwrap(), s["se_t"].as_f64().unwrap());
    assert!((t - s["mean_t_expected"].as_f64().unwrap()).abs() <= 3.0 * se);
}

#[test]
fn m0_near_fixation_start() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("m0");
    run_ok(&[
        "m0",
        "--n",
        "50",
        "--j0",
        "49",
        "--reps",
        "20000",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let s = read_manifest(&prefix)["summary"].clone();
    let (f, se) = (
        s["fixation_frequency"].as_f64().unwrap(),
        s["fixation_se"].as_f64().unwrap(),
    );
    assert!((f - 0.98).abs() <= 3.0 * se, "{s}");
    assert!(s["mean_t_expected"].is_null());
}

#[test]
fn help_and_version_succeed() {
    assert!(run_ok(&["--help"]).contains("tau"));
    assert!(run_ok(&["--version"]).contains(env!("CARGO_PKG_VERSION")));
}
