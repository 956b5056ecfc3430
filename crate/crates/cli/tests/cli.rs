use std::path::Path;
use std::process::{Command, Output};

fn spinorlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinorlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--output", path.to_str().unwrap()]);
    let out = spinorlab(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read(path).unwrap()
}

#[test]
fn algebra_check_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to_file(
        dir.path(),
        "a.csv",
        &["algebra-check", "--samples", "100", "--seed", "0"],
    );
    let b = run_to_file(
        dir.path(),
        "b.csv",
        &["algebra-check", "--samples", "100", "--seed", "0"],
    );
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows[0].join(","), "suite,check,value,relation,bound,passed");
    let value = column(&rows, "value");
    let relation = column(&rows, "relation");
    for row in rows[1..].iter().filter(|r| r[relation] == "<") {
        assert!(row[value].parse::<f64>().unwrap() < 1e-12, "{row:?}");
    }
    assert!(rows[1..].iter().all(|r| r.last().unwrap() == "true"));
}

#[test]
fn different_seeds_sample_different_momenta() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to_file(
        dir.path(),
        "a.csv",
        &["algebra-check", "--samples", "5", "--seed", "1"],
    );
    let b = run_to_file(
        dir.path(),
        "b.csv",
        &["algebra-check", "--samples", "5", "--seed", "2"],
    );
    assert_ne!(a, b);
}

#[test]
fn step_scatter_first_row() {
    let out = spinorlab(&["step-scatter", "--t-end", "0.00001"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(
        rows[0].join(","),
        "t,norm,x_mean,neg_energy,S_P,S_FW,S_Cz,S_F,S_Ch,S_Pr,S_FG"
    );
    assert_eq!(rows.len(), 3);
    let first: Vec<f64> = rows[1].iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-12);
    assert!((first[2] + 0.175).abs() < 1e-6);
    let expected = [0.3556, 0.5, 0.3556, 0.7084, 0.5, 0.5, 0.5];
    for (got, want) in first[4..].iter().zip(expected) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
    // 17 significant digits
    assert!(
        rows[1][4].split('e').next().unwrap().len() == 18,
        "{}",
        rows[1][4]
    );
}

#[test]
fn kapitza_config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("kd.json");
    std::fs::write(
        &config,
        r#"{"t-end": 3.0, "samples-per-period": 2, "format": "json"}"#,
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    let a = run_to_file(
        dir.path(),
        "a.json",
        &["kapitza", "--config", cfg, "--t-end", "1.0"],
    );
    let b = run_to_file(
        dir.path(),
        "b.json",
        &["kapitza", "--config", cfg, "--t-end", "1.0"],
    );
    assert_eq!(a, b);
    let records: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let records = records.as_array().unwrap();
    // one period at two samples per period, plus t = 0
    assert_eq!(records.len(), 3);
    assert_eq!(records[2]["t"], 1.0);
    assert_eq!(records[0]["x_mean"], "NaN");
    let keys: Vec<&str> = records[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys[..4], ["t", "norm", "x_mean", "neg_energy"]);
}

#[test]
fn hydrogen_scan_reports_divergent_variance_as_inf() {
    let out = spinorlab(&[
        "hydrogen-scan",
        "--z-min",
        "100",
        "--z-max",
        "120",
        "--steps",
        "2",
        "--kinds",
        "Pr,F",
        "--radial-nodes",
        "96",
        "--angular-nodes",
        "16",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows[0].join(","), "Z,kind,mean,variance");
    assert_eq!(rows.len(), 5);
    for row in rows[1..].iter().filter(|r| r[1] == "Pr") {
        assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-8);
    }
    let frenkel_120 = rows
        .iter()
        .find(|r| r[0] == "1.2000000000000000e2" && r[1] == "F")
        .unwrap();
    assert_eq!(frenkel_120[3], "inf");
}

#[test]
fn errors_map_to_exit_codes() {
    let bad = spinorlab(&["kapitza", "--n-max", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    let bad_kind = spinorlab(&["hydrogen-scan", "--kinds", "Q", "--steps", "1"]);
    assert_eq!(bad_kind.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing").join("out.csv");
    let io = spinorlab(&[
        "chakrabarti-gaussian",
        "--output",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(io.status.code(), Some(3));
    let too_big = spinorlab(&[
        "hydrogen-scan",
        "--z-min",
        "140",
        "--z-max",
        "140",
        "--steps",
        "1",
    ]);
    assert_eq!(too_big.status.code(), Some(2));
}
