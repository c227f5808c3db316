use std::path::Path;
use std::process::{Command, Output};

fn lowensim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowensim")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

/// Data rows as maps from header name to cell.
fn rows(csv_text: &str) -> Vec<std::collections::BTreeMap<String, String>> {
    let body: String = csv_text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let head = r.headers().unwrap().clone();
    r.records().map(|rec| head.iter().zip(rec.unwrap().iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect()).collect()
}

#[test]
fn grover_demo_reaches_target() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.json", r#"{"experiment":"grover_demo","params":{"N":16,"K":1},"seed":3}"#);
    let out = lowensim(&["grover_demo", "--config", &cfg, "--output", "out/g.csv", "--json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("out/g.csv")).unwrap();
    assert!(text.starts_with("# lowensim grover_demo"));
    let r = rows(&text);
    assert_eq!(r.len(), 1);
    assert!(r[0]["overlap"].parse::<f64>().unwrap() >= 0.999);
    assert_eq!(r[0]["status"], "ok");
    assert!(!r[0]["wall_time_s"].is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/g.json")).unwrap()).unwrap();
    assert_eq!(json["rows"][0]["results"]["overlap"].as_f64().unwrap().to_string(), r[0]["overlap"]);
}

#[test]
fn unknown_experiment_exits_two_and_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = lowensim(&["no_such_thing"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["grover_demo", "regime_sweep", "qsp_compare", "poly_certify", "clock_propagation"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn bad_parameter_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.json", r#"{"params":{"bogus":1}}"#);
    let out = lowensim(&["regime_sweep", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn failed_point_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    // eps = 0.9 is outside the admissible range; the other point runs
    let cfg = write(dir.path(), "f.json", r#"{"sweep":{"param":"eps","values":[1e-3,0.9]}}"#);
    let out = lowensim(&["regime_sweep", "--config", &cfg, "--output", "f.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let r = rows(&std::fs::read_to_string(dir.path().join("f.csv")).unwrap());
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["status"], "ok");
    assert_eq!(r[1]["status"], "failed");
    assert!(!r[1]["error"].is_empty());
}

#[test]
fn time_sweep_rows_are_ordered_and_costs_grow() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.json",
        r#"{"params":{"delta":0.01,"eps":1e-3},"sweep":{"param":"t","values":[10,20,40]}}"#,
    );
    let out = lowensim(&["regime_sweep", "--config", &cfg, "--jobs", "3", "--output", "s.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap());
    assert_eq!(r.len(), 3);
    let idx: Vec<&str> = r.iter().map(|x| x["sweep_index"].as_str()).collect();
    assert_eq!(idx, ["0", "1", "2"]);
    let uses: Vec<usize> = r.iter().map(|x| x["encoding_uses"].parse().unwrap()).collect();
    assert!(uses.windows(2).all(|w| w[0] <= w[1]), "{uses:?}");
}

#[test]
fn reruns_are_byte_identical_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"params":{"t":100,"dim":6},"sweep":{"param":"low_count","values":[1,2,3]},"seed":11}"#,
    );
    let run = |jobs: &str, name: &str| {
        let out = lowensim(&["qsp_compare", "--config", &cfg, "--jobs", jobs, "--no-timing", "--output", name], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("3", "b.csv");
    assert_eq!(a, b);
    assert!(!String::from_utf8(a).unwrap().contains("wall_time_s"));
}
