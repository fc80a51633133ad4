use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use privaudio::signal::encode_wav_pcm16;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_privaudio"));
    c.env_remove("FEATURESENSE_METRICS_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tone_wav(dir: &Path, seconds: f64) -> PathBuf {
    let n = (seconds * 16_000.0) as usize;
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / 16_000.0;
            0.4 * (2.0 * std::f64::consts::PI * 440.0 * t).sin() + 0.05 * ((i * 7919 % 101) as f64 / 50.0 - 1.0)
        })
        .collect();
    let path = dir.join("a.wav");
    fs::write(&path, encode_wav_pcm16(&samples, 1, 16_000)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn extract_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let wav = tone_wav(dir.path(), 2.0);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = run(&["extract", "--input", s(&wav), "--out", s(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("7 frames"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 42);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn extract_selected_features() {
    let dir = tempfile::tempdir().unwrap();
    let wav = tone_wav(dir.path(), 1.0);
    let o = run(&["extract", "--input", s(&wav), "--features", "rms,zcr"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("window_index,start_time_s,rms,zcr"));
    assert_eq!(out.lines().count(), 4);

    let o = run(&["extract", "--input", s(&wav), "--features", "rms", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert!(v[0]["rms"].as_f64().unwrap() > 0.2);
}

#[test]
fn extract_resamples_input() {
    let dir = tempfile::tempdir().unwrap();
    let samples: Vec<f64> = (0..44_100).map(|i| (i as f64 * 0.05).sin() * 0.25).collect();
    let wav = dir.path().join("cd.wav");
    fs::write(&wav, encode_wav_pcm16(&samples, 1, 44_100)).unwrap();
    let o = run(&["extract", "--input", s(&wav), "--features", "rms"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn extract_errors() {
    let dir = tempfile::tempdir().unwrap();
    let wav = tone_wav(dir.path(), 1.0);
    let list = dir.path().join("list.txt");
    fs::write(&list, "rms\ntimbre\n").unwrap();
    let out = dir.path().join("f.csv");
    let o = run(&["extract", "--input", s(&wav), "--out", s(&out), "--features", &format!("@{}", s(&list))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());

    let bad = dir.path().join("bad.wav");
    fs::write(&bad, b"not a wav file at all, definitely not").unwrap();
    assert_eq!(run(&["extract", "--input", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["extract", "--input", s(&dir.path().join("missing.wav"))]).status.code(), Some(2));
    assert_eq!(run(&["extract", "--device", "hw:0"]).status.code(), Some(2));
    assert_eq!(run(&["extract", "--input", s(&wav), "--window-ms=-5"]).status.code(), Some(3));
}

fn select(args: &[&str]) -> serde_json::Value {
    let o = run(&[&["select"], args].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn select_on_shipped_tables() {
    let v = select(&[]);
    assert!(v["total_latency_ms"].as_f64().unwrap() <= 100.0);
    assert_eq!(v["category"], "interior");
    assert_eq!(v["alpha"], 0.5);
    assert_eq!(v["budget_ms"], 100.0);
    assert!(select(&["--alpha", "0"])["selected"].as_array().unwrap().is_empty());
    assert_eq!(select(&["--alpha", "1", "--budget-ms", "1e9"])["selected"].as_array().unwrap().len(), 35);
    let a = run(&["select", "--category", "animal", "--budget-ms", "2"]);
    let b = run(&["select", "--category", "animal", "--budget-ms", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["total_latency_ms"].as_f64().unwrap() <= 2.0);
}

#[test]
fn select_errors() {
    assert_eq!(run(&["select", "--alpha", "1.5"]).status.code(), Some(3));
    assert_eq!(run(&["select", "--budget-ms", "0"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["select", "--metrics-dir", s(dir.path())]).status.code(), Some(2));

    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    for f in ["privacy.csv", "utility.csv", "latency.csv"] {
        fs::copy(shipped.join(f), dir.path().join(f)).unwrap();
    }
    let lat = fs::read_to_string(dir.path().join("latency.csv")).unwrap();
    let broken: String = lat.lines().map(|l| if l.starts_with("kurtosis,") { "kurtosis,abc" } else { l }).collect::<Vec<_>>().join("\n");
    fs::write(dir.path().join("latency.csv"), broken).unwrap();
    let o = bin().args(["select"]).env("FEATURESENSE_METRICS_DIR", dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kurtosis"));
}

#[test]
fn registry_and_metrics() {
    let o = run(&["registry"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 35);
    assert!(out.lines().any(|l| l.starts_with("wavelet_features\thigh_level\t6")));
    assert!(out.lines().any(|l| l == "hnr\tvoice_specific\t1\tgray_zone"));

    let v: serde_json::Value = serde_json::from_slice(&run(&["get-metrics", "--feature", "rms"]).stdout).unwrap();
    assert_eq!(v["privacy"].as_object().unwrap().len(), 3);
    assert_eq!(v["utility"].as_object().unwrap().len(), 5);
    assert!(v["latency_ms"].as_f64().unwrap() > 0.0);
    assert_eq!(run(&["get-metrics", "--feature", "mfcc"]).status.code(), Some(3));
}

#[test]
fn leakage_indices() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    fs::write(&p, "attribute,accuracy,baseline,weight\nage,0.6,0.6,1\ngender,0.9,0.9,1\n").unwrap();
    assert_eq!(stdout(&run(&["sili", "--input", s(&p)])).trim(), "1.0");
    fs::write(&p, "attribute,accuracy,baseline\nwer,0.3,0.3\nper,0.2,0.2\nestoi,0.8,0.8\n").unwrap();
    assert_eq!(stdout(&run(&["csli", "--input", s(&p)])).trim(), "1.0");
    fs::write(&p, "attribute,accuracy,baseline\nage,0.6,0\n").unwrap();
    assert_eq!(run(&["sili", "--input", s(&p)]).status.code(), Some(2));
    fs::write(&p, "attr,acc\nx,1\n").unwrap();
    assert_eq!(run(&["csli", "--input", s(&p)]).status.code(), Some(2));
}

#[test]
fn analyze_ranks_informative_column() {
    let dir = tempfile::tempdir().unwrap();
    let (f, l) = (dir.path().join("f.csv"), dir.path().join("l.csv"));
    let mut feats = String::from("window_index,start_time_s,noise,signal\n");
    let mut labels = String::from("row_id,label\n");
    for i in 0..40 {
        let male = i % 2 == 1;
        feats += &format!("{i},{},{},{}\n", i as f64 * 0.25, (i * 37 % 11) as f64, if male { 5.0 } else { 1.0 } + (i % 3) as f64 * 0.1);
        labels += &format!("{i},{}\n", if male { "m" } else { "f" });
    }
    fs::write(&f, feats).unwrap();
    fs::write(&l, labels).unwrap();
    let o = run(&["analyze", "--input", s(&f), "--labels", s(&l), "--bins", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("component,mi_bits,correlation,multiclass,zero_variance"));
    assert!(out.lines().nth(1).unwrap().starts_with("signal,1,"));
    fs::write(&l, "row_id,label\n0,f\n1,m\n").unwrap();
    assert_eq!(run(&["analyze", "--input", s(&f), "--labels", s(&l)]).status.code(), Some(2));
}

#[test]
fn profile_writes_latency_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("latency.csv");
    let o = run(&["profile", "--iterations", "10", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("feature,latency_ms"));
    assert_eq!(text.lines().count(), 36);
    assert_eq!(run(&["profile", "--iterations", "5"]).status.code(), Some(3));
}
