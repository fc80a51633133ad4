//! Timing tests share one lock so they do not disturb each other.

use std::sync::Mutex;

use privaudio::features::FeatureSelection;
use privaudio::profiler::{profile, save_latency_csv, write_latency_csv, ProfileConfig, Workload};
use privaudio::selector::load_latency_csv;
use privaudio::signal::WindowPlan;

static TIMING: Mutex<()> = Mutex::new(());

fn config(iterations: usize) -> ProfileConfig {
    ProfileConfig { iterations, ..Default::default() }
}

#[test]
fn all_means_positive_and_finite() {
    let _g = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    let p = profile::<f64>(&config(10), &Workload::SeededNoise { seed: 1 }).unwrap();
    assert_eq!(p.features.len(), 35);
    for f in &p.features {
        assert!(f.mean_ms > 0.0 && f.mean_ms.is_finite(), "{}: {}", f.feature, f.mean_ms);
        assert!(f.std_ms >= 0.0);
        assert_eq!(f.iterations + f.outliers_dropped, 10);
    }
    let sum: f64 = p.features.iter().map(|f| f.mean_ms).sum();
    assert!((p.total_mean_ms - sum).abs() < 1e-12);
    assert!(p.joint_mean_ms > 0.0);
    assert_eq!(p.sample_rate_hz, 16_000);
}

#[test]
fn rejects_too_few_iterations() {
    assert!(profile::<f64>(&config(9), &Workload::SeededNoise { seed: 1 }).is_err());
}

#[test]
fn latency_csv_round_trip() {
    let _g = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    let p = profile::<f64>(&config(10), &Workload::SeededNoise { seed: 2 }).unwrap();
    let mut buf = Vec::new();
    write_latency_csv(&p, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some("feature,latency_ms"));
    assert_eq!(text.lines().count(), 36);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("latency.csv");
    save_latency_csv(&p, &path).unwrap();
    let loaded = load_latency_csv::<f64>(&path).unwrap();
    assert_eq!(loaded.len(), 35);
    for ((id, ms), f) in loaded.iter().zip(&p.features) {
        assert_eq!(id, &f.feature);
        assert_eq!(format!("{ms:.6}"), format!("{:.6}", f.mean_ms.max(1e-6)));
    }
}

#[test]
fn supplied_workload_and_subset() {
    let _g = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    let buf = privaudio::signal::AudioBuffer::new(vec![0.1f32; 8000], 8000).unwrap();
    let cfg = ProfileConfig {
        selection: FeatureSelection::parse("rms,spectral_centroid").unwrap(),
        sample_rate_hz: 8000,
        ..config(10)
    };
    let p = profile(&cfg, &Workload::Supplied(buf)).unwrap();
    assert_eq!(p.features.iter().map(|f| f.feature.as_str()).collect::<Vec<_>>(), ["rms", "spectral_centroid"]);
    assert_eq!(p.sample_rate_hz, 8000);
}

#[test]
fn stable_under_more_iterations() {
    let _g = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    // Whole passes over the 2 s workload, so both runs see the same frame mix.
    let buf = privaudio::signal::AudioBuffer::new(vec![0.0f64; 32_000], 16_000).unwrap();
    let frames = privaudio::signal::window(&buf, &WindowPlan::default()).unwrap().len();
    let short = profile::<f64>(&config(6 * frames), &Workload::SeededNoise { seed: 3 }).unwrap();
    let long = profile::<f64>(&config(12 * frames), &Workload::SeededNoise { seed: 3 }).unwrap();
    // Doubling the iterations must keep every mean within three standard
    // errors of the shorter run. Sensitive to host speed drift between runs.
    let mut unstable = Vec::new();
    for (a, b) in short.features.iter().zip(&long.features) {
        if (a.mean_ms - b.mean_ms).abs() > 3.0 * a.sem_ms {
            unstable.push(format!("{} {:.4} vs {:.4} (se {:.4})", a.feature, a.mean_ms, b.mean_ms, a.sem_ms));
        }
    }
    assert!(unstable.is_empty(), "{unstable:#?}");
}

#[test]
fn total_grows_at_most_linearly_with_window() {
    let _g = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    let short = profile::<f64>(&config(30), &Workload::SeededNoise { seed: 4 }).unwrap();
    let long_cfg = ProfileConfig { plan: WindowPlan::with_window_ms(1000.0), ..config(30) };
    let long = profile::<f64>(&long_cfg, &Workload::SeededNoise { seed: 4 }).unwrap();
    let ratio = long.total_mean_ms / short.total_mean_ms;
    println!("500 ms: {:.3} ms, 1000 ms: {:.3} ms, ratio {ratio:.2}", short.total_mean_ms, long.total_mean_ms);
    assert!(ratio <= 2.5);
}

