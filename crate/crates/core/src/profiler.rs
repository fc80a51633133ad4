//! Per-feature extraction latency measurement.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{Extractor, FeatureSelection};
use crate::scalar::Real;
use crate::signal::{window, AudioBuffer, Frame, WindowPlan};

pub const DEFAULT_WARMUP: usize = 5;
pub const MIN_ITERATIONS: usize = 10;
/// Samples further than this many standard deviations from the mean are
/// dropped before the statistics are reported.
const OUTLIER_SIGMAS: f64 = 5.0;
const NOISE_SECONDS: f64 = 2.0;
/// Smallest latency representable at the six-decimal precision of
/// `latency.csv`.
const CSV_RESOLUTION_MS: f64 = 1e-6;

/// Audio the extractor is timed on.
#[derive(Debug, Clone)]
pub enum Workload<T> {
    /// Uniform noise from a fixed seed at the configured rate.
    SeededNoise { seed: u64 },
    Supplied(AudioBuffer<T>),
}

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    pub plan: WindowPlan,
    pub sample_rate_hz: u32,
    pub iterations: usize,
    pub warmup: usize,
    pub selection: FeatureSelection,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            plan: WindowPlan::default(),
            sample_rate_hz: 16_000,
            iterations: 100,
            warmup: DEFAULT_WARMUP,
            selection: FeatureSelection::all(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureLatency {
    pub feature: String,
    pub mean_ms: f64,
    pub std_ms: f64,
    /// Standard error of `mean_ms` from non-overlapping batch means, which
    /// stays honest when consecutive timings are correlated.
    pub sem_ms: f64,
    /// Iterations kept after outlier removal.
    pub iterations: usize,
    pub outliers_dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatencyProfile {
    pub features: Vec<FeatureLatency>,
    /// Sum of the per-feature means: the cost of extracting every feature
    /// separately.
    pub total_mean_ms: f64,
    /// Mean time to extract the whole selection in one pass, with shared
    /// intermediates computed once.
    pub joint_mean_ms: f64,
    pub environment: String,
    pub window_ms: f64,
    pub sample_rate_hz: u32,
    pub warmup: usize,
}

impl LatencyProfile {
    pub fn get(&self, feature: &str) -> Option<&FeatureLatency> {
        self.features.iter().find(|f| f.feature == feature)
    }
}

/// Short description of the measuring host.
pub fn environment() -> String {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!("{}-{}, {cpus} logical cpus", std::env::consts::OS, std::env::consts::ARCH)
}

fn stats(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 { samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Mean and sample standard deviation after one pass of outlier rejection.
fn summarize(feature: &str, samples: &[f64]) -> FeatureLatency {
    let (mean, std) = stats(samples);
    let kept: Vec<f64> = samples.iter().copied().filter(|x| (x - mean).abs() <= OUTLIER_SIGMAS * std).collect();
    let kept = if kept.is_empty() { samples.to_vec() } else { kept };
    let (mean_ms, std_ms) = stats(&kept);
    FeatureLatency {
        feature: feature.to_string(),
        mean_ms,
        std_ms,
        sem_ms: batch_sem(&kept),
        iterations: kept.len(),
        outliers_dropped: samples.len() - kept.len(),
    }
}

/// Batches of about sqrt(n) consecutive samples; a trailing partial batch is
/// dropped.
fn batch_sem(samples: &[f64]) -> f64 {
    let size = ((samples.len() as f64).sqrt() as usize).max(1);
    let means: Vec<f64> = samples.chunks_exact(size).map(|b| b.iter().sum::<f64>() / size as f64).collect();
    if means.len() < 2 {
        return stats(samples).1 / (samples.len() as f64).sqrt();
    }
    stats(&means).1 / (means.len() as f64).sqrt()
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Times every selected feature on its own, so each is charged for the
/// intermediates it needs, round-robin over the workload's windows.
///
/// Runs on the calling thread only.
pub fn profile<T: Real>(config: &ProfileConfig, workload: &Workload<T>) -> Result<LatencyProfile> {
    if config.iterations < MIN_ITERATIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_ITERATIONS} iterations, got {}",
            config.iterations
        )));
    }
    let buffer = match workload {
        Workload::SeededNoise { seed } => {
            let fs = config.sample_rate_hz;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let n = (NOISE_SECONDS * f64::from(fs)) as usize;
            let (w, _) = config.plan.lengths(fs)?;
            let samples = (0..n.max(w)).map(|_| T::lit(rng.gen_range(-0.5..0.5))).collect();
            AudioBuffer::new(samples, fs)?
        }
        Workload::Supplied(buf) => buf.clone(),
    };
    let frames: Vec<Frame<T>> = window(&buffer, &config.plan)?;
    let extractor = Extractor::for_plan(&config.plan, buffer.sample_rate_hz())?;
    let singles: Vec<(&'static str, FeatureSelection)> = config
        .selection
        .ids()
        .into_iter()
        .map(|id| FeatureSelection::from_ids(&[id]).map(|s| (id, s)))
        .collect::<Result<_>>()?;

    for i in 0..config.warmup {
        let frame = &frames[i % frames.len()];
        extractor.extract(frame, &config.selection)?;
        for (_, sel) in &singles {
            extractor.extract(frame, sel)?;
        }
    }

    let mut samples = vec![Vec::with_capacity(config.iterations); singles.len()];
    let mut joint = Vec::with_capacity(config.iterations);
    for i in 0..config.iterations {
        let frame = &frames[i % frames.len()];
        // Rotate the starting feature so the cold-cache cost after the joint
        // pass is spread over all features instead of charged to one.
        for k in 0..singles.len() {
            let j = (i + k) % singles.len();
            let start = Instant::now();
            std::hint::black_box(extractor.extract(frame, &singles[j].1)?);
            samples[j].push(elapsed_ms(start));
        }
        let start = Instant::now();
        std::hint::black_box(extractor.extract(frame, &config.selection)?);
        joint.push(elapsed_ms(start));
    }

    let features: Vec<FeatureLatency> = singles.iter().zip(&samples).map(|((id, _), s)| summarize(id, s)).collect();
    Ok(LatencyProfile {
        total_mean_ms: features.iter().map(|f| f.mean_ms).sum(),
        joint_mean_ms: summarize("joint", &joint).mean_ms,
        features,
        environment: environment(),
        window_ms: config.plan.window_ms,
        sample_rate_hz: buffer.sample_rate_hz(),
        warmup: config.warmup,
    })
}

/// Writes the selector's `feature,latency_ms` file with six decimals.
/// Latencies below the file resolution are written as that resolution so
/// every row stays a valid positive cost.
pub fn write_latency_csv<W: Write>(profile: &LatencyProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["feature", "latency_ms"])?;
    for f in &profile.features {
        w.write_record([f.feature.as_str(), &format!("{:.6}", f.mean_ms.max(CSV_RESOLUTION_MS))])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_latency_csv(profile: &LatencyProfile, path: impl AsRef<Path>) -> Result<()> {
    write_latency_csv(profile, BufWriter::new(File::create(path)?))
}

/// Full profile including spread, outlier counts and host metadata.
pub fn write_profile_json<W: Write>(profile: &LatencyProfile, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, profile)?;
    out.write_all(b"\n")?;
    Ok(())
}
