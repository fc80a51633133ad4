use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use privaudio::features::{self, io as feature_io, FeatureSelection};
use privaudio::leakage;
use privaudio::profiler::{self, ProfileConfig, Workload};
use privaudio::selector::{self, Category, ScoreTable, SelectionRequest};
use privaudio::signal::{decode_wav, resample, AudioBuffer, WindowPlan};
use privaudio::Error;
use serde_json::{json, Map, Value};

use crate::{
    AnalyzeArgs, CategoryArg, ExtractArgs, Format, GetMetricsArgs, IndexArgs, ProfileArgs, SelectArgs, WindowArgs,
};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
    }
}

/// Unreadable or malformed input maps to 2, everything the input was valid
/// for but the request was not maps to 3.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_)
            | Error::MalformedHeader(_)
            | Error::UnsupportedEncoding(_)
            | Error::TruncatedData { .. }
            | Error::BufferTooShort { .. }
            | Error::MissingFeatureScores(_)
            | Error::MalformedScores { .. }
            | Error::InvalidTable(_) => EXIT_INPUT,
            _ => EXIT_DOMAIN,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

/// Errors in an input file's contents count as input errors whatever their
/// kind.
fn file_error(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CmdResult {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| Failure::input(e.to_string())),
    }
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("JSON values serialize");
    bytes.push(b'\n');
    bytes
}

fn check_range(name: &str, v: f64, ok: bool) -> CmdResult {
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::domain(format!("--{name} out of range: {v}")))
    }
}

fn plan(w: &WindowArgs) -> Result<WindowPlan, Failure> {
    check_range("window-ms", w.window_ms, w.window_ms > 0.0)?;
    if w.rate_hz == 0 {
        return Err(Failure::domain("--rate-hz must be positive"));
    }
    let mut plan = WindowPlan::with_window_ms(w.window_ms);
    if let Some(hop) = w.hop_ms {
        check_range("hop-ms", hop, hop > 0.0)?;
        plan.hop_ms = hop;
    }
    plan.lengths(w.rate_hz)?;
    Ok(plan)
}

fn parse_selection(spec: &str) -> Result<FeatureSelection, Failure> {
    let list = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{path}: {e}")))?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join(","),
        None => spec.to_string(),
    };
    Ok(FeatureSelection::parse(&list)?)
}

fn load_audio(path: &Path, rate_hz: u32) -> Result<AudioBuffer<f64>, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let buf = decode_wav::<f64>(&bytes).map_err(file_error(path))?;
    Ok(resample(&buf, rate_hz)?)
}

pub fn extract(a: ExtractArgs) -> CmdResult {
    if a.device.is_some() {
        return Err(Failure::input("live capture is not supported; pass --input with a WAV file"));
    }
    let input = a.input.as_deref().ok_or_else(|| Failure::input("--input is required"))?;
    let plan = plan(&a.window)?;
    let selection = parse_selection(&a.features)?;
    let started = Instant::now();
    let buf = load_audio(input, a.window.rate_hz)?;
    let vectors = features::extract_stream(&buf, &plan, &selection)?;
    let mut bytes = Vec::new();
    match a.format {
        Format::Csv => feature_io::write_csv(&mut bytes, &vectors)?,
        Format::Json => feature_io::write_json(&mut bytes, &vectors)?,
    }
    emit(a.out.as_deref(), &bytes)?;
    eprintln!(
        "extracted {} frames x {} components in {:.1} ms",
        vectors.len(),
        selection.component_ids().len(),
        started.elapsed().as_secs_f64() * 1e3
    );
    Ok(())
}

fn category(c: CategoryArg) -> Category {
    match c {
        CategoryArg::Animal => Category::Animal,
        CategoryArg::Nature => Category::Nature,
        CategoryArg::HumanNonSpeech => Category::HumanNonSpeech,
        CategoryArg::Interior => Category::Interior,
        CategoryArg::Exterior => Category::Exterior,
    }
}

pub fn select(a: SelectArgs) -> CmdResult {
    check_range("alpha", a.alpha, (0.0..=1.0).contains(&a.alpha))?;
    check_range("budget-ms", a.budget_ms, a.budget_ms > 0.0)?;
    let table = ScoreTable::<f64>::load_dir(&a.metrics.metrics_dir)?;
    let req = SelectionRequest {
        category: category(a.category),
        alpha: a.alpha,
        latency_budget_ms: a.budget_ms,
        attribute_weights: None,
    };
    let result = selector::select(&table, &req)?;
    emit(a.out.as_deref(), &json_bytes(&result.to_json()))
}

pub fn profile(a: ProfileArgs) -> CmdResult {
    if a.iterations < profiler::MIN_ITERATIONS {
        return Err(Failure::domain(format!("--iterations must be at least {}", profiler::MIN_ITERATIONS)));
    }
    let plan = plan(&a.window)?;
    let selection = parse_selection(&a.features)?;
    let workload = match &a.input {
        Some(path) => Workload::Supplied(load_audio(path, a.window.rate_hz)?),
        None => Workload::SeededNoise { seed: a.seed },
    };
    let config = ProfileConfig {
        plan,
        sample_rate_hz: a.window.rate_hz,
        iterations: a.iterations,
        selection,
        ..ProfileConfig::default()
    };
    let p = profiler::profile::<f64>(&config, &workload)?;
    let mut bytes = Vec::new();
    match a.format {
        Format::Csv => profiler::write_latency_csv(&p, &mut bytes)?,
        Format::Json => profiler::write_profile_json(&p, &mut bytes)?,
    }
    emit(a.out.as_deref(), &bytes)?;
    let dropped: usize = p.features.iter().map(|f| f.outliers_dropped).sum();
    eprintln!(
        "{} features, {} iterations: total {:.3} ms per window (single pass {:.3} ms), {dropped} outliers dropped [{}]",
        p.features.len(),
        a.iterations,
        p.total_mean_ms,
        p.joint_mean_ms,
        p.environment
    );
    Ok(())
}

fn print_index(v: &leakage::IndexValue<f64>) {
    println!("{:?}", v.value);
    if !v.clamped.is_empty() {
        eprintln!("ratios clamped at 1: {}", v.clamped.join(", "));
    }
}

pub fn sili(a: IndexArgs) -> CmdResult {
    let input = leakage::load_sili::<f64>(&a.input).map_err(file_error(&a.input))?;
    print_index(&leakage::sili(&input));
    Ok(())
}

pub fn csli(a: IndexArgs) -> CmdResult {
    let input = leakage::load_csli::<f64>(&a.input).map_err(file_error(&a.input))?;
    print_index(&leakage::csli(&input).map_err(file_error(&a.input))?);
    Ok(())
}

pub fn analyze(a: AnalyzeArgs) -> CmdResult {
    if a.bins < 2 {
        return Err(Failure::domain("--bins must be at least 2"));
    }
    let table = leakage::load_labeled_table::<f64>(&a.input, &a.labels).map_err(file_error(&a.input))?;
    let report = leakage::leakage_report(&table, a.bins)?;
    let bytes = match a.format {
        Format::Json => json_bytes(&serde_json::to_value(&report).map_err(|e| Failure::input(e.to_string()))?),
        Format::Csv => {
            let mut s = String::from("component,mi_bits,correlation,multiclass,zero_variance\n");
            for r in &report {
                s += &format!(
                    "{},{},{},{},{}\n",
                    r.component,
                    feature_io::format_significant(r.mi_bits, feature_io::SIGNIFICANT_DIGITS),
                    feature_io::format_significant(r.correlation, feature_io::SIGNIFICANT_DIGITS),
                    r.multiclass,
                    r.zero_variance
                );
            }
            s.into_bytes()
        }
    };
    emit(a.out.as_deref(), &bytes)
}

pub fn registry() -> CmdResult {
    let mut out = String::new();
    for s in features::registry() {
        out += &format!(
            "{}\t{}\t{}\t{}\n",
            s.id,
            s.group.as_str(),
            s.arity,
            match s.privacy_class {
                features::PrivacyClass::NonInvasive => "non_invasive",
                features::PrivacyClass::GrayZone => "gray_zone",
            }
        );
    }
    emit(None, out.as_bytes())
}

pub fn get_metrics(a: GetMetricsArgs) -> CmdResult {
    let spec = features::lookup(&a.feature).ok_or_else(|| Failure::domain(format!("unknown feature id `{}`", a.feature)))?;
    let table = ScoreTable::<f64>::load_dir(&a.metrics.metrics_dir)?;
    let entry = table.get(spec.id).ok_or_else(|| Failure::input(format!("no scores for `{}`", spec.id)))?;
    let privacy: Map<String, Value> = entry.privacy.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let utility: Map<String, Value> =
        Category::ALL.iter().map(|c| (c.as_str().to_string(), json!(entry.utility_for(*c)))).collect();
    let v = json!({
        "feature": spec.id,
        "privacy": privacy,
        "utility": utility,
        "latency_ms": entry.latency_ms,
    });
    emit(None, &json_bytes(&v))
}
