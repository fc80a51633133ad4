use std::io::Write;

use privaudio::features::registry;
use privaudio::selector::{
    coefficients, lp_relaxation, select, sweep_alpha, Category, FeatureScores, ScoreTable, SelectionRequest,
};
use privaudio::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn entry(id: &str, u: f64, p: f64, t: f64) -> FeatureScores<f64> {
    FeatureScores {
        id: id.into(),
        privacy: vec![("age".into(), p), ("gender".into(), p), ("ethnicity".into(), p)],
        utility: [u; 5],
        latency_ms: t,
    }
}

fn three(t: f64) -> ScoreTable<f64> {
    ScoreTable::new(vec![entry("f1", 0.9, 0.1, t), entry("f2", 0.5, 0.5, t), entry("f3", 0.1, 0.9, t)]).unwrap()
}

fn req(alpha: f64, budget: f64) -> SelectionRequest<f64> {
    SelectionRequest { alpha, latency_budget_ms: budget, ..Default::default() }
}

#[test]
fn coefficient_formula() {
    let t = ScoreTable::new(vec![entry("a", 0.9, 0.1, 1.0)]).unwrap();
    assert!((coefficients(&t, &req(0.5, 10.0)).unwrap()[0].1 + 0.4).abs() < 1e-12);
    let tt = three(1.0);
    for (e, (_, c)) in tt.entries().iter().zip(coefficients(&tt, &req(1.0, 10.0)).unwrap()) {
        assert_eq!(c, -e.utility[0]);
    }
    for (e, (_, c)) in tt.entries().iter().zip(coefficients(&tt, &req(0.0, 10.0)).unwrap()) {
        assert!((c - e.privacy[0].1).abs() < 1e-12);
    }
}

#[test]
fn privacy_mean_and_weights() {
    let mut e = entry("a", 0.0, 0.0, 1.0);
    e.privacy = vec![("age".into(), 0.3), ("gender".into(), 0.6), ("ethnicity".into(), 0.9)];
    let t = ScoreTable::new(vec![e]).unwrap();
    assert!((coefficients(&t, &req(0.0, 1.0)).unwrap()[0].1 - 0.6).abs() < 1e-12);
    let mut r = req(0.0, 1.0);
    r.attribute_weights = Some(vec![("gender".into(), 1.0), ("ethnicity".into(), 3.0)]);
    assert!((coefficients(&t, &r).unwrap()[0].1 - 0.825).abs() < 1e-12);
    r.attribute_weights = Some(vec![("height".into(), 1.0)]);
    assert!(matches!(coefficients(&t, &r), Err(Error::InvalidWeights(_))));
}

#[test]
fn worked_examples() {
    let r = select(&three(10.0), &req(0.5, 30.0)).unwrap();
    assert_eq!(r.selected, ["f1"]);
    assert!((r.objective_benefit - 0.4).abs() < 1e-12);
    assert_eq!(r.total_latency_ms, 10.0);
    assert_eq!(r.candidate_pool, ["f1"]);

    let r = select(&three(10.0), &req(1.0, 30.0)).unwrap();
    assert_eq!(r.selected, ["f1", "f2", "f3"]);
    assert!((r.objective_benefit - 1.5).abs() < 1e-12);

    let r = select(&three(20.0), &req(1.0, 30.0)).unwrap();
    assert_eq!(r.selected, ["f1"]);
    assert!((r.objective_benefit - 0.9).abs() < 1e-12);
}

#[test]
fn ties_prefer_lower_latency_then_table_order() {
    let t = ScoreTable::new(vec![entry("a", 0.5, 0.0, 5.0), entry("b", 0.5, 0.0, 4.0), entry("c", 0.5, 0.0, 4.0)])
        .unwrap();
    assert_eq!(select(&t, &req(1.0, 6.0)).unwrap().selected, ["b"]);
}

#[test]
fn request_validation() {
    let t = three(1.0);
    assert!(matches!(select(&t, &req(1.5, 10.0)), Err(Error::InvalidAlpha(_))));
    assert!(matches!(select(&t, &req(-0.1, 10.0)), Err(Error::InvalidAlpha(_))));
    assert!(matches!(select(&t, &req(0.5, 0.0)), Err(Error::InvalidBudget(_))));
    assert!(matches!(select(&t, &req(0.5, f64::NAN)), Err(Error::InvalidBudget(_))));
}

#[test]
fn defaults() {
    let r = SelectionRequest::<f64>::default();
    assert_eq!(r.category, Category::Interior);
    assert_eq!(r.alpha, 0.5);
    assert_eq!(r.latency_budget_ms, 100.0);
}

#[test]
fn lp_bound_dominates() {
    let t = three(20.0);
    let lp = lp_relaxation(&t, &req(1.0, 30.0)).unwrap();
    // f1 whole plus half of f2.
    assert!((lp - 1.15).abs() < 1e-12);
    assert!(lp >= select(&t, &req(1.0, 30.0)).unwrap().objective_benefit);
}

#[test]
fn json_schema() {
    let r = select(&three(10.0), &req(0.5, 30.0)).unwrap();
    let v = r.to_json();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["selected", "coefficients", "objective_benefit", "total_latency_ms", "alpha", "category", "budget_ms"]);
    assert_eq!(v["category"], "interior");
}

pub fn random_table(rng: &mut ChaCha8Rng, n: usize) -> ScoreTable<f64> {
    ScoreTable::new(
        (0..n)
            .map(|i| {
                let mut e = entry(&format!("f{i}"), 0.0, 0.0, rng.gen_range(1.0..20.0));
                e.utility = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
                e.privacy.iter_mut().for_each(|p| p.1 = rng.gen_range(0.0..1.0));
                e
            })
            .collect(),
    )
    .unwrap()
}

/// Best objective over every subset.
fn brute_force(table: &ScoreTable<f64>, r: &SelectionRequest<f64>) -> f64 {
    let c = coefficients(table, r).unwrap();
    let n = table.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let (mut b, mut t) = (0.0, 0.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                b -= c[i].1;
                t += table.entries()[i].latency_ms;
            }
        }
        if t <= r.latency_budget_ms {
            best = best.max(b);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_brute_force(seed in any::<u64>(), n in 3usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng, n);
        let r = SelectionRequest {
            alpha: [0.0, 0.3, 0.5, 0.8, 1.0][rng.gen_range(0..5)],
            latency_budget_ms: rng.gen_range(5.0..60.0),
            category: Category::ALL[rng.gen_range(0..5)],
            attribute_weights: None,
        };
        let res = select(&table, &r).unwrap();
        prop_assert!((res.objective_benefit - brute_force(&table, &r)).abs() < 1e-9);
        prop_assert!(res.total_latency_ms <= r.latency_budget_ms);
        prop_assert!(res.selected.iter().all(|s| res.candidate_pool.contains(s)));
        let coeffs = coefficients(&table, &r).unwrap();
        prop_assert!(res.selected.iter().all(|s| coeffs.iter().find(|c| &c.0 == s).unwrap().1 < 0.0));

        let scaled = select(&table.scaled(3.7), &r).unwrap();
        prop_assert_eq!(scaled.selected, res.selected);
    }

    #[test]
    fn pool_monotone_in_alpha(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng, 20);
        let mut alphas: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..=1.0)).collect();
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let results = sweep_alpha(&table, &req(0.5, 50.0), &alphas).unwrap();
        for w in results.windows(2) {
            prop_assert!(w[0].candidate_pool.iter().all(|id| w[1].candidate_pool.contains(id)));
        }
    }
}

#[test]
fn boundary_alphas() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let table = random_table(&mut rng, 10);
    let r = sweep_alpha(&table, &req(0.5, 1e9), &[0.0, 1.0]).unwrap();
    assert!(r[0].candidate_pool.is_empty());
    assert!(r[0].selected.is_empty());
    assert_eq!(r[1].candidate_pool.len(), 10);
    assert_eq!(r[1].selected.len(), 10);
}

#[test]
fn count_grows_with_alpha_when_budget_is_loose() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let table = random_table(&mut rng, 35);
        let counts: Vec<usize> = sweep_alpha(&table, &req(0.5, 1e6), &[0.3, 0.5, 0.8, 1.0])
            .unwrap()
            .iter()
            .map(|r| r.selected.len())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }
}

#[test]
fn full_registry_solves_quickly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let table = random_table(&mut rng, 35);
    let start = std::time::Instant::now();
    for alpha in [0.3, 0.5, 0.8, 1.0] {
        let r = select(&table, &req(alpha, 100.0)).unwrap();
        assert!(r.total_latency_ms <= 100.0);
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

fn write(dir: &std::path::Path, name: &str, body: &str) {
    std::fs::File::create(dir.join(name)).unwrap().write_all(body.as_bytes()).unwrap();
}

fn score_files(dir: &std::path::Path, skip: Option<&str>) {
    let mut p = String::from("feature,age,gender,ethnicity\n");
    let mut u = String::from("# comment lines are ignored\nfeature,animal,nature,human_non_speech,interior,exterior\n");
    let mut l = String::from("feature,latency_ms\n");
    for (i, s) in registry().iter().enumerate() {
        let x = i as f64 / 100.0;
        p += &format!("{},{x},{x},{x}\n", s.id);
        u += &format!("{},{x},{x},{x},{x},{x}\n", s.id);
        if Some(s.id) != skip {
            l += &format!("{},{}\n", s.id, 0.5 + x);
        }
    }
    write(dir, "privacy.csv", &p);
    write(dir, "utility.csv", &u);
    write(dir, "latency.csv", &l);
}

#[test]
fn load_score_files() {
    let dir = tempfile::tempdir().unwrap();
    score_files(dir.path(), None);
    let t = ScoreTable::<f64>::load_dir(dir.path()).unwrap();
    assert_eq!(t.len(), 35);
    assert_eq!(t.entries()[0].id, "amplitude_envelope");
    assert_eq!(t.get("zcr").unwrap().utility_for(Category::Exterior), 0.02);
    assert_eq!(t.get("zcr").unwrap().latency_ms, 0.52);
}

#[test]
fn missing_row_is_named() {
    let dir = tempfile::tempdir().unwrap();
    score_files(dir.path(), Some("jitter"));
    assert!(matches!(ScoreTable::<f64>::load_dir(dir.path()), Err(Error::MissingFeatureScores(id)) if id == "jitter"));
}

#[test]
fn malformed_rows_are_named() {
    let dir = tempfile::tempdir().unwrap();
    score_files(dir.path(), None);
    let l = std::fs::read_to_string(dir.path().join("latency.csv")).unwrap();
    write(dir.path(), "latency.csv", &l.replace("rms,0.51", "rms,-1"));
    let err = ScoreTable::<f64>::load_dir(dir.path()).unwrap_err();
    assert!(matches!(&err, Error::MalformedScores { reason, .. } if reason.contains("`rms`")), "{err}");

    write(dir.path(), "latency.csv", &format!("{l}timbre,1.0\n"));
    let err = ScoreTable::<f64>::load_dir(dir.path()).unwrap_err();
    assert!(matches!(&err, Error::MalformedScores { reason, .. } if reason.contains("timbre")), "{err}");

    write(dir.path(), "latency.csv", &l.replace("feature,latency_ms", "feature,latency"));
    assert!(matches!(ScoreTable::<f64>::load_dir(dir.path()), Err(Error::MalformedScores { .. })));
}
