use std::io::Write;

use privaudio::leakage::{
    csli, leakage_report, load_csli, load_labeled_table, load_sili, mutual_information, pearson_correlation, sili,
    AttributeScore, CsliInput, LabeledFeatureTable, SiliInput,
};
use privaudio::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(cols: &[(&str, Vec<f64>)], labels: &[&str]) -> LabeledFeatureTable<f64> {
    let n = labels.len();
    let rows = (0..n).map(|i| cols.iter().map(|(_, c)| c[i]).collect()).collect();
    LabeledFeatureTable::new(
        cols.iter().map(|(k, _)| k.to_string()).collect(),
        rows,
        labels.iter().map(|s| s.to_string()).collect(),
    )
    .unwrap()
}

fn balanced(n: usize) -> Vec<&'static str> {
    (0..n).map(|i| if i % 2 == 0 { "female" } else { "male" }).collect()
}

#[test]
fn sili_full_retention_is_one() {
    let input = SiliInput::<f64>::new(vec![
        AttributeScore { name: "age".into(), accuracy: 0.7, baseline_accuracy: 0.7, weight: 0.2 },
        AttributeScore { name: "gender".into(), accuracy: 0.95, baseline_accuracy: 0.95, weight: 0.5 },
        AttributeScore { name: "ethnicity".into(), accuracy: 0.4, baseline_accuracy: 0.4, weight: 0.3 },
    ])
    .unwrap();
    assert!((sili(&input).value - 1.0).abs() < 1e-12);
}

#[test]
fn sili_half_retention() {
    let input = SiliInput::<f64>::equal_weights([("a", 0.3, 0.6), ("b", 0.4, 0.8), ("c", 0.25, 0.5)]).unwrap();
    assert!((sili(&input).value - 0.5).abs() < 1e-12);
}

#[test]
fn sili_reported_accuracies() {
    // (0.30 + 0.40 + 0.31) / 3
    let input = SiliInput::<f64>::equal_weights([("age", 0.30, 1.0), ("gender", 0.40, 1.0), ("ethnicity", 0.31, 1.0)]).unwrap();
    let v = sili(&input);
    assert!((v.value - 1.01 / 3.0).abs() < 1e-12);
    assert!((v.value - 0.3367).abs() < 1e-4);
    assert!(v.clamped.is_empty());
}

#[test]
fn sili_clamps_and_flags() {
    let input = SiliInput::<f64>::equal_weights([("a", 0.9, 0.6), ("b", 0.5, 1.0)]).unwrap();
    let v = sili(&input);
    assert!((v.value - 0.75).abs() < 1e-12);
    assert_eq!(v.clamped, ["a"]);
}

#[test]
fn sili_errors() {
    assert!(matches!(SiliInput::<f64>::new(vec![]), Err(Error::EmptyAttributes)));
    assert!(matches!(SiliInput::<f64>::equal_weights([("a", 0.5, 0.0)]), Err(Error::NonPositiveBaseline(n)) if n == "a"));
    let zero = vec![AttributeScore { name: "a".into(), accuracy: 0.5, baseline_accuracy: 1.0, weight: 0.0 }];
    assert!(matches!(SiliInput::new(zero), Err(Error::InvalidWeights(_))));
}

#[test]
fn sili_normalizes_weights() {
    let input = SiliInput::<f64>::new(vec![
        AttributeScore { name: "a".into(), accuracy: 1.0, baseline_accuracy: 1.0, weight: 3.0 },
        AttributeScore { name: "b".into(), accuracy: 0.0, baseline_accuracy: 1.0, weight: 1.0 },
    ])
    .unwrap();
    let total: f64 = input.attributes().iter().map(|a| a.weight).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!((sili(&input).value - 0.75).abs() < 1e-12);
}

#[test]
fn csli_raw_is_one() {
    let v = csli(&CsliInput::<f64>::new((0.2, 0.2), (0.3, 0.3), (0.8, 0.8))).unwrap();
    assert!((v.value - 1.0).abs() < 1e-12);
}

#[test]
fn csli_worked_example() {
    let v = csli(&CsliInput::<f64>::new((0.1, 1.0), (0.2, 1.0), (1.0, 0.1))).unwrap();
    assert!((v.value - 0.4 / 3.0).abs() < 1e-6);
}

#[test]
fn csli_zero_method_rate_clamps() {
    let mut input = CsliInput::<f64>::new((0.5, 0.0), (0.2, 1.0), (1.0, 0.1));
    input.weights = [0.5, 0.25, 0.25];
    let v = csli(&input).unwrap();
    assert!((v.value - (0.5 + 0.25 * 0.2 + 0.25 * 0.1)).abs() < 1e-12);
    assert_eq!(v.clamped, ["wer"]);
}

#[test]
fn csli_rejects_unnormalized_weights() {
    let mut input = CsliInput::<f64>::new((0.1, 1.0), (0.2, 1.0), (1.0, 0.1));
    input.weights = [0.5, 0.5, 0.5];
    assert!(matches!(csli(&input), Err(Error::InvalidWeights(_))));
}

proptest! {
    #[test]
    fn sili_monotone_and_permutation_invariant(
        acc in prop::collection::vec(0.0f64..1.0, 2..6),
        bump in 0.0f64..0.5,
        idx in 0usize..6,
    ) {
        let n = acc.len();
        let i = idx % n;
        let scores: Vec<_> = acc.iter().enumerate().map(|(k, &a)| (format!("a{k}"), a, 0.8)).collect();
        let base = sili(&SiliInput::<f64>::equal_weights(scores.clone()).unwrap()).value;
        let mut raised = scores.clone();
        raised[i].1 = (raised[i].1 + bump).min(1.0);
        prop_assert!(sili(&SiliInput::<f64>::equal_weights(raised).unwrap()).value >= base - 1e-12);
        let mut rev = scores;
        rev.reverse();
        prop_assert!((sili(&SiliInput::<f64>::equal_weights(rev).unwrap()).value - base).abs() < 1e-12);
    }

    #[test]
    fn csli_monotone(w in 0.01f64..1.0, p in 0.01f64..1.0, e in 0.01f64..1.0, d in 0.0f64..0.5) {
        let base = csli(&CsliInput::<f64>::new((0.3, w), (0.3, p), (0.9, e))).unwrap().value;
        let worse_asr = csli(&CsliInput::<f64>::new((0.3, w + d), (0.3, p + d), (0.9, e))).unwrap().value;
        let more_intelligible = csli(&CsliInput::<f64>::new((0.3, w), (0.3, p), (0.9, (e + d).min(1.0)))).unwrap().value;
        prop_assert!(worse_asr <= base + 1e-12);
        prop_assert!(more_intelligible >= base - 1e-12);
        prop_assert!((0.0..=1.0).contains(&base));
    }
}

#[test]
fn correlation_with_encoding() {
    let labels = balanced(20);
    // Sorted classes: female -> 0, male -> 1.
    let enc: Vec<f64> = labels.iter().map(|&l| if l == "male" { 1.0 } else { 0.0 }).collect();
    let neg: Vec<f64> = enc.iter().map(|v| -v).collect();
    let t = table(&[("enc", enc), ("neg", neg), ("flat", vec![2.0; 20])], &labels);
    assert!((pearson_correlation(&t, "enc").unwrap().value - 1.0).abs() < 1e-9);
    assert!((pearson_correlation(&t, "neg").unwrap().value + 1.0).abs() < 1e-9);
    let flat = pearson_correlation(&t, "flat").unwrap();
    assert_eq!(flat.value, 0.0);
    assert!(flat.zero_variance);
    assert!(matches!(pearson_correlation(&t, "nope"), Err(Error::UnknownFeatureId(_))));
}

#[test]
fn independent_column_is_uncorrelated() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let labels = balanced(1000);
    let x: Vec<f64> = (0..1000).map(|_| rng.gen()).collect();
    let t = table(&[("x", x)], &labels);
    assert!(pearson_correlation(&t, "x").unwrap().value.abs() < 0.1);
}

#[test]
fn mutual_information_oracles() {
    let labels = balanced(200);
    let clusters: Vec<f64> = labels.iter().enumerate().map(|(i, &l)| if l == "male" { 10.0 + (i % 7) as f64 * 0.01 } else { (i % 5) as f64 * 0.01 }).collect();
    let t = table(&[("c", clusters), ("k", vec![1.0; 200])], &labels);
    let mi = mutual_information(&t, "c", 16).unwrap();
    assert!((mi.bits - 1.0).abs() < 0.02);
    let k = mutual_information(&t, "k", 16).unwrap();
    assert_eq!(k.bits, 0.0);
    assert!(k.zero_variance);
    assert!(mutual_information(&t, "c", 1).is_err());
}

#[test]
fn independent_column_has_little_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let labels = balanced(2000);
    let x: Vec<f64> = (0..2000).map(|_| rng.gen()).collect();
    let t = table(&[("x", x)], &labels);
    assert!(mutual_information(&t, "x", 16).unwrap().bits < 0.03);
}

#[test]
fn multiclass_correlation_is_flagged() {
    let labels: Vec<&str> = (0..30).map(|i| ["a", "b", "c"][i % 3]).collect();
    let x: Vec<f64> = (0..30).map(|i| if i % 3 == 2 { 5.0 } else { 0.0 }).collect();
    let t = table(&[("x", x)], &labels);
    let r = pearson_correlation(&t, "x").unwrap();
    assert!(r.multiclass);
    assert!((r.value - 1.0).abs() < 1e-9);
    // MI of a column that only separates one of three balanced classes.
    let h = -(1.0 / 3.0f64) * (1.0 / 3.0f64).log2() - (2.0 / 3.0f64) * (2.0 / 3.0f64).log2();
    assert!((mutual_information(&t, "x", 16).unwrap().bits - h).abs() < 1e-9);
}

#[test]
fn report_ranks_and_is_order_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let labels = balanced(400);
    let noise: Vec<f64> = (0..400).map(|_| rng.gen()).collect();
    let signal: Vec<f64> = labels.iter().map(|&l| if l == "male" { 1.0 } else { 0.0 } + rng.gen_range(0.0..0.3)).collect();
    let noise2: Vec<f64> = (0..400).map(|_| rng.gen()).collect();
    let t = table(&[("a", noise.clone()), ("b", signal.clone()), ("c", noise2.clone())], &labels);
    let report = leakage_report(&t, 16).unwrap();
    assert_eq!(report[0].component, "b");

    let mut order: Vec<usize> = (0..400).collect();
    order.shuffle(&mut rng);
    let pick = |v: &Vec<f64>| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let shuffled_labels: Vec<&str> = order.iter().map(|&i| labels[i]).collect();
    let t2 = table(&[("a", pick(&noise)), ("b", pick(&signal)), ("c", pick(&noise2))], &shuffled_labels);
    assert_eq!(leakage_report(&t2, 16).unwrap(), report);
}

#[test]
fn constant_table_report() {
    let labels = balanced(12);
    let t = table(&[("a", vec![0.0; 12]), ("b", vec![3.0; 12])], &labels);
    for r in leakage_report(&t, 16).unwrap() {
        assert_eq!(r.mi_bits, 0.0);
        assert_eq!(r.correlation, 0.0);
        assert!(r.zero_variance);
    }
}

proptest! {
    #[test]
    fn affine_transforms(seed in 0u64..1000, a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = balanced(60);
        let x: Vec<f64> = labels.iter().map(|&l| rng.gen::<f64>() + if l == "male" { 0.4 } else { 0.0 }).collect();
        let pos: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let neg: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
        let t = table(&[("x", x), ("pos", pos), ("neg", neg)], &labels);
        let r = pearson_correlation(&t, "x").unwrap().value;
        prop_assert!((pearson_correlation(&t, "pos").unwrap().value - r).abs() < 1e-9);
        prop_assert!((pearson_correlation(&t, "neg").unwrap().value + r).abs() < 1e-9);
        let mi = mutual_information(&t, "x", 8).unwrap().bits;
        prop_assert!((mutual_information(&t, "pos", 8).unwrap().bits - mi).abs() < 1e-9);
        prop_assert!(mi >= 0.0 && mi <= 1.0 + 1e-9);
    }
}

#[test]
fn table_validation() {
    let few = LabeledFeatureTable::new(vec!["x".into()], vec![vec![0.0]; 5], vec!["a".into(); 5]);
    assert!(matches!(few, Err(Error::InvalidTable(_))));
    let one_class = LabeledFeatureTable::new(vec!["x".into()], vec![vec![0.0]; 10], vec!["a".into(); 10]);
    assert!(matches!(one_class, Err(Error::InvalidTable(_))));
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
    p
}

#[test]
fn index_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(&dir, "s.csv", "attribute,accuracy,baseline,weight\nage,0.30,1.0,1\ngender,0.40,1.0,1\nethnicity,0.31,1.0,1\n");
    assert!((sili(&load_sili::<f64>(&s).unwrap()).value - 1.01 / 3.0).abs() < 1e-12);
    let j = write(&dir, "s.json", r#"[{"attribute":"age","accuracy":0.5,"baseline":1.0}]"#);
    assert!((sili(&load_sili::<f64>(&j).unwrap()).value - 0.5).abs() < 1e-12);
    let c = write(&dir, "c.csv", "attribute,accuracy,baseline\nwer,1.0,0.1\nper,1.0,0.2\nestoi,0.1,1.0\n");
    assert!((csli(&load_csli::<f64>(&c).unwrap()).unwrap().value - 0.4 / 3.0).abs() < 1e-12);
    let bad = write(&dir, "b.csv", "attribute,accuracy,baseline\nwer,1.0,0.1\nfoo,1,1\n");
    assert!(matches!(load_csli::<f64>(&bad), Err(Error::InvalidTable(_))));
    let missing = write(&dir, "m.csv", "attribute,accuracy\nage,0.3\n");
    assert!(matches!(load_sili::<f64>(&missing), Err(Error::InvalidTable(_))));
}

#[test]
fn labeled_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut feats = String::from("window_index,start_time_s,rms,zcr\n");
    let mut labels = String::from("row_id,label\n");
    for i in 0..12 {
        feats += &format!("{i},{},{},{}\n", i as f64 * 0.25, i % 2, 0.1 * i as f64);
        labels += &format!("{i},{}\n", if i % 2 == 0 { "f" } else { "m" });
    }
    let f = write(&dir, "f.csv", &feats);
    let l = write(&dir, "l.csv", &labels);
    let t = load_labeled_table::<f64>(&f, &l).unwrap();
    assert_eq!(t.columns(), ["rms", "zcr"]);
    assert_eq!(t.len(), 12);
    assert!((pearson_correlation(&t, "rms").unwrap().value - 1.0).abs() < 1e-9);
    let short = write(&dir, "s.csv", "row_id,label\n0,f\n");
    assert!(matches!(load_labeled_table::<f64>(&f, &short), Err(Error::InvalidTable(_))));
}
