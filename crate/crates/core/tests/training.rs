use cffqnn::config::RunConfig;
use cffqnn::data::Dataset;
use cffqnn::models::{ModelKind, Topology};
use cffqnn::optimize::{initial_model, minimize, train, ObjectiveSpec, TrainConfig};
use cffqnn::workflow::{self, prepare_dataset};
use cffqnn::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two noisy clusters in `d` dimensions.
fn clusters(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        let y = (i % 2) as u8;
        let centre = if y == 1 { 1.5 } else { -1.5 };
        features.push((0..d).map(|_| centre + rng.gen_range(-1.0..1.0)).collect());
        labels.push(y);
    }
    Dataset::new(features, labels, (0..d).map(|i| format!("f{i}")).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimize_never_worse_than_start(
        start in prop::collection::vec(-3.0f64..3.0, 1..6),
        shift in prop::collection::vec(-3.0f64..3.0, 6),
        budget in 1usize..60,
    ) {
        let f = |x: &[f64]| -> f64 {
            x.iter().zip(&shift).map(|(a, s)| (a - s).powi(2) + (3.0 * a).sin()).sum()
        };
        let f0 = f(&start);
        let m = minimize(&ObjectiveSpec::new(start.clone(), budget), f).unwrap();
        prop_assert!(m.value <= f0);
        prop_assert!(m.evaluations <= budget);
        prop_assert!((f(&m.point) - m.value).abs() < 1e-12);
    }
}

#[test]
fn zero_budget_is_rejected() {
    let t = Topology::new(vec![1, 1], 1).unwrap();
    let config = TrainConfig {
        iterations: 0,
        ..TrainConfig::default()
    };
    let e = train(&ModelKind::Cffqnn, &t, &[vec![0.5]], &[1], &config).unwrap_err();
    assert!(matches!(e, Error::InvalidArgument(_)));
    assert!(minimize(&ObjectiveSpec::new(vec![0.0], 0), |x| x[0]).is_err());
}

#[test]
fn toy_problem_loss_decreases() {
    let t = Topology::new(vec![1, 1], 1).unwrap();
    let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 * std::f64::consts::PI / 19.0]).collect();
    let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
    let out = train(&ModelKind::Cffqnn, &t, &rows, &labels, &TrainConfig::default()).unwrap();
    assert!(out.best_loss < out.initial_loss);
    assert_eq!(out.log.losses[0], out.initial_loss);
    assert!(out.log.losses.len() <= 100);
}

#[test]
fn fixed_variant_keeps_its_encoder() {
    let data = clusters(40, 3, 5);
    let t = Topology::new(vec![2, 1], 3).unwrap();
    let config = TrainConfig {
        iterations: 40,
        seed: 9,
        ..TrainConfig::default()
    };
    let before = initial_model(&ModelKind::FixedCffqnn, &t, 9);
    let out = train(&ModelKind::FixedCffqnn, &t, &data.features, &data.labels, &config).unwrap();
    assert_eq!(out.model.frozen(), before.frozen());
    assert_eq!(out.model.trainable().len(), 3);
    assert!(before.frozen().iter().all(|w| (-1.0..=1.0).contains(w)));
}

#[test]
fn training_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default();
    config.pca_k = 3;
    config.topology = vec![2, 1];
    config.budget = 30;
    config.seed = 11;
    let prepared = prepare_dataset(&clusters(60, 5, 1), 0, &config).unwrap();
    let train_path = dir.path().join("train.prepared");
    std::fs::write(&train_path, prepared.train.to_text()).unwrap();
    config.train_file = Some(train_path);

    let mut texts = Vec::new();
    for run in ["a", "b"] {
        config.out_dir = dir.path().join(run);
        workflow::cmd_train(&config).unwrap();
        texts.push(std::fs::read(config.out_dir.join(workflow::PARAMS_FILE)).unwrap());
    }
    assert_eq!(texts[0], texts[1]);

    config.seed = 12;
    config.out_dir = dir.path().join("c");
    workflow::cmd_train(&config).unwrap();
    assert_ne!(std::fs::read(config.out_dir.join(workflow::PARAMS_FILE)).unwrap(), texts[0]);
}
