mod common;

use common::{corpus, gradient_check};
use inverse_control::dataset::Split;
use inverse_control::nn::{
    load_checkpoint, mse_loss, save_checkpoint, sequence_gradient, train, AdamConfig, AdamState, LstmStack,
    TrainConfig,
};
use inverse_control::physics::ModelPreset;
use inverse_control::rng::SplitMix64;
use inverse_control::Error;
use proptest::prelude::*;

fn small_config(epochs: usize, seed: u64) -> TrainConfig {
    TrainConfig {
        epochs,
        batch_size: 4,
        seed,
        layers: 2,
        units: 6,
        adam: AdamConfig::default(),
        threads: 1,
    }
}

#[test]
fn gradients_match_central_differences() {
    let worst = gradient_check(2, 8, 16, 2024, 1e-5);
    assert!(worst < 1e-4, "max relative error {worst:e}");
}

#[test]
fn gradients_match_for_three_layers() {
    let worst = gradient_check(3, 5, 12, 7, 1e-5);
    assert!(worst < 1e-4, "max relative error {worst:e}");
}

#[test]
fn init_respects_the_glorot_bound_and_forget_bias() {
    let stack = LstmStack::init(3, 16, 5);
    assert_eq!(stack, LstmStack::init(3, 16, 5));
    for layer in &stack.layers {
        let limit = layer.glorot_limit();
        assert!(layer.w_input.iter().chain(layer.w_recurrent.iter()).all(|w| w.abs() <= limit));
        assert!(layer.forget_bias().iter().all(|&b| b == 1.0));
        let nonforget = layer.bias.iter().filter(|&&b| b != 0.0).count();
        assert_eq!(nonforget, layer.units);
    }
    assert_eq!(stack.layers[0].input_dim, 1);
    assert_eq!(stack.layers[1].input_dim, 16);
}

proptest! {
    #[test]
    fn activations_stay_inside_their_ranges(
        input in prop::collection::vec(-5.0f64..5.0, 1..64),
        seed in 0u64..1000,
    ) {
        let stack = LstmStack::init(2, 8, seed);
        let (_, cache) = stack.forward(&input);
        for layer in &cache.layers {
            let u = layer.hidden.ncols();
            prop_assert!(layer.hidden.iter().all(|h| h.abs() < 1.0));
            for row in layer.gates.rows() {
                for (k, &g) in row.iter().enumerate() {
                    if k / u == 2 {
                        prop_assert!(g > -1.0 && g < 1.0);
                    } else {
                        prop_assert!(g > 0.0 && g < 1.0);
                    }
                }
            }
        }
    }
}

#[test]
fn mse_matches_naive_accumulation() {
    let mut rng = SplitMix64::new(99);
    let preds: Vec<Vec<f64>> = (0..5).map(|_| (0..37).map(|_| rng.uniform(-2.0, 2.0)).collect()).collect();
    let targets: Vec<Vec<f64>> = (0..5).map(|_| (0..37).map(|_| rng.uniform(-2.0, 2.0)).collect()).collect();
    let mut sum = 0.0;
    for b in 0..5 {
        for t in 0..37 {
            sum += (preds[b][t] - targets[b][t]).powi(2);
        }
    }
    let naive = sum / (5.0 * 37.0);
    assert!((mse_loss(&preds, &targets).unwrap() - naive).abs() < 1e-12);
    let shifted: Vec<Vec<f64>> = targets.iter().map(|s| s.iter().map(|v| v + 0.1).collect()).collect();
    assert!((mse_loss(&shifted, &targets).unwrap() - 0.01).abs() < 1e-12);
    assert_eq!(mse_loss(&targets, &targets).unwrap(), 0.0);
    assert!(matches!(mse_loss(&preds[..2], &targets[..3]), Err(Error::ShapeMismatch(_))));
}

#[test]
fn zero_output_gradient_gives_zero_parameter_gradient() {
    let stack = LstmStack::init(2, 4, 1);
    let x = vec![0.3; 20];
    let (pred, _) = stack.forward(&x);
    let (sse, grads) = sequence_gradient(&stack, &x, &pred, 20.0);
    assert_eq!(sse, 0.0);
    assert!(grads.tensors().iter().all(|t| t.iter().all(|&g| g == 0.0)));
}

#[test]
fn zero_learning_rate_leaves_parameters_alone() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 1);
    let mut config = small_config(2, 4);
    config.adam.learning_rate = 0.0;
    let outcome = train(&dataset, &config).unwrap();
    assert_eq!(outcome.stack, LstmStack::init(2, 6, 4));
}

#[test]
fn training_is_deterministic_in_sequential_mode() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 2);
    let config = small_config(3, 11);
    let a = train(&dataset, &config).unwrap();
    let b = train(&dataset, &config).unwrap();
    let key = |o: &inverse_control::nn::TrainOutcome| -> Vec<(usize, u64, u64)> {
        o.log
            .iter()
            .map(|e| (e.epoch, e.train_mse.to_bits(), e.val_mse.to_bits()))
            .collect()
    };
    assert_eq!(key(&a), key(&b));
    assert_eq!(a.stack, b.stack);
    assert_eq!(a.log.len(), 3);
}

#[test]
fn threaded_training_matches_sequential() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 3);
    let seq = train(&dataset, &small_config(2, 5)).unwrap();
    let par = train(&dataset, &TrainConfig { threads: 3, ..small_config(2, 5) }).unwrap();
    for (a, b) in seq.log.iter().zip(&par.log) {
        assert!((a.train_mse - b.train_mse).abs() <= 1e-9 * a.train_mse.abs());
        assert!((a.val_mse - b.val_mse).abs() <= 1e-9 * a.val_mse.abs());
    }
}

#[test]
fn best_validation_epoch_is_returned() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 4);
    let outcome = train(&dataset, &small_config(4, 6)).unwrap();
    let best = outcome
        .log
        .iter()
        .min_by(|a, b| a.val_mse.total_cmp(&b.val_mse))
        .unwrap();
    assert_eq!(outcome.best_epoch, best.epoch);
    let val = inverse_control::nn::split_mse(&outcome.stack, &dataset, Split::Val);
    assert_eq!(val.to_bits(), best.val_mse.to_bits());
}

#[test]
fn training_rejects_bad_configs() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 5);
    for bad in [
        TrainConfig { layers: 1, ..small_config(1, 0) },
        TrainConfig { units: 0, ..small_config(1, 0) },
        TrainConfig { epochs: 0, ..small_config(1, 0) },
        TrainConfig { batch_size: 0, ..small_config(1, 0) },
    ] {
        assert!(train(&dataset, &bad).is_err(), "{bad:?}");
    }
}

#[test]
fn checkpoint_round_trip_preserves_predictions() {
    let (_, _, dataset) = corpus(ModelPreset::PluckAResonator, 6.0, 6);
    let outcome = train(&dataset, &small_config(1, 8)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.invw");
    save_checkpoint(&path, &outcome.stack, &outcome.adam).unwrap();
    let (stack, adam): (LstmStack, AdamState) = load_checkpoint(&path).unwrap();
    assert_eq!(stack, outcome.stack);
    assert_eq!(adam.m, outcome.adam.m);
    assert_eq!(adam.v, outcome.adam.v);
    assert_eq!(adam.step, outcome.adam.step);
    let x: Vec<f64> = dataset.split(Split::Test)[0].audio.iter().map(|&v| f64::from(v)).collect();
    let before = outcome.stack.predict(&x);
    let after = stack.predict(&x);
    assert!(before.iter().zip(&after).all(|(a, b)| a.to_bits() == b.to_bits()));
}
