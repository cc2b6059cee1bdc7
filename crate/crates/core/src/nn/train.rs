use std::io::Write;
use std::path::Path;
use std::time::Instant;

use super::adam::{AdamConfig, AdamState};
use super::lstm::LstmStack;
use crate::dataset::{Dataset, SegmentPair, Split, BATCH_SIZE};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::GESTURE_LIMIT;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub layers: usize,
    pub units: usize,
    pub adam: AdamConfig,
    /// 1 runs sequentially. More threads split each batch across workers;
    /// gradients are still reduced in segment order, so results match.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 64,
            batch_size: BATCH_SIZE,
            seed: 0,
            layers: 2,
            units: 64,
            adam: AdamConfig::default(),
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epochs", self.epochs),
            ("batch size", self.batch_size),
            ("units", self.units),
            ("threads", self.threads),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")));
        }
        if !(2..=3).contains(&self.layers) {
            return Err(Error::InvalidArgument(format!(
                "layers must be 2 or 3, got {}",
                self.layers
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    /// Parameters from the epoch with the lowest validation MSE.
    pub stack: LstmStack,
    /// Optimizer state at that same epoch.
    pub adam: AdamState,
    pub best_epoch: usize,
    pub log: Vec<EpochLog>,
}

/// Mean over batch and time of `(prediction - target)^2`.
pub fn mse_loss(predictions: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<f64> {
    if predictions.len() != targets.len() || predictions.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{} predictions vs {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (p, t) in predictions.iter().zip(targets) {
        if p.len() != t.len() {
            return Err(Error::ShapeMismatch(format!(
                "sequence lengths {} and {}",
                p.len(),
                t.len()
            )));
        }
        total += p.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        count += p.len();
    }
    Ok(total / count as f64)
}

/// Network input for a segment: the audio as is.
pub fn segment_input(seg: &SegmentPair) -> Vec<f64> {
    seg.audio.iter().map(|&v| f64::from(v)).collect()
}

/// Network target for a segment: the gesture divided by 5 cm.
pub fn segment_target(seg: &SegmentPair) -> Vec<f64> {
    seg.gesture.iter().map(|&v| f64::from(v) / GESTURE_LIMIT).collect()
}

/// Sum of squared errors and gradient for one sequence, with the gradient
/// scaled by `1 / normalizer`.
pub fn sequence_gradient(
    stack: &LstmStack,
    input: &[f64],
    target: &[f64],
    normalizer: f64,
) -> (f64, LstmStack) {
    let (pred, cache) = stack.forward(input);
    let mut sse = 0.0;
    let dy: Vec<f64> = pred
        .iter()
        .zip(target)
        .map(|(p, t)| {
            let e = p - t;
            sse += e * e;
            2.0 * e / normalizer
        })
        .collect();
    (sse, stack.backward(&cache, &dy))
}

/// Batch MSE and its gradient. Per-segment gradients are computed
/// independently (on `threads` workers) and summed in batch order.
pub fn batch_gradient(
    stack: &LstmStack,
    batch: &[(Vec<f64>, Vec<f64>)],
    threads: usize,
) -> (f64, LstmStack) {
    let count: usize = batch.iter().map(|(x, _)| x.len()).sum();
    let normalizer = count as f64;
    let per_segment: Vec<(f64, LstmStack)> = if threads <= 1 || batch.len() < 2 {
        batch
            .iter()
            .map(|(x, y)| sequence_gradient(stack, x, y, normalizer))
            .collect()
    } else {
        let chunk = batch.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|(x, y)| sequence_gradient(stack, x, y, normalizer))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("gradient worker panicked"))
                .collect()
        })
    };
    let mut grads = stack.zeros_like();
    let mut sse = 0.0;
    for (s, g) in &per_segment {
        sse += s;
        grads.add_assign(g);
    }
    (sse / normalizer, grads)
}

/// MSE of the network over one split, in normalized gesture units.
pub fn split_mse(stack: &LstmStack, dataset: &Dataset, split: Split) -> f64 {
    let segs = dataset.split(split);
    let preds: Vec<Vec<f64>> = segs.iter().map(|s| stack.predict(&segment_input(s))).collect();
    let targets: Vec<Vec<f64>> = segs.iter().map(segment_target).collect();
    mse_loss(&preds, &targets).unwrap_or(f64::NAN)
}

fn epoch_seed(seed: u64, epoch: usize) -> u64 {
    SplitMix64::fork(seed, epoch as u64 + 1).next_u64()
}

/// Trains a fresh stack. Each epoch shuffles the training split into
/// batches, takes one Adam step per batch, then measures validation MSE.
pub fn train(dataset: &Dataset, config: &TrainConfig) -> Result<TrainOutcome> {
    train_with(dataset, config, |_| {})
}

/// Like [`train`], calling `on_epoch` after every epoch.
pub fn train_with(
    dataset: &Dataset,
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochLog),
) -> Result<TrainOutcome> {
    config.validate()?;
    let [train_count, val_count, _] = dataset.counts();
    if train_count == 0 || val_count == 0 {
        return Err(Error::InvalidArgument(
            "training needs nonempty train and validation splits".into(),
        ));
    }
    let mut stack = LstmStack::init(config.layers, config.units, config.seed);
    let mut adam = AdamState::new(&stack, config.adam);
    let mut best: Option<(f64, usize, LstmStack, AdamState)> = None;
    let mut log = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        let started = Instant::now();
        let mut weighted = 0.0;
        let mut seen = 0usize;
        for batch in dataset.batches(Split::Train, config.batch_size, epoch_seed(config.seed, epoch)) {
            let pairs: Vec<(Vec<f64>, Vec<f64>)> = batch
                .iter()
                .map(|s| (segment_input(s), segment_target(s)))
                .collect();
            let (loss, grads) = batch_gradient(&stack, &pairs, config.threads);
            adam.step(&mut stack, &grads)?;
            weighted += loss * pairs.len() as f64;
            seen += pairs.len();
        }
        let val_mse = split_mse(&stack, dataset, Split::Val);
        let entry = EpochLog {
            epoch,
            train_mse: weighted / seen as f64,
            val_mse,
            seconds: started.elapsed().as_secs_f64(),
        };
        on_epoch(&entry);
        log.push(entry);
        if best.as_ref().map_or(true, |(v, ..)| val_mse < *v) {
            best = Some((val_mse, epoch, stack.clone(), adam.clone()));
        }
    }
    let (_, best_epoch, stack, adam) = best.expect("at least one epoch");
    Ok(TrainOutcome {
        stack,
        adam,
        best_epoch,
        log,
    })
}

pub const LOG_HEADER: &str = "epoch,train_mse,val_mse,seconds";

pub fn write_log(path: impl AsRef<Path>, log: &[EpochLog]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{LOG_HEADER}")?;
    for e in log {
        writeln!(w, "{},{:e},{:e},{:.3}", e.epoch, e.train_mse, e.val_mse, e.seconds)?;
    }
    w.flush()?;
    Ok(())
}
