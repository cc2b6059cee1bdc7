//! Oracles shared by the integration suites and the acceptance gate.
#![allow(dead_code)]

use inverse_control::cli::build_dataset;
use inverse_control::dataset::Dataset;
use inverse_control::gestures::{random_gesture, GestureSpec};
use inverse_control::nn::{mse_loss, sequence_gradient, LstmStack};
use inverse_control::physics::{build_preset, LinkKind, ModalResonator, ModelGraph, ModelPreset, Mode};
use inverse_control::rng::SplitMix64;
use inverse_control::SAMPLE_RATE;

/// Linear ramp of `n` samples from `from` to `to`, both ends included.
pub fn ramp(from: f64, to: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn seconds(s: f64) -> usize {
    (s * SAMPLE_RATE).round() as usize
}

/// Steps `graph` through `gesture`, recording every pluck release as
/// `(link index, sign after release)` in the order they happen.
pub fn pluck_releases(graph: &mut ModelGraph, gesture: &[f64]) -> Vec<(usize, f64)> {
    let counts = |g: &ModelGraph| -> Vec<Option<(u64, f64)>> {
        g.links()
            .iter()
            .map(|l| match &l.kind {
                LinkKind::Pluck(p) => Some((p.release_count(), p.last_sign())),
                _ => None,
            })
            .collect()
    };
    let mut before = counts(graph);
    let mut events = Vec::new();
    for &g in gesture {
        graph.step(g);
        let after = counts(graph);
        for (i, (b, a)) in before.iter().zip(&after).enumerate() {
            if let (Some((n0, _)), Some((n1, sign))) = (b, a) {
                assert!(n1 - n0 <= 1, "two releases of link {i} in one sample");
                if n1 > n0 {
                    events.push((i, *sign));
                }
            }
        }
        before = after;
    }
    events
}

/// True when every link's releases strictly alternate in sign.
pub fn releases_alternate(events: &[(usize, f64)]) -> bool {
    let links = events.iter().map(|e| e.0).max().map_or(0, |m| m + 1);
    (0..links).all(|link| {
        let signs: Vec<f64> = events.iter().filter(|e| e.0 == link).map(|e| e.1).collect();
        signs.windows(2).all(|w| w[0] == -w[1])
    })
}

/// Largest element displacement seen while rendering `gesture` through a fresh preset.
pub fn max_excursion(preset: ModelPreset, gesture: &[f64]) -> f64 {
    let mut graph = build_preset(preset);
    let mut worst: f64 = 0.0;
    for &g in gesture {
        let y = graph.step(g);
        assert!(y.is_finite(), "{preset} produced a non-finite sample");
        worst = worst.max(graph.max_abs_position());
    }
    worst
}

/// Decay of a single impulse-excited mode between its first cycle and the
/// cycle starting at `t60`, in dB, along with the closed-form two-pole
/// envelope `20 log10(r^N)` over the same span.
pub fn single_mode_decay_db(frequency: f64, t60: f64) -> (f64, f64) {
    let mut res = ModalResonator::new(vec![Mode::new(frequency, t60, 1.0, SAMPLE_RATE)], 1e-3);
    let period = (SAMPLE_RATE / frequency).ceil() as usize;
    let n60 = (t60 * SAMPLE_RATE).round() as usize;
    let mut out = Vec::with_capacity(n60 + period);
    res.advance(1.0, 1.0 / SAMPLE_RATE);
    out.push(res.contact_position());
    for _ in 1..n60 + period {
        res.advance(0.0, 1.0 / SAMPLE_RATE);
        out.push(res.contact_position());
    }
    let peak = |s: &[f64]| s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let measured = 20.0 * (peak(&out[n60..n60 + period]) / peak(&out[..period])).log10();
    let r = (-(1000f64.ln()) / (t60 * SAMPLE_RATE)).exp();
    let closed = 20.0 * (n60 as f64) * r.log10();
    (measured, closed)
}

/// Central-difference check of the analytic MSE gradient over every
/// parameter of a `layers` x `units` stack on one random sequence of length
/// `steps`. Returns the worst relative error.
pub fn gradient_check(layers: usize, units: usize, steps: usize, seed: u64, h: f64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut stack = LstmStack::init(layers, units, seed);
    // nonzero biases so every term of the cell equations is exercised
    for layer in &mut stack.layers {
        layer.bias.iter_mut().for_each(|b| *b += rng.uniform(-0.5, 0.5));
    }
    stack.head_bias[0] = rng.uniform(-0.5, 0.5);
    let x: Vec<f64> = (0..steps).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let y: Vec<f64> = (0..steps).map(|_| rng.uniform(-1.0, 1.0)).collect();

    let loss = |s: &LstmStack| mse_loss(&[s.predict(&x)], &[y.clone()]).unwrap();
    let (_, analytic) = sequence_gradient(&stack, &x, &y, steps as f64);
    let analytic: Vec<f64> = analytic.tensors().into_iter().flatten().copied().collect();

    let mut worst: f64 = 0.0;
    let mut k = 0;
    let sizes: Vec<usize> = stack.tensors().iter().map(|t| t.len()).collect();
    for (tensor, &len) in sizes.iter().enumerate() {
        for j in 0..len {
            let original = stack.tensors()[tensor][j];
            stack.tensors_mut()[tensor][j] = original + h;
            let up = loss(&stack);
            stack.tensors_mut()[tensor][j] = original - h;
            let down = loss(&stack);
            stack.tensors_mut()[tensor][j] = original;
            let numeric = (up - down) / (2.0 * h);
            let a = analytic[k];
            // floor keeps round-off on vanishing gradients from dominating
            let scale = a.abs().max(numeric.abs()).max(1e-7);
            worst = worst.max((a - numeric).abs() / scale);
            k += 1;
        }
    }
    worst
}

/// The normalized absolute error written out with plain loops, independent of the library.
pub fn scalar_nae(y: &[f64], y_hat: &[f64]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..y.len() {
        num += (y[i] - y_hat[i]).abs();
        den += y_hat[i].abs();
    }
    let n = y.len() as f64;
    if den == 0.0 {
        None
    } else {
        Some((num / n) / (den / n))
    }
}

/// Renders a seeded random gesture through `preset` and builds the dataset.
/// Returns the full-rate gesture and audio alongside it.
pub fn corpus(preset: ModelPreset, secs: f64, seed: u64) -> (Vec<f64>, Vec<f64>, Dataset) {
    let gesture = random_gesture(&GestureSpec::new(secs, seed)).into_samples();
    let audio = build_preset(preset).render(&gesture).unwrap();
    let dataset = build_dataset(preset, &gesture, seed).unwrap();
    (gesture, audio, dataset)
}
