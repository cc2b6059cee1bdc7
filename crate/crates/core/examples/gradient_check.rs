//! Compare backpropagation through time with central differences.

use inverse_control::nn::{sequence_gradient, LstmStack};
use inverse_control::rng::SplitMix64;

fn loss(stack: &LstmStack, x: &[f64], y: &[f64]) -> f64 {
    sequence_gradient(stack, x, y, x.len() as f64).0 / x.len() as f64
}

fn main() {
    let mut rng = SplitMix64::new(1);
    let stack = LstmStack::init(2, 8, 1);
    let x: Vec<f64> = (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let y: Vec<f64> = (0..16).map(|_| rng.uniform(-0.05, 0.05)).collect();

    let (_, analytic) = sequence_gradient(&stack, &x, &y, x.len() as f64);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut probe = stack.clone();
    for (t, grads) in analytic.tensors().iter().enumerate() {
        for i in 0..grads.len() {
            let original = probe.tensors_mut()[t][i];
            probe.tensors_mut()[t][i] = original + h;
            let up = loss(&probe, &x, &y);
            probe.tensors_mut()[t][i] = original - h;
            let down = loss(&probe, &x, &y);
            probe.tensors_mut()[t][i] = original;
            let numeric = (up - down) / (2.0 * h);
            let err = (grads[i] - numeric).abs() / grads[i].abs().max(numeric.abs()).max(1e-7);
            worst = worst.max(err);
        }
    }
    println!("{} parameters, worst relative error {worst:.2e}", stack.parameter_count());
}
