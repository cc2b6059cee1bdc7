//! Stacked LSTM with a per-timestep linear head, scalar in and scalar out.
//!
//! Gate blocks are laid out `[input, forget, candidate, output]` along the
//! first axis of every weight matrix and bias vector. Each cell computes
//!
//! ```text
//! i, f, o = logistic(W x + U h + b)   g = tanh(W x + U h + b)
//! c = f * c + i * g                   h = o * tanh(c)
//! ```
//!
//! starting from zero hidden and cell state, and the head maps the top
//! layer's `h` to one output per timestep.

use ndarray::{s, Array1, Array2, ArrayView1, Axis};

use crate::rng::SplitMix64;

pub const GATES: usize = 4;
const INPUT: usize = 0;
const FORGET: usize = 1;
const CANDIDATE: usize = 2;
const OUTPUT: usize = 3;

/// Added to the forget-gate bias at initialization.
pub const FORGET_BIAS: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LstmLayer {
    pub input_dim: usize,
    pub units: usize,
    /// `4 * units` x `input_dim`
    pub w_input: Array2<f64>,
    /// `4 * units` x `units`
    pub w_recurrent: Array2<f64>,
    /// `4 * units`
    pub bias: Array1<f64>,
}

impl LstmLayer {
    pub fn zeros(input_dim: usize, units: usize) -> Self {
        Self {
            input_dim,
            units,
            w_input: Array2::zeros((GATES * units, input_dim)),
            w_recurrent: Array2::zeros((GATES * units, units)),
            bias: Array1::zeros(GATES * units),
        }
    }

    /// Glorot-uniform over the joint `[input; recurrent]` kernel, the way
    /// common LSTM cells store it: `fan_in = input_dim + units`,
    /// `fan_out = 4 * units`.
    pub fn glorot_limit(&self) -> f64 {
        (6.0 / ((self.input_dim + self.units) + GATES * self.units) as f64).sqrt()
    }

    pub fn forget_bias(&self) -> ArrayView1<'_, f64> {
        self.bias.slice(s![FORGET * self.units..(FORGET + 1) * self.units])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstmStack {
    pub layers: Vec<LstmLayer>,
    /// `units`
    pub head_weight: Array1<f64>,
    /// length 1
    pub head_bias: Array1<f64>,
}

/// Activations kept from a forward pass for backpropagation.
#[derive(Clone, Debug)]
pub struct LayerCache {
    /// `T` x `input_dim`
    pub input: Array2<f64>,
    /// Post-activation gates, `T` x `4 * units`.
    pub gates: Array2<f64>,
    /// `T` x `units`
    pub cell: Array2<f64>,
    /// `tanh(cell)`, `T` x `units`
    pub cell_tanh: Array2<f64>,
    /// `T` x `units`
    pub hidden: Array2<f64>,
}

#[derive(Clone, Debug)]
pub struct ForwardCache {
    pub layers: Vec<LayerCache>,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LstmStack {
    /// All-zero parameters; also the shape used for gradients and optimizer moments.
    pub fn zeros(layers: usize, units: usize) -> Self {
        assert!(layers >= 1 && units >= 1);
        Self {
            layers: (0..layers)
                .map(|l| LstmLayer::zeros(if l == 0 { 1 } else { units }, units))
                .collect(),
            head_weight: Array1::zeros(units),
            head_bias: Array1::zeros(1),
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.layers.len(), self.units())
    }

    pub fn units(&self) -> usize {
        self.head_weight.len()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Glorot-uniform weights drawn from `seed`, zero biases except the
    /// forget-gate block, which starts at [`FORGET_BIAS`].
    pub fn init(layers: usize, units: usize, seed: u64) -> Self {
        let mut stack = Self::zeros(layers, units);
        let mut rng = SplitMix64::new(seed);
        for layer in &mut stack.layers {
            let limit = layer.glorot_limit();
            layer
                .w_input
                .iter_mut()
                .chain(layer.w_recurrent.iter_mut())
                .for_each(|w| *w = rng.uniform(-limit, limit));
            layer
                .bias
                .slice_mut(s![FORGET * units..(FORGET + 1) * units])
                .fill(FORGET_BIAS);
        }
        let limit = (6.0 / (units + 1) as f64).sqrt();
        stack
            .head_weight
            .iter_mut()
            .for_each(|w| *w = rng.uniform(-limit, limit));
        stack
    }

    /// Parameter tensors in a fixed order with stable names.
    pub fn named_tensors(&self) -> Vec<(String, Vec<usize>, &[f64])> {
        let mut out = Vec::with_capacity(3 * self.layers.len() + 2);
        for (l, layer) in self.layers.iter().enumerate() {
            out.push((
                format!("lstm.{l}.w_input"),
                layer.w_input.shape().to_vec(),
                layer.w_input.as_slice().expect("standard layout"),
            ));
            out.push((
                format!("lstm.{l}.w_recurrent"),
                layer.w_recurrent.shape().to_vec(),
                layer.w_recurrent.as_slice().expect("standard layout"),
            ));
            out.push((
                format!("lstm.{l}.bias"),
                layer.bias.shape().to_vec(),
                layer.bias.as_slice().expect("standard layout"),
            ));
        }
        out.push((
            "head.weight".to_owned(),
            self.head_weight.shape().to_vec(),
            self.head_weight.as_slice().expect("standard layout"),
        ));
        out.push((
            "head.bias".to_owned(),
            self.head_bias.shape().to_vec(),
            self.head_bias.as_slice().expect("standard layout"),
        ));
        out
    }

    /// Mutable views of the same tensors, same order as [`named_tensors`](Self::named_tensors).
    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::with_capacity(3 * self.layers.len() + 2);
        for layer in &mut self.layers {
            out.push(layer.w_input.as_slice_mut().expect("standard layout"));
            out.push(layer.w_recurrent.as_slice_mut().expect("standard layout"));
            out.push(layer.bias.as_slice_mut().expect("standard layout"));
        }
        out.push(self.head_weight.as_slice_mut().expect("standard layout"));
        out.push(self.head_bias.as_slice_mut().expect("standard layout"));
        out
    }

    pub fn tensors(&self) -> Vec<&[f64]> {
        self.named_tensors().into_iter().map(|(_, _, t)| t).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// `self += other`, elementwise.
    pub fn add_assign(&mut self, other: &LstmStack) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|x| *x *= factor);
        }
    }

    pub fn predict(&self, input: &[f64]) -> Vec<f64> {
        self.forward(input).0
    }

    /// Runs the stack over one sequence from zero initial state.
    pub fn forward(&self, input: &[f64]) -> (Vec<f64>, ForwardCache) {
        let steps = input.len();
        let mut x = Array2::from_shape_vec((steps, 1), input.to_vec()).expect("column");
        let mut caches = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let cache = layer_forward(layer, x);
            x = cache.hidden.clone();
            caches.push(cache);
        }
        let top = &caches.last().expect("at least one layer").hidden;
        let out = top.dot(&self.head_weight) + self.head_bias[0];
        (out.to_vec(), ForwardCache { layers: caches })
    }

    /// Exact gradients of `sum_t output_grad[t] * output[t]` with respect to
    /// every parameter, by backpropagation through the whole sequence.
    pub fn backward(&self, cache: &ForwardCache, output_grad: &[f64]) -> LstmStack {
        let mut grads = self.zeros_like();
        let dy = ArrayView1::from(output_grad);
        let top = &cache.layers.last().expect("at least one layer").hidden;
        grads.head_weight = top.t().dot(&dy);
        grads.head_bias[0] = dy.sum();

        // dL/dh of the top layer from the head: outer product dy * w
        let mut upstream = dy
            .insert_axis(Axis(1))
            .dot(&self.head_weight.view().insert_axis(Axis(0)));
        for (l, (layer, lc)) in self.layers.iter().zip(&cache.layers).enumerate().rev() {
            let g = &mut grads.layers[l];
            upstream = layer_backward(layer, lc, &upstream, g, l > 0);
        }
        grads
    }
}

fn layer_forward(layer: &LstmLayer, input: Array2<f64>) -> LayerCache {
    let steps = input.nrows();
    let u = layer.units;
    // input contributions for all timesteps at once
    let mut pre = input.dot(&layer.w_input.t());
    pre += &layer.bias;

    let mut gates = Array2::zeros((steps, GATES * u));
    let mut cell = Array2::zeros((steps, u));
    let mut cell_tanh = Array2::zeros((steps, u));
    let mut hidden = Array2::zeros((steps, u));
    let mut h_prev = vec![0.0; u];
    let mut c_prev = vec![0.0; u];
    let w_rec = layer.w_recurrent.as_slice().expect("standard layout");

    for t in 0..steps {
        let mut z = pre.row(t).to_vec();
        for (r, zr) in z.iter_mut().enumerate() {
            *zr += dot(&w_rec[r * u..(r + 1) * u], &h_prev);
        }
        let mut gate_row = gates.row_mut(t);
        for k in 0..u {
            let i = logistic(z[INPUT * u + k]);
            let f = logistic(z[FORGET * u + k]);
            let g = z[CANDIDATE * u + k].tanh();
            let o = logistic(z[OUTPUT * u + k]);
            gate_row[INPUT * u + k] = i;
            gate_row[FORGET * u + k] = f;
            gate_row[CANDIDATE * u + k] = g;
            gate_row[OUTPUT * u + k] = o;
            let c = f * c_prev[k] + i * g;
            let tc = c.tanh();
            cell[[t, k]] = c;
            cell_tanh[[t, k]] = tc;
            hidden[[t, k]] = o * tc;
            c_prev[k] = c;
            h_prev[k] = o * tc;
        }
    }
    LayerCache {
        input,
        gates,
        cell,
        cell_tanh,
        hidden,
    }
}

/// Accumulates this layer's gradients into `grads` and returns dL/d(input).
fn layer_backward(
    layer: &LstmLayer,
    cache: &LayerCache,
    upstream: &Array2<f64>,
    grads: &mut LstmLayer,
    need_input_grad: bool,
) -> Array2<f64> {
    let steps = cache.hidden.nrows();
    let u = layer.units;
    let w_rec = layer.w_recurrent.as_slice().expect("standard layout");
    let mut dz_all = Array2::<f64>::zeros((steps, GATES * u));
    let mut dh_next = vec![0.0; u];
    let mut dc_next = vec![0.0; u];

    for t in (0..steps).rev() {
        let gates = cache.gates.row(t);
        let mut dz = dz_all.row_mut(t);
        for k in 0..u {
            let i = gates[INPUT * u + k];
            let f = gates[FORGET * u + k];
            let g = gates[CANDIDATE * u + k];
            let o = gates[OUTPUT * u + k];
            let tc = cache.cell_tanh[[t, k]];
            let c_prev = if t > 0 { cache.cell[[t - 1, k]] } else { 0.0 };

            let dh = upstream[[t, k]] + dh_next[k];
            let d_o = dh * tc;
            let dc = dh * o * (1.0 - tc * tc) + dc_next[k];
            dc_next[k] = dc * f;

            dz[INPUT * u + k] = dc * g * i * (1.0 - i);
            dz[FORGET * u + k] = dc * c_prev * f * (1.0 - f);
            dz[CANDIDATE * u + k] = dc * i * (1.0 - g * g);
            dz[OUTPUT * u + k] = d_o * o * (1.0 - o);
        }
        // dh_{t-1} = U^T dz
        dh_next.iter_mut().for_each(|v| *v = 0.0);
        for (r, &dzr) in dz.iter().enumerate() {
            if dzr != 0.0 {
                axpy(dzr, &w_rec[r * u..(r + 1) * u], &mut dh_next);
            }
        }
    }

    grads.w_input += &dz_all.t().dot(&cache.input);
    if steps > 1 {
        let dz_later = dz_all.slice(s![1.., ..]);
        let h_earlier = cache.hidden.slice(s![..steps - 1, ..]);
        grads.w_recurrent += &dz_later.t().dot(&h_earlier);
    }
    grads.bias += &dz_all.sum_axis(Axis(0));

    if need_input_grad {
        dz_all.dot(&layer.w_input)
    } else {
        Array2::zeros((0, 0))
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators so the compiler can vectorize
    let mut acc = [0.0; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for j in 0..4 {
            acc[j] += a[4 * c + j] * b[4 * c + j];
        }
    }
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for j in 4 * chunks..a.len() {
        sum += a[j] * b[j];
    }
    sum
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = LstmStack::init(2, 8, 3);
        assert_eq!(a, LstmStack::init(2, 8, 3));
        assert_ne!(a, LstmStack::init(2, 8, 4));
        for layer in &a.layers {
            let limit = layer.glorot_limit();
            assert!(layer.w_input.iter().chain(layer.w_recurrent.iter()).all(|w| w.abs() <= limit));
            assert!(layer.forget_bias().iter().all(|&b| b == 1.0));
            let others = layer.bias.iter().enumerate().filter(|(i, _)| i / 8 != FORGET);
            assert!(others.map(|(_, b)| b).all(|&b| b == 0.0));
        }
        assert_eq!(a.layers[0].input_dim, 1);
        assert_eq!(a.layers[1].input_dim, 8);
    }

    #[test]
    fn zero_parameters_predict_zero() {
        let stack = LstmStack::zeros(2, 5);
        let y = stack.predict(&[0.3, -1.0, 0.9, 0.1]);
        assert_eq!(y, vec![0.0; 4]);
    }

    #[test]
    fn single_cell_matches_scalar_equations() {
        let mut stack = LstmStack::zeros(1, 1);
        let layer = &mut stack.layers[0];
        layer.w_input.fill(0.5);
        layer.w_recurrent.fill(0.5);
        layer.bias[FORGET] = 1.0;
        stack.head_weight[0] = 1.0;
        let (y, cache) = stack.forward(&[1.0]);

        let sig = |x: f64| 1.0 / (1.0 + (-x).exp());
        let i = sig(0.5);
        let f = sig(1.5);
        let g = 0.5f64.tanh();
        let o = sig(0.5);
        let c = f * 0.0 + i * g;
        let h = o * c.tanh();
        assert!((c - 0.28765).abs() < 1e-5);
        assert!((h - 0.17427).abs() < 1e-5);
        let lc = &cache.layers[0];
        assert!((lc.gates[[0, FORGET]] - f).abs() < 1e-15);
        assert!((lc.cell[[0, 0]] - c).abs() < 1e-15);
        assert!((lc.hidden[[0, 0]] - h).abs() < 1e-15);
        assert!((y[0] - h).abs() < 1e-15);
    }

    #[test]
    fn zero_output_gradient_gives_zero_gradients() {
        let stack = LstmStack::init(2, 4, 1);
        let (_, cache) = stack.forward(&[0.1, 0.5, -0.2]);
        let g = stack.backward(&cache, &[0.0; 3]);
        assert!(g.tensors().iter().all(|t| t.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..13).map(|i| i as f64 * 0.3).collect();
        let b: Vec<f64> = (0..13).map(|i| 1.0 - i as f64 * 0.1).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }
}
