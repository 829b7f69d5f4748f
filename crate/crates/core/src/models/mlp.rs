//! Multilayer perceptron regressor trained by mini-batch SGD on MSE.
//!
//! Hidden layers use tanh or ReLU; the output layer is linear. Weights are
//! drawn from `U(-1/√fan_in, 1/√fan_in)` and biases start at zero. The
//! regressor centers and scales the target internally; the network itself
//! ([`Network`]) works on raw values and exposes its loss gradient for
//! verification.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_training, ModelError};
use crate::rng::seeded;
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Tanh,
    Relu,
}

impl Activation {
    fn apply(self, v: f64) -> f64 {
        match self {
            Activation::Tanh => v.tanh(),
            Activation::Relu => v.max(0.0),
        }
    }

    /// Derivative expressed through the activation output `a`.
    fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpParams {
    pub hidden_layers: Vec<usize>,
    pub activation: Activation,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Start the output layer at zero weights.
    pub zero_output_init: bool,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self {
            hidden_layers: vec![64],
            activation: Activation::Tanh,
            learning_rate: 0.01,
            epochs: 500,
            batch_size: 32,
            seed: 0,
            zero_output_init: false,
        }
    }
}

impl MlpParams {
    fn validate(&self) -> Result<(), ModelError> {
        if self.hidden_layers.is_empty() {
            return Err(ModelError::InvalidParams(
                "MLP needs at least one hidden layer".into(),
            ));
        }
        if self.hidden_layers.contains(&0) {
            return Err(ModelError::InvalidParams("hidden layer widths must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(ModelError::InvalidParams("learning_rate must be > 0".into()));
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(ModelError::InvalidParams("epochs and batch_size must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Layer {
    inputs: usize,
    outputs: usize,
    /// Input-major `inputs × outputs`: `weights[i * outputs + o]`.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

/// Fully connected network with a single linear output.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
    activation: Activation,
}

impl Network {
    /// Seeded initialization for `inputs → hidden… → 1`.
    pub fn new(inputs: usize, hidden: &[usize], activation: Activation, seed: u64, zero_output: bool) -> Self {
        let mut rng = seeded(seed);
        let mut widths = vec![inputs];
        widths.extend_from_slice(hidden);
        widths.push(1);
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(li, w)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
                let weights = (0..fan_in * fan_out)
                    .map(|_| {
                        let u: f64 = rng.random();
                        if zero_output && li == last {
                            0.0
                        } else {
                            bound * (2.0 * u - 1.0)
                        }
                    })
                    .collect();
                Layer {
                    inputs: fan_in,
                    outputs: fan_out,
                    weights,
                    biases: vec![0.0; fan_out],
                }
            })
            .collect();
        Self { layers, activation }
    }

    pub fn inputs(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    /// Flattened parameters: per layer, weights (input-major) then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    /// Inverse of [`Network::parameters`].
    ///
    /// # Panics
    /// If `params.len() != self.parameter_count()`.
    pub fn set_parameters(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.parameter_count());
        let mut k = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&params[k..k + nw]);
            k += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&params[k..k + nb]);
            k += nb;
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut acts = Vec::new();
        self.forward(x, &mut acts)
    }

    /// Forward pass storing every layer's post-activation output.
    fn forward(&self, x: &[f64], acts: &mut Vec<Vec<f64>>) -> f64 {
        acts.resize_with(self.layers.len(), Vec::new);
        let last = self.layers.len() - 1;
        for (li, l) in self.layers.iter().enumerate() {
            let (prev, rest) = acts.split_at_mut(li);
            let input: &[f64] = if li == 0 { x } else { &prev[li - 1] };
            let out = &mut rest[0];
            out.clear();
            if l.outputs == 1 {
                out.push(l.biases[0] + dot(&l.weights, input));
            } else {
                out.extend_from_slice(&l.biases);
                for (xi, w) in input.iter().zip(l.weights.chunks_exact(l.outputs)) {
                    for (z, wv) in out.iter_mut().zip(w) {
                        *z += xi * wv;
                    }
                }
            }
            if li != last {
                out.iter_mut().for_each(|z| *z = self.activation.apply(*z));
            }
        }
        acts[last][0]
    }

    /// Mean squared error over the rows and its gradient with respect to
    /// [`Network::parameters`].
    pub fn loss_and_gradient(&self, x: &Matrix, y: &[f64]) -> (f64, Vec<f64>) {
        let mut grads: Vec<Layer> = self
            .layers
            .iter()
            .map(|l| Layer {
                inputs: l.inputs,
                outputs: l.outputs,
                weights: vec![0.0; l.weights.len()],
                biases: vec![0.0; l.biases.len()],
            })
            .collect();
        let idx: Vec<usize> = (0..y.len()).collect();
        let mut scratch = Scratch::default();
        let loss = self.accumulate(x, y, &idx, &mut grads, &mut scratch);
        let scale = 1.0 / y.len() as f64;
        let mut flat = Vec::with_capacity(self.parameter_count());
        for g in &grads {
            flat.extend(g.weights.iter().map(|v| v * scale));
            flat.extend(g.biases.iter().map(|v| v * scale));
        }
        (loss * scale, flat)
    }

    /// Adds the summed squared-error gradient of rows `idx` into `grads`
    /// and returns the summed squared error.
    fn accumulate(&self, x: &Matrix, y: &[f64], idx: &[usize], grads: &mut [Layer], s: &mut Scratch) -> f64 {
        let mut sse = 0.0;
        let last = self.layers.len() - 1;
        for &r in idx {
            let xr = x.row(r);
            let pred = self.forward(xr, &mut s.acts);
            let err = pred - y[r];
            sse += err * err;
            // delta = dLoss/dz for the current layer.
            s.delta.clear();
            s.delta.push(2.0 * err);
            for li in (0..=last).rev() {
                let l = &self.layers[li];
                let input: &[f64] = if li == 0 { xr } else { &s.acts[li - 1] };
                let g = &mut grads[li];
                for (b, d) in g.biases.iter_mut().zip(&s.delta) {
                    *b += d;
                }
                for (a, gw) in input.iter().zip(g.weights.chunks_exact_mut(l.outputs)) {
                    for (w, d) in gw.iter_mut().zip(&s.delta) {
                        *w += a * d;
                    }
                }
                if li > 0 {
                    s.next.clear();
                    s.next.extend(
                        l.weights
                            .chunks_exact(l.outputs)
                            .zip(&s.acts[li - 1])
                            .map(|(w, a)| dot(w, &s.delta) * self.activation.derivative_from_output(*a)),
                    );
                    std::mem::swap(&mut s.delta, &mut s.next);
                }
            }
        }
        sse
    }

    fn mse(&self, x: &Matrix, y: &[f64]) -> f64 {
        let mut acts = Vec::new();
        x.rows_iter()
            .zip(y)
            .map(|(r, t)| (self.forward(r, &mut acts) - t).powi(2))
            .sum::<f64>()
            / y.len() as f64
    }
}

/// Dot product with four partial sums.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[derive(Default)]
struct Scratch {
    acts: Vec<Vec<f64>>,
    delta: Vec<f64>,
    next: Vec<f64>,
}

/// Trained MLP regressor with its loss history.
#[derive(Debug, Clone)]
pub struct MlpModel {
    network: Network,
    y_mean: f64,
    y_scale: f64,
    /// Full-data MSE (scaled target units) before training.
    pub initial_loss: f64,
    /// Mean mini-batch MSE of each epoch.
    pub epoch_losses: Vec<f64>,
    /// Full-data MSE after the final epoch.
    pub final_loss: f64,
}

impl MlpModel {
    pub fn feature_count(&self) -> usize {
        self.network.inputs()
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn predict_row(&self, x: &[f64]) -> f64 {
        self.y_mean + self.y_scale * self.network.predict(x)
    }
}

pub fn mlp_fit(x: &Matrix, y: &[f64], params: &MlpParams) -> Result<MlpModel, ModelError> {
    check_training(x, y)?;
    params.validate()?;
    let n = y.len();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / n as f64;
    let y_scale = if var > 0.0 { var.sqrt() } else { 1.0 };
    let ys: Vec<f64> = y.iter().map(|v| (v - y_mean) / y_scale).collect();

    let mut net = Network::new(
        x.ncols(),
        &params.hidden_layers,
        params.activation,
        params.seed,
        params.zero_output_init,
    );
    let initial_loss = net.mse(x, &ys);
    let mut rng = seeded(crate::rng::derive_seed(params.seed, 1));
    let mut order: Vec<usize> = (0..n).collect();
    let mut grads: Vec<Layer> = net
        .layers
        .iter()
        .map(|l| Layer {
            inputs: l.inputs,
            outputs: l.outputs,
            weights: vec![0.0; l.weights.len()],
            biases: vec![0.0; l.biases.len()],
        })
        .collect();
    let mut scratch = Scratch::default();
    let mut epoch_losses = Vec::with_capacity(params.epochs);
    for epoch in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut sse = 0.0;
        for batch in order.chunks(params.batch_size) {
            for g in grads.iter_mut() {
                g.weights.iter_mut().for_each(|v| *v = 0.0);
                g.biases.iter_mut().for_each(|v| *v = 0.0);
            }
            sse += net.accumulate(x, &ys, batch, &mut grads, &mut scratch);
            let step = params.learning_rate / batch.len() as f64;
            for (l, g) in net.layers.iter_mut().zip(&grads) {
                for (w, gw) in l.weights.iter_mut().zip(&g.weights) {
                    *w -= step * gw;
                }
                for (b, gb) in l.biases.iter_mut().zip(&g.biases) {
                    *b -= step * gb;
                }
            }
        }
        let loss = sse / n as f64;
        if !loss.is_finite() {
            return Err(ModelError::Divergence { epoch: epoch + 1 });
        }
        epoch_losses.push(loss);
    }
    let final_loss = net.mse(x, &ys);
    if !final_loss.is_finite() {
        return Err(ModelError::Divergence { epoch: params.epochs });
    }
    Ok(MlpModel {
        network: net,
        y_mean,
        y_scale,
        initial_loss,
        epoch_losses,
        final_loss,
    })
}
