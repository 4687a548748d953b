//! Dense multilayer perceptron: forward pass and exact reverse-mode
//! gradients with respect to parameters and inputs, in plain f64 loops.
//! Everything is deterministic; no parallelism, no hidden state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Row-major dense matrix, rows = outputs, cols = inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Matrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// out = self * x
    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (row, o) in self.data.chunks_exact(self.cols).zip(out.iter_mut()) {
            let mut acc = 0.0;
            for (w, xv) in row.iter().zip(x) {
                acc += w * xv;
            }
            *o = acc;
        }
    }

    /// out = self^T * g
    fn matvec_transpose(&self, g: &[f64], out: &mut [f64]) {
        debug_assert_eq!(g.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.fill(0.0);
        for (row, gv) in self.data.chunks_exact(self.cols).zip(g) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += w * gv;
            }
        }
    }

    /// self += g * x^T
    fn add_outer(&mut self, g: &[f64], x: &[f64]) {
        debug_assert_eq!(g.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        for (row, gv) in self.data.chunks_exact_mut(self.cols).zip(g) {
            for (w, xv) in row.iter_mut().zip(x) {
                *w += gv * xv;
            }
        }
    }
}

/// Per-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Tanh,
    Linear,
}

impl Activation {
    pub(crate) fn code(self) -> u8 {
        match self {
            Activation::Relu => 0,
            Activation::Tanh => 1,
            Activation::Linear => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Activation> {
        match code {
            0 => Some(Activation::Relu),
            1 => Some(Activation::Tanh),
            2 => Some(Activation::Linear),
            _ => None,
        }
    }

    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Linear => z,
        }
    }

    /// Derivative at pre-activation `z`. The relu subgradient at exactly 0
    /// is taken as 0.
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = z.tanh();
                1.0 - t * t
            }
            Activation::Linear => 1.0,
        }
    }
}

/// One affine layer plus its activation.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl LayerParams {
    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }
}

/// Full network parameters: an ordered stack of layers with compatible dims.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub layers: Vec<LayerParams>,
}

/// Intermediate values retained by [`MlpParams::forward`] for the backward
/// pass: the input of every layer plus each layer's pre-activations.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// inputs[k] is the input to layer k; a final entry holds the output.
    inputs: Vec<Vec<f64>>,
    preacts: Vec<Vec<f64>>,
}

/// Parameter-shaped gradient record: one matrix + bias vector per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrads>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrads {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Gradients {
    pub fn zeros_like(params: &MlpParams) -> Self {
        Gradients {
            layers: params
                .layers
                .iter()
                .map(|l| LayerGrads {
                    weights: Matrix::zeros(l.out_dim(), l.in_dim()),
                    bias: vec![0.0; l.out_dim()],
                })
                .collect(),
        }
    }

    /// self += other * scale
    pub fn add_scaled(&mut self, other: &Gradients, scale: f64) {
        assert_eq!(self.layers.len(), other.layers.len(), "gradient shape mismatch");
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            for (x, y) in a.weights.data_mut().iter_mut().zip(b.weights.data()) {
                *x += y * scale;
            }
            for (x, y) in a.bias.iter_mut().zip(&b.bias) {
                *x += y * scale;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for l in &mut self.layers {
            for x in l.weights.data_mut() {
                *x *= s;
            }
            for x in &mut l.bias {
                *x *= s;
            }
        }
    }
}

impl MlpParams {
    /// Deterministic initialization: weights uniform in
    /// [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
    pub fn init(dims: &[usize], activations: &[Activation], seed: u64) -> Self {
        assert!(dims.len() >= 2, "need at least input and output dims");
        assert_eq!(
            activations.len(),
            dims.len() - 1,
            "one activation per layer"
        );
        assert!(dims.iter().all(|&d| d > 0), "zero-width layer");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = dims
            .windows(2)
            .zip(activations)
            .map(|(w, &activation)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = 1.0 / (fan_in as f64).sqrt();
                let mut weights = Matrix::zeros(fan_out, fan_in);
                for v in weights.data_mut() {
                    *v = rng.gen_range(-bound..=bound);
                }
                LayerParams {
                    weights,
                    bias: vec![0.0; fan_out],
                    activation,
                }
            })
            .collect();
        MlpParams { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().expect("empty network").in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("empty network").out_dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.input_dim()];
        d.extend(self.layers.iter().map(|l| l.out_dim()));
        d
    }

    /// Affine + activation per layer, retaining the cache for `backward`.
    pub fn forward(&self, input: &[f64]) -> (Vec<f64>, ForwardCache) {
        assert_eq!(
            input.len(),
            self.input_dim(),
            "input length does not match first layer"
        );
        let mut inputs = Vec::with_capacity(self.layers.len() + 1);
        let mut preacts = Vec::with_capacity(self.layers.len());
        inputs.push(input.to_vec());
        for layer in &self.layers {
            let x = inputs.last().unwrap();
            let mut z = vec![0.0; layer.out_dim()];
            layer.weights.matvec(x, &mut z);
            for (zv, b) in z.iter_mut().zip(&layer.bias) {
                *zv += b;
            }
            let y = z.iter().map(|&v| layer.activation.apply(v)).collect();
            preacts.push(z);
            inputs.push(y);
        }
        let output = inputs.last().unwrap().clone();
        (output, ForwardCache { inputs, preacts })
    }

    /// Forward pass output only.
    pub fn output(&self, input: &[f64]) -> Vec<f64> {
        self.forward(input).0
    }

    /// Exact reverse-mode gradients of `output . output_grad` with respect
    /// to every parameter and to the input. The cache must come from a
    /// matching `forward` call on these parameters.
    pub fn backward(&self, cache: &ForwardCache, output_grad: &[f64]) -> (Gradients, Vec<f64>) {
        assert_eq!(
            cache.inputs.len(),
            self.layers.len() + 1,
            "cache does not match network depth"
        );
        assert_eq!(
            output_grad.len(),
            self.output_dim(),
            "output_grad length does not match network output"
        );
        for (k, layer) in self.layers.iter().enumerate() {
            assert_eq!(
                cache.inputs[k].len(),
                layer.in_dim(),
                "cache does not match layer {k} input width"
            );
            assert_eq!(
                cache.preacts[k].len(),
                layer.out_dim(),
                "cache does not match layer {k} output width"
            );
        }

        let mut grads = Gradients::zeros_like(self);
        let mut g = output_grad.to_vec();
        for (k, layer) in self.layers.iter().enumerate().rev() {
            let z = &cache.preacts[k];
            let x = &cache.inputs[k];
            let dz: Vec<f64> = g
                .iter()
                .zip(z)
                .map(|(&gv, &zv)| gv * layer.activation.derivative(zv))
                .collect();
            grads.layers[k].weights.add_outer(&dz, x);
            grads.layers[k].bias.copy_from_slice(&dz);
            let mut next_g = vec![0.0; layer.in_dim()];
            layer.weights.matvec_transpose(&dz, &mut next_g);
            g = next_g;
        }
        (grads, g)
    }
}
