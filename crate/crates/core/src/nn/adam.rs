//! Bias-corrected Adam over [`MlpParams`]-shaped gradients.

use crate::nn::mlp::{Gradients, MlpParams};

/// Optimizer state: first and second moment accumulators shaped like the
/// parameters, plus the step counter used for bias correction.
#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Gradients,
    second_moment: Gradients,
    pub t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(params: &MlpParams) -> Self {
        AdamState {
            first_moment: Gradients::zeros_like(params),
            second_moment: Gradients::zeros_like(params),
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One Adam update in place. `grads` must be shaped like `params`.
pub fn adam_step(params: &mut MlpParams, grads: &Gradients, state: &mut AdamState, lr: f64) {
    assert_eq!(
        params.layers.len(),
        grads.layers.len(),
        "gradient shape mismatch"
    );
    state.t += 1;
    let bc1 = 1.0 - state.beta1.powi(state.t as i32);
    let bc2 = 1.0 - state.beta2.powi(state.t as i32);
    let (b1, b2, eps) = (state.beta1, state.beta2, state.epsilon);

    let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / bc1;
        let v_hat = *v / bc2;
        *p -= lr * m_hat / (v_hat.sqrt() + eps);
    };

    for (k, layer) in params.layers.iter_mut().enumerate() {
        let gl = &grads.layers[k];
        assert_eq!(layer.weights.rows(), gl.weights.rows(), "gradient shape mismatch");
        assert_eq!(layer.weights.cols(), gl.weights.cols(), "gradient shape mismatch");
        let ml = &mut state.first_moment.layers[k];
        let vl = &mut state.second_moment.layers[k];
        for i in 0..layer.weights.data().len() {
            let g = gl.weights.data()[i];
            update(
                &mut layer.weights.data_mut()[i],
                g,
                &mut ml.weights.data_mut()[i],
                &mut vl.weights.data_mut()[i],
            );
        }
        for i in 0..layer.bias.len() {
            update(&mut layer.bias[i], gl.bias[i], &mut ml.bias[i], &mut vl.bias[i]);
        }
    }
}
