//! Minimal dense-network kernel: forward pass, exact backpropagation
//! (including gradients with respect to inputs), Adam updates, deterministic
//! initialization, and bit-exact checkpoint persistence.
//!
//! Parameters are immutable during forward/backward; updates mutate under
//! exclusive access. The same parameters can be evaluated from any number of
//! threads concurrently.

mod adam;
mod checkpoint;
mod mlp;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{load_checkpoint, parse_block, save_checkpoint, to_bytes};
pub use mlp::{Activation, ForwardCache, Gradients, LayerGrads, LayerParams, Matrix, MlpParams};
