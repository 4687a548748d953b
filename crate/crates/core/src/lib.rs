//! drivefusion: a deterministic 2D racing sandbox with a hybrid controller.
//!
//! The actuated command is a convex blend of three sub-controllers sharing one
//! action contract (steering and acceleration, each in [-1, 1]):
//!
//! * a learned deterministic policy trained by an off-policy actor-critic loop,
//! * a repulsive potential-field controller driven by opponent rangefinders,
//! * a linear path-tracking controller on heading error and lateral offset.
//!
//! The crate is organized around that split: [`sim`] provides the world,
//! [`sensors`] builds observations and rewards, [`nn`] and [`ddpg`] implement
//! the learned policy, [`apf`] and [`tracking`] the analytic controllers,
//! [`fusion`] the blend, and [`harness`] the CLI-facing experiment runner.
//!
//! Everything is seeded and single-threaded per run: identical configuration
//! and seed produce byte-identical metrics, traces, and checkpoints.

// Parameter guards use `!(x > 0.0)` so NaN fails validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apf;
pub mod ddpg;
pub mod error;
pub mod fusion;
pub mod geom;
pub mod harness;
pub mod nn;
pub mod sensors;
pub mod sim;
pub mod tracking;

pub use error::{Error, Result};
pub use sim::Action;
