//! Exploration noise for the two-dimensional action space.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Noise process choice. Ornstein-Uhlenbeck is the default; independent
/// Gaussian noise is available behind configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    OrnsteinUhlenbeck { theta: f64, sigma: f64 },
    Gaussian { sigma: f64 },
}

impl Default for NoiseKind {
    fn default() -> Self {
        NoiseKind::OrnsteinUhlenbeck {
            theta: 0.15,
            sigma: 0.2,
        }
    }
}

/// Stateful per-dimension noise; reset at every episode start.
#[derive(Debug, Clone)]
pub struct ExplorationNoise {
    kind: NoiseKind,
    state: [f64; 2],
}

/// One standard normal draw via Box-Muller; deterministic given the rng.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

impl ExplorationNoise {
    pub fn new(kind: NoiseKind) -> Self {
        ExplorationNoise {
            kind,
            state: [0.0; 2],
        }
    }

    pub fn reset(&mut self) {
        self.state = [0.0; 2];
    }

    pub fn sample<R: Rng>(&mut self, rng: &mut R) -> [f64; 2] {
        match self.kind {
            NoiseKind::OrnsteinUhlenbeck { theta, sigma } => {
                for x in &mut self.state {
                    *x += theta * -*x + sigma * standard_normal(rng);
                }
                self.state
            }
            NoiseKind::Gaussian { sigma } => {
                [sigma * standard_normal(rng), sigma * standard_normal(rng)]
            }
        }
    }
}
