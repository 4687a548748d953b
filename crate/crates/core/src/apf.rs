//! Repulsive potential-field controller: inverse-power repulsion from each
//! sensed obstacle, projected into steering (lateral) and acceleration
//! (longitudinal) commands. Stateless.

use crate::error::{Error, Result};
use crate::sensors::ObstacleReading;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Gains and ranges for the repulsive field. Defaults: exponent 1.5,
/// steering gain 20, acceleration gain 10.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApfParams {
    /// Distance exponent of the 1/d^eta repulsion.
    pub eta: f64,
    /// Steering command per unit of lateral force.
    pub k_fx: f64,
    /// Acceleration command per unit of longitudinal force.
    pub k_fy: f64,
    /// Distances below this clamp to it, bounding the singular 1/d^eta.
    pub d_min: f64,
    /// Obstacles at or beyond this distance contribute exactly nothing.
    pub d_cut: f64,
}

impl Default for ApfParams {
    fn default() -> Self {
        ApfParams {
            eta: 1.5,
            k_fx: 20.0,
            k_fy: 10.0,
            d_min: 1.0,
            d_cut: 50.0,
        }
    }
}

impl ApfParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::Config(format!("apf eta must be positive, got {}", self.eta)));
        }
        if !(self.k_fx > 0.0 && self.k_fy > 0.0) {
            return Err(Error::Config("apf gains must be positive".into()));
        }
        if !(self.d_min > 0.0 && self.d_min < self.d_cut) {
            return Err(Error::Config(format!(
                "apf needs 0 < d_min < d_cut, got d_min {}, d_cut {}",
                self.d_min, self.d_cut
            )));
        }
        Ok(())
    }
}

/// Odd-symmetric sine: sin(-x) is forced to be exactly -sin(x) so mirrored
/// obstacle configurations cancel bit-exactly.
fn sin_odd(x: f64) -> f64 {
    if x < 0.0 {
        -((-x).sin())
    } else {
        x.sin()
    }
}

/// Even-symmetric cosine, for the same reason.
fn cos_even(x: f64) -> f64 {
    x.abs().cos()
}

/// Summed repulsive force over all obstacles.
///
/// The angular factors are evaluated through the obstacle's forward bearing
/// b = pi/2 - theta (cos theta = sin b, sin theta = cos b), so a dead-ahead
/// obstacle (theta = pi/2, b = 0) contributes an exactly zero lateral force.
pub fn repulsive_force(obstacles: &[ObstacleReading], params: &ApfParams) -> (f64, f64) {
    let mut fx = 0.0;
    let mut fy = 0.0;
    for obs in obstacles {
        assert!(obs.distance > 0.0, "obstacle distance must be positive");
        if obs.distance >= params.d_cut {
            continue;
        }
        let d = obs.distance.max(params.d_min);
        let magnitude = d.powf(-params.eta);
        let bearing = FRAC_PI_2 - obs.theta;
        fx -= magnitude * sin_odd(bearing); // cos(theta)
        fy -= magnitude * cos_even(bearing); // sin(theta)
    }
    (fx, fy)
}

/// Scale the force into the bounded action box.
pub fn apf_action(force: (f64, f64), params: &ApfParams) -> (f64, f64) {
    (
        (params.k_fx * force.0).clamp(-1.0, 1.0),
        (params.k_fy * force.1).clamp(-1.0, 1.0),
    )
}

/// Convenience: obstacles straight to (steer, accel).
pub fn apf_command(obstacles: &[ObstacleReading], params: &ApfParams) -> (f64, f64) {
    apf_action(repulsive_force(obstacles, params), params)
}
