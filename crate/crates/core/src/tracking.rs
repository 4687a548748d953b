//! Path-tracking controller: linear feedback on heading error and normalized
//! lateral offset for steering, plus a thresholded braking rule that slows
//! the vehicle when the steering command grows large. Stateless.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Feedback gains. `eta1` acts per radian of heading error, `eta2` per unit
/// of normalized track position; braking engages once |steer| exceeds
/// `steer_threshold`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingParams {
    pub eta1: f64,
    pub eta2: f64,
    pub steer_threshold: f64,
    pub brake_gain: f64,
}

impl Default for TrackingParams {
    fn default() -> Self {
        TrackingParams {
            eta1: 3.18,
            eta2: 2.0,
            steer_threshold: 0.4,
            brake_gain: 2.0,
        }
    }
}

impl TrackingParams {
    pub fn validate(&self) -> Result<()> {
        if self.eta1 < 0.0 || self.eta2 < 0.0 {
            return Err(Error::Config("tracking gains must be nonnegative".into()));
        }
        if !(self.steer_threshold > 0.0 && self.steer_threshold < 1.0) {
            return Err(Error::Config(format!(
                "steer_threshold must be in (0, 1), got {}",
                self.steer_threshold
            )));
        }
        if !(self.brake_gain > 0.0) {
            return Err(Error::Config(format!(
                "brake_gain must be positive, got {}",
                self.brake_gain
            )));
        }
        Ok(())
    }
}

/// Steering command toward the centerline. Negative feedback: heading left
/// of the tangent or sitting left of center both steer right. Clamped to
/// the action box before the braking rule sees it.
pub fn tracking_steer(heading_error: f64, track_pos: f64, params: &TrackingParams) -> f64 {
    (-(params.eta1 * heading_error + params.eta2 * track_pos)).clamp(-1.0, 1.0)
}

/// Speed-reduction rule: brake proportionally to how far |steer| sits above
/// the threshold. Never positive.
pub fn tracking_accel(steer_cmd: f64, params: &TrackingParams) -> f64 {
    (-params.brake_gain * (steer_cmd.abs() - params.steer_threshold).max(0.0)).clamp(-1.0, 0.0)
}
