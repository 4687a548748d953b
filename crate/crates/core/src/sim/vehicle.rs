//! Kinematic bicycle vehicle model with a single signed accelerator axis.

use crate::geom::{wrap_angle, Vec2};
use serde::{Deserialize, Serialize};

/// The shared action contract of every controller: steering and acceleration
/// commands, each in [-1, 1]. Positive steer turns left; negative accel
/// brakes (there is no reverse gear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub steer: f64,
    pub accel: f64,
}

impl Action {
    pub const COAST: Action = Action {
        steer: 0.0,
        accel: 0.0,
    };

    pub fn new(steer: f64, accel: f64) -> Self {
        Action { steer, accel }
    }

    pub fn clamped(self) -> Action {
        Action {
            steer: self.steer.clamp(-1.0, 1.0),
            accel: self.accel.clamp(-1.0, 1.0),
        }
    }
}

/// Pose and longitudinal speed of one vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    pub position: Vec2,
    /// Heading in radians, wrapped to (-pi, pi].
    pub heading: f64,
    /// Longitudinal speed, m/s, never negative.
    pub speed: f64,
}

impl VehicleState {
    pub fn new(position: Vec2, heading: f64, speed: f64) -> Self {
        VehicleState {
            position,
            heading: wrap_angle(heading),
            speed: speed.max(0.0),
        }
    }
}

/// Physical limits and dimensions shared by every vehicle in a world.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleParams {
    /// Distance between axles, meters.
    pub wheelbase: f64,
    /// Front-wheel angle at full steering lock, radians.
    pub max_steer_angle: f64,
    /// Peak acceleration at full throttle, m/s^2.
    pub max_accel: f64,
    /// Peak deceleration at full brake, m/s^2 (positive number).
    pub max_brake: f64,
    /// Linear drag rate, 1/s; at full throttle the vehicle settles at
    /// max_accel / drag_coeff.
    pub drag_coeff: f64,
    /// Hard speed ceiling, m/s.
    pub v_max: f64,
    pub body_length: f64,
    pub body_width: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        VehicleParams {
            wheelbase: 2.5,
            max_steer_angle: 0.5,
            max_accel: 4.0,
            max_brake: 8.0,
            drag_coeff: 0.2,
            v_max: 20.0,
            body_length: 4.0,
            body_width: 2.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("wheelbase", self.wheelbase),
            ("max_steer_angle", self.max_steer_angle),
            ("max_accel", self.max_accel),
            ("max_brake", self.max_brake),
            ("drag_coeff", self.drag_coeff),
            ("v_max", self.v_max),
            ("body_length", self.body_length),
            ("body_width", self.body_width),
        ];
        for (name, value) in fields {
            if !(value > 0.0) {
                return Err(crate::Error::Config(format!(
                    "vehicle {name} must be positive, got {value}"
                )));
            }
        }
        if self.max_steer_angle >= std::f64::consts::FRAC_PI_2 {
            return Err(crate::Error::Config(format!(
                "vehicle max_steer_angle must be below pi/2, got {}",
                self.max_steer_angle
            )));
        }
        Ok(())
    }
}

/// One explicit-Euler step of the kinematic bicycle model.
///
/// All derivatives are evaluated at the incoming state; speed is clamped to
/// [0, v_max] and the heading re-wrapped afterwards.
pub fn step_vehicle(
    state: &VehicleState,
    action: Action,
    dt: f64,
    params: &VehicleParams,
) -> VehicleState {
    debug_assert!(dt > 0.0);
    let action = action.clamped();
    let (sin_h, cos_h) = state.heading.sin_cos();
    let x = state.position.x + state.speed * cos_h * dt;
    let y = state.position.y + state.speed * sin_h * dt;
    let steer_angle = params.max_steer_angle * action.steer;
    let heading = state.heading + state.speed / params.wheelbase * steer_angle.tan() * dt;
    let accel_cmd = if action.accel >= 0.0 {
        params.max_accel * action.accel
    } else {
        params.max_brake * action.accel
    };
    let speed = state.speed + (accel_cmd - params.drag_coeff * state.speed) * dt;
    VehicleState {
        position: Vec2::new(x, y),
        heading: wrap_angle(heading),
        speed: speed.clamp(0.0, params.v_max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params_no_drag() -> VehicleParams {
        VehicleParams {
            drag_coeff: 1e-12,
            ..VehicleParams::default()
        }
    }

    #[test]
    fn coasting_advances_along_heading() {
        let mut p = params_no_drag();
        p.drag_coeff = f64::MIN_POSITIVE; // validate() needs > 0; negligible
        let start = VehicleState::new(Vec2::new(1.0, 2.0), 0.7, 10.0);
        let next = step_vehicle(&start, Action::COAST, 0.1, &p);
        let moved = next.position - start.position;
        assert!((moved.norm() - 1.0).abs() < 1e-9);
        assert!((moved.y.atan2(moved.x) - 0.7).abs() < 1e-12);
        assert!((next.speed - 10.0).abs() < 1e-9);
        assert_eq!(next.heading, start.heading);
    }

    #[test]
    fn throttle_from_rest() {
        let p = VehicleParams::default();
        let start = VehicleState::new(Vec2::ZERO, 0.0, 0.0);
        let next = step_vehicle(&start, Action::new(0.0, 1.0), 0.1, &p);
        assert!((next.speed - 0.4).abs() < 1e-12);
    }

    #[test]
    fn full_lock_turn_rate() {
        let p = VehicleParams::default();
        let start = VehicleState::new(Vec2::ZERO, 0.0, 10.0);
        let next = step_vehicle(&start, Action::new(1.0, 0.0), 0.01, &p);
        let expected = 10.0 / 2.5 * 0.5f64.tan() * 0.01;
        assert!((next.heading - expected).abs() < 1e-12);
    }

    #[test]
    fn braking_never_reverses() {
        let p = VehicleParams::default();
        let slow = VehicleState::new(Vec2::ZERO, 0.0, 0.05);
        let next = step_vehicle(&slow, Action::new(0.0, -1.0), 0.1, &p);
        assert_eq!(next.speed, 0.0);
    }

    proptest! {
        #[test]
        fn speed_stays_in_bounds(
            v0 in 0.0..20.0f64,
            steer in -1.0..1.0f64,
            accel in -1.0..1.0f64,
            steps in 1usize..200,
        ) {
            let p = VehicleParams::default();
            let mut s = VehicleState::new(Vec2::ZERO, 0.0, v0);
            for _ in 0..steps {
                s = step_vehicle(&s, Action::new(steer, accel), 0.02, &p);
                prop_assert!(s.speed >= 0.0 && s.speed <= p.v_max);
                prop_assert!(s.heading > -std::f64::consts::PI);
                prop_assert!(s.heading <= std::f64::consts::PI);
            }
        }

        #[test]
        fn zero_steer_preserves_heading(
            h in -3.0..3.0f64,
            v in 0.0..20.0f64,
            accel in -1.0..1.0f64,
        ) {
            let p = VehicleParams::default();
            let s0 = VehicleState::new(Vec2::ZERO, h, v);
            let s1 = step_vehicle(&s0, Action::new(0.0, accel), 0.02, &p);
            prop_assert_eq!(s0.heading, s1.heading);
        }
    }
}
