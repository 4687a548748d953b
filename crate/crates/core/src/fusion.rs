//! Convex blending of the three sub-controllers into the actuated action,
//! and the top-level hybrid step that wires sensing, the sub-controllers,
//! and the blend together.

use crate::apf::{apf_action, repulsive_force, ApfParams};
use crate::ddpg::Policy;
use crate::error::{Error, Result};
use crate::sensors::{extract_obstacles, Observation};
use crate::sim::Action;
use crate::tracking::{tracking_accel, tracking_steer, TrackingParams};

/// Nonnegative weights over (policy, potential field, path tracking),
/// summing to 1. Constructed weights are renormalized so the convex-sum
/// guarantee holds without clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionWeights {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl FusionWeights {
    /// Validates nonnegativity and a unit sum (tolerance 1e-9), then stores
    /// the exactly renormalized triple.
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 || lambda < 0.0 {
            return Err(Error::Config(format!(
                "fusion weights must be nonnegative, got ({alpha}, {beta}, {lambda})"
            )));
        }
        let sum = alpha + beta + lambda;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "fusion weights must sum to 1, got {sum}"
            )));
        }
        let alpha = alpha / sum;
        let beta = beta / sum;
        Ok(FusionWeights {
            alpha,
            beta,
            lambda: 1.0 - alpha - beta,
        })
    }

    pub const fn policy_only() -> Self {
        FusionWeights {
            alpha: 1.0,
            beta: 0.0,
            lambda: 0.0,
        }
    }

    pub const fn apf_only() -> Self {
        FusionWeights {
            alpha: 0.0,
            beta: 1.0,
            lambda: 0.0,
        }
    }

    pub const fn tracking_only() -> Self {
        FusionWeights {
            alpha: 0.0,
            beta: 0.0,
            lambda: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Default for FusionWeights {
    /// The shipped operating point: 0.4 policy, 0.3 potential field,
    /// 0.3 path tracking.
    fn default() -> Self {
        FusionWeights::new(0.4, 0.3, 0.3).expect("default weights are valid")
    }
}

/// Every sub-command plus the blended result, for tracing. Suffixes follow
/// the controller split: `_l` learned policy, `_f` potential field,
/// `_p` path tracking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerBreakdown {
    pub delta_l: f64,
    pub tau_l: f64,
    pub delta_f: f64,
    pub tau_f: f64,
    pub delta_p: f64,
    pub tau_p: f64,
    pub delta: f64,
    pub tau: f64,
}

impl ControllerBreakdown {
    pub fn fused(&self) -> Action {
        Action::new(self.delta, self.tau)
    }
}

/// Weighted combination of the three sub-actions. All inputs must already
/// be inside the action box; convexity then keeps the output inside it
/// without clamping.
pub fn fuse(policy: Action, apf: Action, tracking: Action, w: &FusionWeights) -> Action {
    debug_assert!(policy.steer.abs() <= 1.0 && policy.accel.abs() <= 1.0);
    debug_assert!(apf.steer.abs() <= 1.0 && apf.accel.abs() <= 1.0);
    debug_assert!(tracking.steer.abs() <= 1.0 && tracking.accel.abs() <= 1.0);
    Action::new(
        w.alpha * policy.steer + w.beta * apf.steer + w.lambda * tracking.steer,
        w.alpha * policy.accel + w.beta * apf.accel + w.lambda * tracking.accel,
    )
}

/// Evaluate all three sub-controllers on one observation and blend them.
///
/// The observation is partitioned by controller: opponent ranges feed the
/// potential field, everything else feeds the policy network and the
/// path tracker. The full breakdown is returned for tracing.
pub fn hybrid_step(
    obs: &Observation,
    policy: &Policy,
    apf_params: &ApfParams,
    tracking_params: &TrackingParams,
    weights: &FusionWeights,
) -> ControllerBreakdown {
    let learned = policy.act(obs);
    let obstacles = extract_obstacles(obs);
    let (delta_f, tau_f) = apf_action(repulsive_force(&obstacles, apf_params), apf_params);
    let delta_p = tracking_steer(obs.angle, obs.track_pos, tracking_params);
    let tau_p = tracking_accel(delta_p, tracking_params);
    let fused = fuse(
        learned,
        Action::new(delta_f, tau_f),
        Action::new(delta_p, tau_p),
        weights,
    );
    ControllerBreakdown {
        delta_l: learned.steer,
        tau_l: learned.accel,
        delta_f,
        tau_f,
        delta_p,
        tau_p,
        delta: fused.steer,
        tau: fused.accel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, MlpParams};
    use crate::sensors::{ObsScaler, D_MAX, OPPONENT_SECTORS, POLICY_OBS_DIM};
    use proptest::prelude::*;

    fn w(a: f64, b: f64, l: f64) -> FusionWeights {
        FusionWeights::new(a, b, l).unwrap()
    }

    fn obs_with(oppo: &[(usize, f64)], angle: f64, track_pos: f64) -> Observation {
        let mut opponents = [D_MAX; OPPONENT_SECTORS];
        for &(k, d) in oppo {
            opponents[k] = d;
        }
        Observation {
            speed_long: 5.0,
            speed_raw: 5.0,
            angle,
            track_pos,
            opponents,
        }
    }

    fn test_policy(seed: u64) -> Policy {
        Policy {
            actor: MlpParams::init(
                &[POLICY_OBS_DIM, 8, 2],
                &[Activation::Relu, Activation::Tanh],
                seed,
            ),
            scaler: ObsScaler::new(20.0),
        }
    }

    fn zero_policy() -> Policy {
        let mut p = test_policy(0);
        for l in &mut p.actor.layers {
            l.weights.data_mut().fill(0.0);
            l.bias.fill(0.0);
        }
        p
    }

    #[test]
    fn weight_validation() {
        assert!(FusionWeights::new(0.5, 0.5, 0.1).is_err());
        assert!(FusionWeights::new(-0.1, 0.6, 0.5).is_err());
        assert!(FusionWeights::new(0.4, 0.3, 0.3).is_ok());
        assert!(FusionWeights::new(1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn identity_weight_reproduces_policy_action_bitwise() {
        let a = Action::new(0.37219, -0.81543);
        let b = Action::new(-0.9, 0.2);
        let c = Action::new(0.1, 0.4);
        let fused = fuse(a, b, c, &FusionWeights::policy_only());
        assert_eq!(fused, a);
    }

    #[test]
    fn equal_sub_actions_fuse_to_the_common_point() {
        let a = Action::new(0.312, -0.77);
        let fused = fuse(a, a, a, &w(0.4, 0.3, 0.3));
        assert!((fused.steer - a.steer).abs() < 1e-12);
        assert!((fused.accel - a.accel).abs() < 1e-12);
    }

    #[test]
    fn hand_blend_arithmetic() {
        let fused = fuse(
            Action::new(0.2, 0.0),
            Action::new(-1.0, 0.0),
            Action::new(0.418, 0.0),
            &w(0.4, 0.3, 0.3),
        );
        assert!((fused.steer - -0.0946).abs() < 1e-12);
    }

    #[test]
    fn perturbation_coefficient_equals_weight() {
        let weights = w(0.4, 0.3, 0.3);
        let base = fuse(
            Action::new(0.1, 0.2),
            Action::new(-0.3, 0.4),
            Action::new(0.5, -0.6),
            &weights,
        );
        let eps = 0.125; // exactly representable
        let bumped = fuse(
            Action::new(0.1, 0.2),
            Action::new(-0.3 + eps, 0.4),
            Action::new(0.5, -0.6),
            &weights,
        );
        assert!((bumped.steer - base.steer - weights.beta() * eps).abs() < 1e-15);
        assert_eq!(bumped.accel, base.accel);
    }

    #[test]
    fn no_opponents_zeroes_the_field_branch() {
        let policy = test_policy(3);
        let obs = obs_with(&[], 0.05, -0.1);
        let br = hybrid_step(
            &obs,
            &policy,
            &ApfParams::default(),
            &TrackingParams::default(),
            &FusionWeights::default(),
        );
        assert_eq!(br.delta_f, 0.0);
        assert_eq!(br.tau_f, 0.0);
        let weights = FusionWeights::default();
        let manual = fuse(
            Action::new(br.delta_l, br.tau_l),
            Action::new(0.0, 0.0),
            Action::new(br.delta_p, br.tau_p),
            &weights,
        );
        assert_eq!(br.fused(), manual);
    }

    #[test]
    fn dead_ahead_obstacle_shifts_accel_by_beta() {
        let policy = test_policy(4);
        let apf = ApfParams::default();
        let tracking = TrackingParams::default();
        let weights = FusionWeights::default();
        let clear = hybrid_step(&obs_with(&[], 0.0, 0.0), &policy, &apf, &tracking, &weights);
        // Obstacle in sector 0 at the singularity clamp: tau_f saturates at -1.
        let blocked = hybrid_step(
            &obs_with(&[(0, apf.d_min)], 0.0, 0.0),
            &policy,
            &apf,
            &tracking,
            &weights,
        );
        assert_eq!(blocked.tau_f, -1.0);
        assert_eq!(blocked.delta_f, 0.0);
        assert!((clear.tau - blocked.tau - weights.beta()).abs() < 1e-15);
        assert_eq!(clear.delta, blocked.delta);
    }

    #[test]
    fn all_zero_controllers_fuse_to_zero() {
        let br = hybrid_step(
            &obs_with(&[], 0.0, 0.0),
            &zero_policy(),
            &ApfParams::default(),
            &TrackingParams::default(),
            &FusionWeights::default(),
        );
        assert_eq!(br.fused(), Action::new(0.0, 0.0));
    }

    #[test]
    fn zero_beta_ignores_opponents_bitwise() {
        let policy = test_policy(9);
        let weights = w(0.6, 0.0, 0.4);
        let empty = hybrid_step(
            &obs_with(&[], 0.12, 0.3),
            &policy,
            &ApfParams::default(),
            &TrackingParams::default(),
            &weights,
        );
        let crowded = hybrid_step(
            &obs_with(&[(0, 2.0), (5, 10.0), (30, 4.0)], 0.12, 0.3),
            &policy,
            &ApfParams::default(),
            &TrackingParams::default(),
            &weights,
        );
        // Sub-commands differ but the fused action cannot.
        assert_eq!(empty.fused(), crowded.fused());
    }

    proptest! {
        #[test]
        fn fused_output_stays_in_the_convex_hull(
            dl in -1.0..1.0f64, tl in -1.0..1.0f64,
            df in -1.0..1.0f64, tf in -1.0..1.0f64,
            dp in -1.0..1.0f64, tp in -1.0..1.0f64,
            wa in 0.0..1.0f64, wb in 0.0..1.0f64,
        ) {
            let (wa, wb) = (wa, wb * (1.0 - wa));
            let weights = FusionWeights::new(wa, wb, 1.0 - wa - wb).unwrap();
            let fused = fuse(
                Action::new(dl, tl),
                Action::new(df, tf),
                Action::new(dp, tp),
                &weights,
            );
            let lo = dl.min(df).min(dp) - 1e-12;
            let hi = dl.max(df).max(dp) + 1e-12;
            prop_assert!(fused.steer >= lo && fused.steer <= hi);
            prop_assert!(fused.steer.abs() <= 1.0 && fused.accel.abs() <= 1.0);
        }

        #[test]
        fn swapping_controllers_with_their_weights_is_neutral(
            dl in -1.0..1.0f64, df in -1.0..1.0f64, dp in -1.0..1.0f64,
            wa in 0.01..0.98f64, wb in 0.01..0.5f64,
        ) {
            let wb = wb.min(1.0 - wa - 0.01);
            let weights = FusionWeights::new(wa, wb, 1.0 - wa - wb).unwrap();
            let swapped = FusionWeights::new(wb, wa, 1.0 - wa - wb).unwrap();
            let a = Action::new(dl, 0.0);
            let b = Action::new(df, 0.0);
            let c = Action::new(dp, 0.0);
            let f1 = fuse(a, b, c, &weights);
            let f2 = fuse(b, a, c, &swapped);
            prop_assert!((f1.steer - f2.steer).abs() < 1e-12);
        }
    }
}
