//! World state: ego vehicle plus scripted opponents, collision detection.

use crate::geom::Vec2;
use crate::sim::track::TrackSpec;
use crate::sim::vehicle::{step_vehicle, Action, VehicleParams, VehicleState};

/// Snapshot of every vehicle in the simulation.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub ego: VehicleState,
    pub opponents: Vec<VehicleState>,
    pub sim_time: f64,
}

impl WorldState {
    pub fn new(ego: VehicleState, opponents: Vec<VehicleState>) -> Self {
        WorldState {
            ego,
            opponents,
            sim_time: 0.0,
        }
    }
}

/// Supplies each opponent's next state. Opponents are kinematic scenery:
/// the script owns their motion entirely.
pub trait OpponentScript {
    /// `index` is the opponent slot, `current` its state before the step,
    /// `next_time` the world time after the step.
    fn advance(&self, index: usize, current: &VehicleState, next_time: f64, dt: f64)
        -> VehicleState;
}

impl<F> OpponentScript for F
where
    F: Fn(usize, &VehicleState, f64, f64) -> VehicleState,
{
    fn advance(&self, index: usize, current: &VehicleState, next_time: f64, dt: f64) -> VehicleState {
        self(index, current, next_time, dt)
    }
}

/// Opponents that never move.
pub struct StaticScript;

impl OpponentScript for StaticScript {
    fn advance(&self, _: usize, current: &VehicleState, _: f64, _: f64) -> VehicleState {
        *current
    }
}

/// One opponent's lane-relative plan: it holds a fixed lateral offset and
/// moves along the centerline at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanePlan {
    pub start_s: f64,
    pub offset_d: f64,
    pub speed: f64,
}

impl LanePlan {
    /// Pose at absolute time `t`; position is a pure function of time so
    /// integration error never accumulates.
    pub fn state_at(&self, track: &TrackSpec, t: f64) -> VehicleState {
        let s = self.start_s + self.speed * t;
        let (pos, heading) = track.frenet_to_world(s, self.offset_d);
        VehicleState::new(pos, heading, self.speed)
    }
}

/// Centerline-following opponents driven by [`LanePlan`]s.
pub struct LaneFollowScript<'a> {
    pub track: &'a TrackSpec,
    pub plans: &'a [LanePlan],
}

impl OpponentScript for LaneFollowScript<'_> {
    fn advance(&self, index: usize, _: &VehicleState, next_time: f64, _: f64) -> VehicleState {
        self.plans[index].state_at(self.track, next_time)
    }
}

/// Advance the whole world by one step: ego via the bicycle model, opponents
/// via the script, sim_time by dt. Pure function of its inputs.
pub fn step_world<S: OpponentScript>(
    world: &WorldState,
    ego_action: Action,
    dt: f64,
    params: &VehicleParams,
    script: &S,
) -> WorldState {
    let next_time = world.sim_time + dt;
    let opponents = world
        .opponents
        .iter()
        .enumerate()
        .map(|(i, opp)| script.advance(i, opp, next_time, dt))
        .collect();
    WorldState {
        ego: step_vehicle(&world.ego, ego_action, dt, params),
        opponents,
        sim_time: next_time,
    }
}

/// Oriented bounding box overlap test via the separating-axis theorem.
/// Touching boxes count as overlapping.
fn obb_overlap(a: &VehicleState, b: &VehicleState, half_len: f64, half_wid: f64) -> bool {
    let centers = b.position - a.position;
    // Candidate separating axes: each box's forward and lateral directions.
    let axes = [
        Vec2::new(a.heading.cos(), a.heading.sin()),
        Vec2::new(-a.heading.sin(), a.heading.cos()),
        Vec2::new(b.heading.cos(), b.heading.sin()),
        Vec2::new(-b.heading.sin(), b.heading.cos()),
    ];
    for axis in axes {
        let project = |s: &VehicleState| {
            let f = Vec2::new(s.heading.cos(), s.heading.sin());
            let l = Vec2::new(-s.heading.sin(), s.heading.cos());
            half_len * f.dot(axis).abs() + half_wid * l.dot(axis).abs()
        };
        if centers.dot(axis).abs() > project(a) + project(b) {
            return false;
        }
    }
    true
}

/// True iff the ego's body rectangle overlaps any opponent's.
pub fn detect_collision(world: &WorldState, params: &VehicleParams) -> bool {
    let half_len = params.body_length / 2.0;
    let half_wid = params.body_width / 2.0;
    world
        .opponents
        .iter()
        .any(|opp| obb_overlap(&world.ego, opp, half_len, half_wid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn world_with(opponents: Vec<VehicleState>) -> WorldState {
        WorldState::new(VehicleState::new(Vec2::ZERO, 0.0, 10.0), opponents)
    }

    #[test]
    fn empty_world_matches_step_vehicle() {
        let p = VehicleParams::default();
        let w = world_with(vec![]);
        let a = Action::new(0.3, 0.5);
        let next = step_world(&w, a, 0.02, &p, &StaticScript);
        let expected = step_vehicle(&w.ego, a, 0.02, &p);
        assert_eq!(next.ego, expected);
        assert!(next.opponents.is_empty());
        assert!((next.sim_time - 0.02).abs() < 1e-15);
    }

    #[test]
    fn static_script_freezes_opponents() {
        let p = VehicleParams::default();
        let opp = VehicleState::new(Vec2::new(20.0, 1.0), 0.4, 0.0);
        let w = world_with(vec![opp]);
        let next = step_world(&w, Action::COAST, 0.02, &p, &StaticScript);
        assert_eq!(next.opponents[0], opp);
    }

    #[test]
    fn lane_plan_advances_along_centerline() {
        let track = TrackSpec::straight(100.0, 6.0).unwrap();
        let plan = LanePlan {
            start_s: 10.0,
            offset_d: 0.0,
            speed: 5.0,
        };
        let w = WorldState::new(
            VehicleState::new(Vec2::ZERO, 0.0, 0.0),
            vec![plan.state_at(&track, 0.0)],
        );
        let script = LaneFollowScript {
            track: &track,
            plans: &[plan],
        };
        let next = step_world(&w, Action::COAST, 0.1, &VehicleParams::default(), &script);
        let f = track.project(next.opponents[0].position);
        assert!((f.s - 10.5).abs() < 1e-12);
        assert!(f.d.abs() < 1e-12);
    }

    #[test]
    fn sim_time_is_monotone() {
        let p = VehicleParams::default();
        let mut w = world_with(vec![]);
        for _ in 0..50 {
            let next = step_world(&w, Action::COAST, 0.02, &p, &StaticScript);
            assert!(next.sim_time > w.sim_time);
            w = next;
        }
    }

    #[test]
    fn step_world_is_deterministic() {
        let p = VehicleParams::default();
        let w = world_with(vec![VehicleState::new(Vec2::new(5.0, 0.0), 0.1, 2.0)]);
        let track = TrackSpec::straight(100.0, 6.0).unwrap();
        let plans = [LanePlan {
            start_s: 5.0,
            offset_d: 0.0,
            speed: 2.0,
        }];
        let script = LaneFollowScript {
            track: &track,
            plans: &plans,
        };
        let a = Action::new(-0.2, 0.7);
        let n1 = step_world(&w, a, 0.02, &p, &script);
        let n2 = step_world(&w, a, 0.02, &p, &script);
        assert_eq!(n1.ego, n2.ego);
        assert_eq!(n1.opponents, n2.opponents);
        assert_eq!(n1.sim_time, n2.sim_time);
    }

    #[test]
    fn far_apart_boxes_do_not_collide() {
        let p = VehicleParams::default();
        let w = world_with(vec![VehicleState::new(Vec2::new(50.0, 0.0), 0.0, 0.0)]);
        assert!(!detect_collision(&w, &p));
    }

    #[test]
    fn identical_pose_collides() {
        let p = VehicleParams::default();
        let w = world_with(vec![VehicleState::new(Vec2::ZERO, 0.0, 10.0)]);
        assert!(detect_collision(&w, &p));
    }

    #[test]
    fn longitudinal_gap_threshold() {
        // Two 4x2 boxes, same heading: overlap iff centers closer than 4 m.
        let p = VehicleParams::default();
        let near = world_with(vec![VehicleState::new(Vec2::new(3.9, 0.0), 0.0, 0.0)]);
        let far = world_with(vec![VehicleState::new(Vec2::new(4.1, 0.0), 0.0, 0.0)]);
        assert!(detect_collision(&near, &p));
        assert!(!detect_collision(&far, &p));
    }

    #[test]
    fn rotated_box_overlap() {
        // A perpendicular opponent 2.5 m ahead: its half-length (2 m) plus
        // ours reaches across the gap only via the long axes.
        let p = VehicleParams::default();
        let cross =
            world_with(vec![VehicleState::new(Vec2::new(2.5, 0.0), std::f64::consts::FRAC_PI_2, 0.0)]);
        assert!(detect_collision(&cross, &p));
        let clear =
            world_with(vec![VehicleState::new(Vec2::new(3.2, 0.0), std::f64::consts::FRAC_PI_2, 0.0)]);
        assert!(!detect_collision(&clear, &p));
    }
}
