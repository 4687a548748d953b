//! Observation building: ego kinematics relative to the track plus a ring of
//! 36 opponent rangefinders, the projected-speed reward, and episode
//! termination checks. Everything here is a pure function of its inputs.

use crate::geom::{wrap_angle, Vec2};
use crate::sim::{detect_collision, is_off_track, TrackSpec, VehicleParams, WorldState};
use std::f64::consts::{FRAC_PI_2, PI};

/// Number of rangefinder sectors tiling the full circle.
pub const OPPONENT_SECTORS: usize = 36;

/// Angular width of one sector (10 degrees).
pub const SECTOR_WIDTH: f64 = 2.0 * PI / OPPONENT_SECTORS as f64;

/// Rangefinder ceiling, meters. Sectors without an opponent read exactly this.
pub const D_MAX: f64 = 200.0;

/// Width of the policy/critic state input: the observation minus the
/// opponent ranges, which feed the collision-avoidance controller instead.
pub const POLICY_OBS_DIM: usize = 4;

/// The agent's sensor snapshot.
///
/// Sector `k` is centered on bearing `k * 10` degrees measured
/// counterclockwise from the ego's forward axis, covering [k*10 - 5, k*10 + 5).
/// Sector 0 therefore looks dead ahead and sector 9 to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Ego speed projected on the track tangent, m/s.
    pub speed_long: f64,
    /// Ego speed, m/s.
    pub speed_raw: f64,
    /// Heading error: ego heading minus track tangent heading, in (-pi, pi].
    pub angle: f64,
    /// Lateral offset normalized by the track half-width; |x| <= 1 on track.
    pub track_pos: f64,
    /// Distance to the nearest opponent center per sector, each in (0, D_MAX].
    pub opponents: [f64; OPPONENT_SECTORS],
}

/// One sensed obstacle for the potential-field controller. `theta` is the
/// obstacle's angle measured from the ego's lateral (left) axis toward the
/// forward axis, so an obstacle dead ahead has theta = pi/2 and one on the
/// left has theta = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleReading {
    pub distance: f64,
    pub theta: f64,
}

/// Signed sector bearing in (-pi, pi]: sectors 0..=18 look left/ahead at
/// +k*10 degrees, 19..=35 look right at negative bearings. Mirrored sectors
/// (k, 36-k) get exactly negated bearings.
fn sector_bearing(sector: usize) -> f64 {
    debug_assert!(sector < OPPONENT_SECTORS);
    let signed = if sector <= OPPONENT_SECTORS / 2 {
        sector as isize
    } else {
        sector as isize - OPPONENT_SECTORS as isize
    };
    signed as f64 * SECTOR_WIDTH
}

fn sector_of_bearing(bearing: f64) -> usize {
    let idx = (bearing / SECTOR_WIDTH).round() as isize;
    idx.rem_euclid(OPPONENT_SECTORS as isize) as usize
}

/// Build the observation for the current world state.
///
/// The ego is assumed close enough to the track for its centerline
/// projection to be meaningful; the projection itself is total.
pub fn observe(world: &WorldState, track: &TrackSpec) -> Observation {
    let frenet = track.project(world.ego.position);
    let angle = wrap_angle(world.ego.heading - frenet.tangent_heading);
    let (sin_h, cos_h) = world.ego.heading.sin_cos();
    let forward = Vec2::new(cos_h, sin_h);
    let left = Vec2::new(-sin_h, cos_h);

    let mut opponents = [D_MAX; OPPONENT_SECTORS];
    for opp in &world.opponents {
        let rel = opp.position - world.ego.position;
        let dist = rel.norm().max(1e-9);
        let bearing = rel.dot(left).atan2(rel.dot(forward));
        let k = sector_of_bearing(bearing);
        opponents[k] = opponents[k].min(dist.min(D_MAX));
    }

    Observation {
        speed_long: world.ego.speed * angle.cos(),
        speed_raw: world.ego.speed,
        angle,
        track_pos: frenet.d / track.half_width(),
        opponents,
    }
}

/// Convert occupied sectors into obstacle readings for the potential-field
/// controller. Sectors at the D_MAX ceiling emit nothing; the rest emit the
/// sector-center bearing converted to the lateral-axis convention
/// (theta = pi/2 - bearing).
pub fn extract_obstacles(obs: &Observation) -> Vec<ObstacleReading> {
    obs.opponents
        .iter()
        .enumerate()
        .filter(|(_, &d)| d < D_MAX)
        .map(|(k, &d)| ObstacleReading {
            distance: d,
            theta: FRAC_PI_2 - sector_bearing(k),
        })
        .collect()
}

/// Projected-speed reward, linearly normalized into [0, 2]. Zero and
/// backward projected motion clamp to 0; projected speed at v_max maps to 2.
pub fn reward(obs: &Observation, v_max: f64) -> f64 {
    debug_assert!(v_max > 0.0);
    2.0 * (obs.speed_raw * obs.angle.cos() / v_max).clamp(0.0, 1.0)
}

/// Why an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationCause {
    Collision,
    OffTrack,
    MaxSteps,
}

impl TerminationCause {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationCause::Collision => "collision",
            TerminationCause::OffTrack => "off_track",
            TerminationCause::MaxSteps => "max_steps",
        }
    }
}

/// Episode termination check: collision, then off-track, then step budget.
pub fn is_terminal(
    world: &WorldState,
    track: &TrackSpec,
    params: &VehicleParams,
    steps_taken: usize,
    max_steps: usize,
) -> Option<TerminationCause> {
    if detect_collision(world, params) {
        return Some(TerminationCause::Collision);
    }
    let frenet = track.project(world.ego.position);
    if is_off_track(&frenet, track) {
        return Some(TerminationCause::OffTrack);
    }
    if steps_taken >= max_steps {
        return Some(TerminationCause::MaxSteps);
    }
    None
}

/// Maps observation fields into roughly [-1, 1] before they reach the
/// networks: speeds by v_max, the heading error by pi. The normalized track
/// position passes through unchanged.
///
/// The sensor vector is partitioned between controllers: the opponent
/// ranges go to the potential field, everything else is the policy state,
/// so the network input is the four kinematic fields only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObsScaler {
    pub v_max: f64,
    pub d_max: f64,
}

impl ObsScaler {
    pub fn new(v_max: f64) -> Self {
        ObsScaler {
            v_max,
            d_max: D_MAX,
        }
    }

    /// The scaled policy state: [speed_long, speed_raw, angle, track_pos].
    pub fn policy_input(&self, obs: &Observation) -> Vec<f64> {
        vec![
            obs.speed_long / self.v_max,
            obs.speed_raw / self.v_max,
            obs.angle / PI,
            obs.track_pos,
        ]
    }
}
