//! Deterministic 2D world: track geometry with Frenet projection, a
//! kinematic-bicycle ego vehicle, scripted opponents, and collision /
//! off-track detection.
//!
//! All types are plain values; worlds never share mutable state, so
//! independent simulations can run on separate threads freely.

mod track;
mod vehicle;
mod world;

pub use track::{is_off_track, FrenetCoord, TrackSpec};
pub use vehicle::{step_vehicle, Action, VehicleParams, VehicleState};
pub use world::{
    detect_collision, step_world, LaneFollowScript, LanePlan, OpponentScript, StaticScript,
    WorldState,
};
