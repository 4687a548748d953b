//! Run configuration: a TOML file with sections mirroring the subsystems.
//! All shipped defaults apply when a section or key is omitted, so a minimal
//! config only names a track.

use crate::apf::ApfParams;
use crate::ddpg::AgentConfig;
use crate::error::{Error, Result};
use crate::fusion::FusionWeights;
use crate::geom::Vec2;
use crate::sim::{LanePlan, TrackSpec, VehicleParams};
use crate::tracking::TrackingParams;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Episode setup: where the ego starts (frenet coordinates) and the
/// opponents' lane-relative scripts.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub ego_start_s: f64,
    pub ego_start_d: f64,
    pub ego_start_speed: f64,
    pub opponents: Vec<LanePlan>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            ego_start_s: 0.0,
            ego_start_d: 0.0,
            ego_start_speed: 0.0,
            opponents: Vec::new(),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub episodes: usize,
    pub max_steps: usize,
    pub eval_episodes: usize,
    pub dt: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub track: TrackSpec,
    pub scenario: Scenario,
    pub vehicle: VehicleParams,
    pub agent: AgentConfig,
    pub apf: ApfParams,
    pub tracking: TrackingParams,
    pub weights: FusionWeights,
}

impl RunConfig {
    /// Desk-scale defaults on the given track.
    pub fn with_track(track: TrackSpec) -> Self {
        RunConfig {
            episodes: 200,
            max_steps: 500,
            eval_episodes: 1,
            dt: 0.02,
            seed: 0,
            out_dir: PathBuf::from("runs/out"),
            track,
            scenario: Scenario::default(),
            vehicle: VehicleParams::default(),
            agent: AgentConfig::default(),
            apf: ApfParams::default(),
            tracking: TrackingParams::default(),
            weights: FusionWeights::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        self.vehicle.validate()?;
        self.agent.validate()?;
        self.apf.validate()?;
        self.tracking.validate()?;
        if !(self.scenario.ego_start_speed >= 0.0) {
            return Err(Error::Config("ego_start_speed must be nonnegative".into()));
        }
        Ok(())
    }

    /// Load and resolve a config file. Relative track-file paths resolve
    /// against the config file's directory.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let raw: RawConfig = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        raw.resolve(base)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    run: RunSection,
    track: TrackSection,
    scenario: ScenarioSection,
    vehicle: VehicleParams,
    agent: AgentConfig,
    apf: ApfParams,
    tracking: TrackingParams,
    fusion: FusionSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    episodes: usize,
    max_steps: usize,
    eval_episodes: usize,
    dt: f64,
    seed: u64,
    out_dir: String,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            episodes: 200,
            max_steps: 500,
            eval_episodes: 1,
            dt: 0.02,
            seed: 0,
            out_dir: "runs/out".into(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TrackSection {
    /// Built-in track: "oval" (default) or "straight".
    preset: Option<String>,
    /// Track description file, relative to the config file.
    file: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioSection {
    ego_start_s: f64,
    ego_start_d: f64,
    ego_start_speed: f64,
    opponents: Vec<OpponentSection>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            ego_start_s: 0.0,
            ego_start_d: 0.0,
            ego_start_speed: 0.0,
            opponents: Vec::new(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpponentSection {
    start_s: f64,
    #[serde(default)]
    offset_d: f64,
    #[serde(default)]
    speed: f64,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FusionSection {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl Default for FusionSection {
    fn default() -> Self {
        FusionSection {
            alpha: 0.4,
            beta: 0.3,
            lambda: 0.3,
        }
    }
}

/// On-disk track description.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrackFile {
    half_width: f64,
    #[serde(default)]
    closed: bool,
    /// Centerline points as [x, y] pairs, meters.
    points: Vec<[f64; 2]>,
}

/// Parse a track file's TOML text.
pub fn track_from_toml(text: &str) -> Result<TrackSpec> {
    let file: TrackFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("cannot parse track: {e}")))?;
    TrackSpec::new(
        file.points.iter().map(|p| Vec2::new(p[0], p[1])).collect(),
        file.half_width,
        file.closed,
    )
}

pub fn load_track_file(path: &Path) -> Result<TrackSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read track {}: {e}", path.display())))?;
    track_from_toml(&text)
}

fn preset_track(name: &str) -> Result<TrackSpec> {
    match name {
        // Two 100 m straights joined by 30 m semicircles, half-width 6.
        "oval" => TrackSpec::oval(100.0, 30.0, 6.0, 45),
        "straight" => TrackSpec::straight(200.0, 6.0),
        other => Err(Error::Config(format!("unknown track preset '{other}'"))),
    }
}

impl RawConfig {
    fn resolve(self, base: &Path) -> Result<RunConfig> {
        let track = match (&self.track.preset, &self.track.file) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "track: give either 'preset' or 'file', not both".into(),
                ))
            }
            (Some(name), None) => preset_track(name)?,
            (None, Some(file)) => load_track_file(&base.join(file))?,
            (None, None) => preset_track("oval")?,
        };
        let weights = FusionWeights::new(self.fusion.alpha, self.fusion.beta, self.fusion.lambda)?;
        let config = RunConfig {
            episodes: self.run.episodes,
            max_steps: self.run.max_steps,
            eval_episodes: self.run.eval_episodes,
            dt: self.run.dt,
            seed: self.run.seed,
            out_dir: PathBuf::from(self.run.out_dir),
            track,
            scenario: Scenario {
                ego_start_s: self.scenario.ego_start_s,
                ego_start_d: self.scenario.ego_start_d,
                ego_start_speed: self.scenario.ego_start_speed,
                opponents: self
                    .scenario
                    .opponents
                    .iter()
                    .map(|o| LanePlan {
                        start_s: o.start_s,
                        offset_d: o.offset_d,
                        speed: o.speed,
                    })
                    .collect(),
            },
            vehicle: self.vehicle,
            agent: self.agent,
            apf: self.apf,
            tracking: self.tracking,
            weights,
        };
        config.validate()?;
        Ok(config)
    }
}
