//! The experiment commands: train, eval, compare, extract.

use crate::ddpg::{load_agent_checkpoint, Agent, AgentCheckpoint, Policy, Transition};
use crate::error::{Error, Result};
use crate::fusion::{hybrid_step, FusionWeights};
use crate::harness::config::RunConfig;
use crate::harness::rng::agent_seeds;
use crate::harness::trace::{
    metrics_csv, summary_csv, trace_csv, EpisodeRecord, TraceRow, TrainEpisodeMetric,
};
use crate::sensors::{
    is_terminal, observe, reward, ObsScaler, TerminationCause, POLICY_OBS_DIM,
};
use crate::sim::{step_world, LaneFollowScript, VehicleState, WorldState};
use std::path::{Path, PathBuf};

/// Controller selection for evaluation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    DdpgOnly,
    ApfOnly,
    TrackingOnly,
    Fused,
}

impl EvalMode {
    pub const ALL: [EvalMode; 4] = [
        EvalMode::DdpgOnly,
        EvalMode::ApfOnly,
        EvalMode::TrackingOnly,
        EvalMode::Fused,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EvalMode::DdpgOnly => "ddpg_only",
            EvalMode::ApfOnly => "apf_only",
            EvalMode::TrackingOnly => "tracking_only",
            EvalMode::Fused => "fused",
        }
    }

    pub fn parse(s: &str) -> Result<EvalMode> {
        match s {
            "ddpg_only" => Ok(EvalMode::DdpgOnly),
            "apf_only" => Ok(EvalMode::ApfOnly),
            "tracking_only" => Ok(EvalMode::TrackingOnly),
            "fused" => Ok(EvalMode::Fused),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected ddpg_only, apf_only, tracking_only, or fused)"
            ))),
        }
    }

    /// The fusion weights this mode runs with; `fused` uses the configured
    /// weights.
    pub fn weights(&self, configured: FusionWeights) -> FusionWeights {
        match self {
            EvalMode::DdpgOnly => FusionWeights::policy_only(),
            EvalMode::ApfOnly => FusionWeights::apf_only(),
            EvalMode::TrackingOnly => FusionWeights::tracking_only(),
            EvalMode::Fused => configured,
        }
    }
}

fn initial_world(config: &RunConfig) -> WorldState {
    let sc = &config.scenario;
    let (pos, heading) = config.track.frenet_to_world(sc.ego_start_s, sc.ego_start_d);
    let ego = VehicleState::new(pos, heading, sc.ego_start_speed);
    let opponents = sc
        .opponents
        .iter()
        .map(|plan| plan.state_at(&config.track, 0.0))
        .collect();
    WorldState::new(ego, opponents)
}

fn min_opponent_distance(world: &WorldState) -> f64 {
    world
        .opponents
        .iter()
        .map(|o| (o.position - world.ego.position).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Artifacts produced by [`cmd_train`].
#[derive(Debug)]
pub struct TrainArtifacts {
    pub metrics: Vec<TrainEpisodeMetric>,
    pub metrics_path: PathBuf,
    /// Absent when the run had zero episodes.
    pub checkpoint_path: Option<PathBuf>,
}

/// Train the policy on an opponent-free scenario with exploration, one
/// update per environment step once the warmup fills. Writes
/// `metrics.csv` and `agent.ckpt` into the output directory.
pub fn cmd_train(config: &RunConfig) -> Result<TrainArtifacts> {
    config.validate()?;
    if !config.scenario.opponents.is_empty() {
        return Err(Error::Config(
            "training requires an opponent-free scenario".into(),
        ));
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let scaler = ObsScaler::new(config.vehicle.v_max);
    let mut agent = Agent::new(POLICY_OBS_DIM, config.agent.clone(), agent_seeds(config.seed))?;

    let mut metrics = Vec::with_capacity(config.episodes);
    for episode in 0..config.episodes {
        let metric = run_training_episode(config, &mut agent, &scaler, episode);
        metrics.push(metric);
    }

    let metrics_path = config.out_dir.join("metrics.csv");
    std::fs::write(&metrics_path, metrics_csv(&metrics))?;

    let checkpoint_path = if config.episodes > 0 {
        let path = config.out_dir.join("agent.ckpt");
        agent.save(&path, scaler)?;
        Some(path)
    } else {
        None
    };

    Ok(TrainArtifacts {
        metrics,
        metrics_path,
        checkpoint_path,
    })
}

fn run_training_episode(
    config: &RunConfig,
    agent: &mut Agent,
    scaler: &ObsScaler,
    episode: usize,
) -> TrainEpisodeMetric {
    let script = LaneFollowScript {
        track: &config.track,
        plans: &config.scenario.opponents,
    };
    let mut world = initial_world(config);
    agent.reset_noise();
    let mut scaled = scaler.policy_input(&observe(&world, &config.track));
    let mut total_return = 0.0;
    let mut loss_sum = 0.0;
    let mut q_sum = 0.0;
    let mut updates = 0usize;

    for step in 0..config.max_steps {
        let action = agent.select_action(&scaled, true);
        let next_world = step_world(&world, action, config.dt, &config.vehicle, &script);
        let next_obs = observe(&next_world, &config.track);
        let next_scaled = scaler.policy_input(&next_obs);
        let r = reward(&next_obs, config.vehicle.v_max);
        let termination = is_terminal(
            &next_world,
            &config.track,
            &config.vehicle,
            step + 1,
            config.max_steps,
        );
        // Step-budget cutoffs are not true terminals: values bootstrap on.
        let done = matches!(
            termination,
            Some(TerminationCause::Collision) | Some(TerminationCause::OffTrack)
        );
        agent.record(Transition {
            obs: scaled,
            action: [action.steer, action.accel],
            reward: r,
            next_obs: next_scaled.clone(),
            done,
        });
        if let Some(m) = agent.train_step() {
            loss_sum += m.critic_loss;
            q_sum += m.mean_q;
            updates += 1;
        }
        total_return += r;
        world = next_world;
        scaled = next_scaled;
        if termination.is_some() {
            break;
        }
    }

    TrainEpisodeMetric {
        episode,
        total_return,
        critic_loss: (updates > 0).then(|| loss_sum / updates as f64),
        mean_q: (updates > 0).then(|| q_sum / updates as f64),
    }
}

/// One evaluation episode under the hybrid controller (no exploration, no
/// learning). Returns the trace rows and the episode record.
pub fn eval_episode(
    config: &RunConfig,
    policy: &Policy,
    mode: EvalMode,
    episode: usize,
) -> (Vec<TraceRow>, EpisodeRecord) {
    let weights = mode.weights(config.weights);
    let script = LaneFollowScript {
        track: &config.track,
        plans: &config.scenario.opponents,
    };
    let mut world = initial_world(config);
    let mut rows = Vec::new();
    let mut total_return = 0.0;
    let mut min_dist = min_opponent_distance(&world);
    let mut abs_pos_sum = 0.0;
    let mut termination = TerminationCause::MaxSteps;

    for step in 0..config.max_steps {
        let obs = observe(&world, &config.track);
        let breakdown = hybrid_step(&obs, policy, &config.apf, &config.tracking, &weights);
        let next_world = step_world(
            &world,
            breakdown.fused(),
            config.dt,
            &config.vehicle,
            &script,
        );
        let next_obs = observe(&next_world, &config.track);
        let r = reward(&next_obs, config.vehicle.v_max);
        let term = is_terminal(
            &next_world,
            &config.track,
            &config.vehicle,
            step + 1,
            config.max_steps,
        );
        rows.push(TraceRow {
            step,
            time: world.sim_time,
            ego: world.ego,
            obs: obs.clone(),
            breakdown,
            reward: r,
            termination: term,
        });
        total_return += r;
        abs_pos_sum += obs.track_pos.abs();
        min_dist = min_dist.min(min_opponent_distance(&next_world));
        world = next_world;
        if let Some(cause) = term {
            termination = cause;
            break;
        }
    }

    let steps = rows.len();
    debug_assert!(total_return <= 2.0 * steps as f64 + 1e-9);
    let record = EpisodeRecord {
        episode,
        total_return,
        steps,
        termination,
        min_opp_distance: min_dist,
        mean_abs_track_pos: if steps > 0 {
            abs_pos_sum / steps as f64
        } else {
            0.0
        },
    };
    (rows, record)
}

/// Artifacts produced by [`cmd_eval`].
#[derive(Debug)]
pub struct EvalArtifacts {
    pub records: Vec<EpisodeRecord>,
    pub trace_paths: Vec<PathBuf>,
    pub summary_path: PathBuf,
}

/// Evaluate a checkpoint under the selected mode, writing one trace CSV per
/// episode plus a summary CSV.
pub fn cmd_eval(config: &RunConfig, checkpoint: &Path, mode: EvalMode) -> Result<EvalArtifacts> {
    config.validate()?;
    let ckpt = load_checkpoint_for(config, checkpoint)?;
    let policy = ckpt.policy();
    std::fs::create_dir_all(&config.out_dir)?;

    let mut records = Vec::new();
    let mut trace_paths = Vec::new();
    for episode in 0..config.eval_episodes {
        let (rows, record) = eval_episode(config, &policy, mode, episode);
        let path = config
            .out_dir
            .join(format!("trace_{}_ep{episode:03}.csv", mode.as_str()));
        std::fs::write(&path, trace_csv(&rows))?;
        trace_paths.push(path);
        records.push(record);
    }
    let summary_path = config.out_dir.join(format!("summary_{}.csv", mode.as_str()));
    std::fs::write(&summary_path, summary_csv(&records))?;
    Ok(EvalArtifacts {
        records,
        trace_paths,
        summary_path,
    })
}

fn load_checkpoint_for(config: &RunConfig, checkpoint: &Path) -> Result<AgentCheckpoint> {
    let ckpt = load_agent_checkpoint(checkpoint)?;
    if ckpt.obs_dim != POLICY_OBS_DIM {
        return Err(Error::Checkpoint(format!(
            "checkpoint obs_dim {} does not match the simulator's {}",
            ckpt.obs_dim, POLICY_OBS_DIM
        )));
    }
    let expected_dims: Vec<usize> = std::iter::once(POLICY_OBS_DIM)
        .chain(config.agent.hidden.iter().copied())
        .chain(std::iter::once(2))
        .collect();
    if ckpt.actor.dims() != expected_dims {
        return Err(Error::Checkpoint(format!(
            "checkpoint actor dims {:?} do not match configured {:?}",
            ckpt.actor.dims(),
            expected_dims
        )));
    }
    Ok(ckpt)
}

/// One row of the ablation table.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub mode: EvalMode,
    pub record: EpisodeRecord,
}

/// Run every mode on the configured scenario and tabulate the outcomes.
/// Writes `compare.csv`; returns the rows in mode order.
pub fn cmd_compare(config: &RunConfig, checkpoint: &Path) -> Result<Vec<CompareRow>> {
    config.validate()?;
    let ckpt = load_checkpoint_for(config, checkpoint)?;
    let policy = ckpt.policy();
    std::fs::create_dir_all(&config.out_dir)?;

    let rows: Vec<CompareRow> = EvalMode::ALL
        .iter()
        .map(|&mode| {
            let (_, record) = eval_episode(config, &policy, mode, 0);
            CompareRow { mode, record }
        })
        .collect();

    let mut csv = String::from("mode,return,steps,termination,min_opp_distance,mean_abs_e_norm\n");
    for row in &rows {
        let r = &row.record;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.mode.as_str(),
            r.total_return,
            r.steps,
            r.termination.as_str(),
            r.min_opp_distance,
            r.mean_abs_track_pos,
        ));
    }
    std::fs::write(config.out_dir.join("compare.csv"), csv)?;
    Ok(rows)
}

/// Column selection from a trace file; returns the selected CSV text and
/// optionally writes it.
pub fn cmd_extract(trace: &Path, columns: &[&str], out: Option<&Path>) -> Result<String> {
    let text = std::fs::read_to_string(trace)
        .map_err(|e| Error::Config(format!("cannot read trace {}: {e}", trace.display())))?;
    let selected = crate::harness::trace::extract_columns(&text, columns)?;
    if let Some(path) = out {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, &selected)?;
    }
    Ok(selected)
}
