//! Deterministic-policy-gradient agent: critic regression to the
//! bootstrapped target, actor ascent along the critic's action gradient,
//! and soft target-network tracking.

use crate::ddpg::noise::{ExplorationNoise, NoiseKind};
use crate::ddpg::replay::{ReplayBuffer, Transition};
use crate::error::{Error, Result};
use crate::nn::{adam_step, AdamState, Activation, Gradients, MlpParams};
use crate::sensors::{Observation, ObsScaler};
use crate::sim::Action;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Training hyperparameters. Defaults are the shipped desk-scale values;
/// the learning rates follow the usual actor/critic split of 1e-4 / 1e-3.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub gamma: f64,
    pub lr_actor: f64,
    pub lr_critic: f64,
    /// Target-network blend rate per update, in (0, 1].
    pub tau_soft: f64,
    pub batch_size: usize,
    /// Minimum buffered transitions before updates begin.
    pub warmup_steps: usize,
    pub buffer_capacity: usize,
    /// Hidden layer widths for both actor and critic.
    pub hidden: Vec<usize>,
    pub noise: NoiseKind,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            gamma: 0.99,
            lr_actor: 1e-4,
            lr_critic: 1e-3,
            tau_soft: 0.001,
            batch_size: 64,
            warmup_steps: 1000,
            buffer_capacity: 100_000,
            hidden: vec![64, 32],
            noise: NoiseKind::default(),
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!(
                "gamma must be in (0, 1), got {}",
                self.gamma
            )));
        }
        if !(self.tau_soft > 0.0 && self.tau_soft <= 1.0) {
            return Err(Error::Config(format!(
                "tau_soft must be in (0, 1], got {}",
                self.tau_soft
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be positive".into()));
        }
        if self.buffer_capacity == 0 {
            return Err(Error::Config("buffer_capacity must be positive".into()));
        }
        if !(self.lr_actor > 0.0 && self.lr_critic > 0.0) {
            return Err(Error::Config("learning rates must be positive".into()));
        }
        Ok(())
    }
}

/// Per-component rng seeds so streams never share state.
#[derive(Debug, Clone, Copy)]
pub struct AgentSeeds {
    pub actor_init: u64,
    pub critic_init: u64,
    pub noise: u64,
    pub sampling: u64,
}

/// Metrics from one training step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainMetrics {
    /// Mean squared TD error of the batch, before the critic update.
    pub critic_loss: f64,
    /// Mean critic value at the current actor's actions, before the update.
    pub mean_q: f64,
}

const ACTION_DIM: usize = 2;

/// The full learner: online and target networks, optimizer state, replay
/// buffer, and exploration noise. Single-owner; `train_step` needs exclusive
/// access. Clone the actor out for concurrent evaluation elsewhere.
pub struct Agent {
    pub config: AgentConfig,
    pub actor: MlpParams,
    pub critic: MlpParams,
    pub target_actor: MlpParams,
    pub target_critic: MlpParams,
    actor_opt: AdamState,
    critic_opt: AdamState,
    pub buffer: ReplayBuffer,
    noise: ExplorationNoise,
    noise_rng: ChaCha8Rng,
    sample_rng: ChaCha8Rng,
    obs_dim: usize,
}

fn critic_input(obs: &[f64], action: [f64; 2]) -> Vec<f64> {
    let mut v = Vec::with_capacity(obs.len() + ACTION_DIM);
    v.extend_from_slice(obs);
    v.extend_from_slice(&action);
    v
}

fn mlp_dims(input: usize, hidden: &[usize], output: usize) -> (Vec<usize>, Vec<Activation>) {
    let mut dims = Vec::with_capacity(hidden.len() + 2);
    dims.push(input);
    dims.extend_from_slice(hidden);
    dims.push(output);
    let mut acts = vec![Activation::Relu; hidden.len()];
    acts.push(if output == ACTION_DIM {
        Activation::Tanh
    } else {
        Activation::Linear
    });
    (dims, acts)
}

impl Agent {
    pub fn new(obs_dim: usize, config: AgentConfig, seeds: AgentSeeds) -> Result<Self> {
        config.validate()?;
        let (actor_dims, actor_acts) = mlp_dims(obs_dim, &config.hidden, ACTION_DIM);
        let (critic_dims, critic_acts) = mlp_dims(obs_dim + ACTION_DIM, &config.hidden, 1);
        let actor = MlpParams::init(&actor_dims, &actor_acts, seeds.actor_init);
        let critic = MlpParams::init(&critic_dims, &critic_acts, seeds.critic_init);
        let target_actor = actor.clone();
        let target_critic = critic.clone();
        let actor_opt = AdamState::new(&actor);
        let critic_opt = AdamState::new(&critic);
        Ok(Agent {
            buffer: ReplayBuffer::new(config.buffer_capacity),
            noise: ExplorationNoise::new(config.noise),
            noise_rng: ChaCha8Rng::seed_from_u64(seeds.noise),
            sample_rng: ChaCha8Rng::seed_from_u64(seeds.sampling),
            config,
            actor,
            critic,
            target_actor,
            target_critic,
            actor_opt,
            critic_opt,
            obs_dim,
        })
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    /// Reset the exploration noise state (call at episode boundaries).
    pub fn reset_noise(&mut self) {
        self.noise.reset();
    }

    /// Greedy action, optionally perturbed by exploration noise. The noise
    /// state advances only when `explore` is set. Output clamped to the
    /// action box.
    pub fn select_action(&mut self, obs: &[f64], explore: bool) -> Action {
        assert_eq!(obs.len(), self.obs_dim, "observation width mismatch");
        let out = self.actor.output(obs);
        let mut action = [out[0], out[1]];
        if explore {
            let n = self.noise.sample(&mut self.noise_rng);
            action[0] += n[0];
            action[1] += n[1];
        }
        Action::new(action[0], action[1]).clamped()
    }

    pub fn record(&mut self, transition: Transition) {
        self.buffer.push(transition);
    }

    /// Regress the critic toward the bootstrapped targets over `batch`.
    /// Returns the pre-update mean squared error.
    pub fn critic_update(&mut self, batch: &[Transition]) -> f64 {
        assert!(!batch.is_empty(), "empty batch");
        let targets = critic_targets(
            batch,
            &self.target_actor,
            &self.target_critic,
            self.config.gamma,
        );
        let n = batch.len() as f64;
        let mut total = Gradients::zeros_like(&self.critic);
        let mut loss = 0.0;
        for (tr, &y) in batch.iter().zip(&targets) {
            let input = critic_input(&tr.obs, tr.action);
            let (q, cache) = self.critic.forward(&input);
            let err = q[0] - y;
            loss += err * err;
            let (g, _) = self.critic.backward(&cache, &[2.0 * err / n]);
            total.add_scaled(&g, 1.0);
        }
        adam_step(
            &mut self.critic,
            &total,
            &mut self.critic_opt,
            self.config.lr_critic,
        );
        loss / n
    }

    /// The assembled policy gradient over `batch`: the critic's action
    /// gradient chained through the actor, averaged, and negated so that the
    /// minimizing optimizer ascends the critic value. Also returns the mean
    /// critic value at the actor's current actions.
    pub fn policy_gradient(&self, batch: &[Transition]) -> (Gradients, f64) {
        assert!(!batch.is_empty(), "empty batch");
        let n = batch.len() as f64;
        let mut total = Gradients::zeros_like(&self.actor);
        let mut mean_q = 0.0;
        for tr in batch {
            let (action, actor_cache) = self.actor.forward(&tr.obs);
            let input = critic_input(&tr.obs, [action[0], action[1]]);
            let (q, critic_cache) = self.critic.forward(&input);
            mean_q += q[0];
            let (_, input_grad) = self.critic.backward(&critic_cache, &[1.0]);
            let grad_action = &input_grad[self.obs_dim..self.obs_dim + ACTION_DIM];
            let out_grad = [-grad_action[0] / n, -grad_action[1] / n];
            let (g, _) = self.actor.backward(&actor_cache, &out_grad);
            total.add_scaled(&g, 1.0);
        }
        (total, mean_q / n)
    }

    /// Ascend the actor along the critic's action gradient, averaged over
    /// `batch`. The critic is read-only here. Returns the pre-update mean
    /// critic value at the actor's actions.
    pub fn actor_update(&mut self, batch: &[Transition]) -> f64 {
        let (grads, mean_q) = self.policy_gradient(batch);
        adam_step(
            &mut self.actor,
            &grads,
            &mut self.actor_opt,
            self.config.lr_actor,
        );
        mean_q
    }

    /// One full update: sample a batch, update critic then actor, then blend
    /// both target networks. Returns `None` while the buffer is below
    /// max(batch_size, warmup_steps).
    pub fn train_step(&mut self) -> Option<TrainMetrics> {
        if self.buffer.len() < self.config.batch_size.max(self.config.warmup_steps) {
            return None;
        }
        let batch = self
            .buffer
            .sample(&mut self.sample_rng, self.config.batch_size);
        let critic_loss = self.critic_update(&batch);
        let mean_q = self.actor_update(&batch);
        soft_update(&mut self.target_actor, &self.actor, self.config.tau_soft);
        soft_update(&mut self.target_critic, &self.critic, self.config.tau_soft);
        Some(TrainMetrics {
            critic_loss,
            mean_q,
        })
    }

    /// Write the agent checkpoint: manifest plus the four network blocks.
    pub fn save(&self, path: &Path, scaler: ObsScaler) -> Result<()> {
        std::fs::write(path, agent_checkpoint_bytes(self, scaler))?;
        Ok(())
    }

    /// Rebuild an agent from a checkpoint. The optimizer restarts from
    /// scratch: Adam state is not persisted.
    pub fn restore(config: AgentConfig, seeds: AgentSeeds, ckpt: &AgentCheckpoint) -> Result<Self> {
        let mut agent = Agent::new(ckpt.obs_dim, config, seeds)?;
        for (have, want) in [
            (agent.actor.dims(), ckpt.actor.dims()),
            (agent.critic.dims(), ckpt.critic.dims()),
        ] {
            if have != want {
                return Err(Error::Checkpoint(format!(
                    "checkpoint network dims {want:?} do not match configured {have:?}"
                )));
            }
        }
        agent.actor = ckpt.actor.clone();
        agent.critic = ckpt.critic.clone();
        agent.target_actor = ckpt.target_actor.clone();
        agent.target_critic = ckpt.target_critic.clone();
        Ok(agent)
    }
}

/// Bootstrapped regression targets: y = r + gamma * (1 - done) * Q'(s', mu'(s')).
pub fn critic_targets(
    batch: &[Transition],
    target_actor: &MlpParams,
    target_critic: &MlpParams,
    gamma: f64,
) -> Vec<f64> {
    batch
        .iter()
        .map(|tr| {
            if tr.done {
                tr.reward
            } else {
                let next_action = target_actor.output(&tr.next_obs);
                let q = target_critic.output(&critic_input(
                    &tr.next_obs,
                    [next_action[0], next_action[1]],
                ));
                tr.reward + gamma * q[0]
            }
        })
        .collect()
}

/// Blend every target parameter toward the online network:
/// theta' <- tau * theta + (1 - tau) * theta'.
pub fn soft_update(target: &mut MlpParams, online: &MlpParams, tau: f64) {
    assert_eq!(target.layers.len(), online.layers.len(), "shape mismatch");
    for (t, o) in target.layers.iter_mut().zip(&online.layers) {
        for (tv, ov) in t.weights.data_mut().iter_mut().zip(o.weights.data()) {
            *tv = tau * ov + (1.0 - tau) * *tv;
        }
        for (tv, ov) in t.bias.iter_mut().zip(&o.bias) {
            *tv = tau * ov + (1.0 - tau) * *tv;
        }
    }
}

/// A frozen actor plus the observation scaling it was trained with; the
/// policy-gradient sub-controller of the hybrid stack.
#[derive(Debug, Clone)]
pub struct Policy {
    pub actor: MlpParams,
    pub scaler: ObsScaler,
}

impl Policy {
    pub fn act(&self, obs: &Observation) -> Action {
        let x = self.scaler.policy_input(obs);
        let y = self.actor.output(&x);
        Action::new(y[0], y[1]).clamped()
    }
}

/// Parsed agent checkpoint: manifest plus the four networks.
#[derive(Debug, Clone)]
pub struct AgentCheckpoint {
    pub obs_dim: usize,
    pub scaler: ObsScaler,
    pub actor: MlpParams,
    pub critic: MlpParams,
    pub target_actor: MlpParams,
    pub target_critic: MlpParams,
}

impl AgentCheckpoint {
    pub fn policy(&self) -> Policy {
        Policy {
            actor: self.actor.clone(),
            scaler: self.scaler,
        }
    }
}

const AGENT_MAGIC: [u8; 8] = *b"DFAGENT\0";
const AGENT_VERSION: u8 = 1;

fn agent_checkpoint_bytes(agent: &Agent, scaler: ObsScaler) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&AGENT_MAGIC);
    out.push(AGENT_VERSION);
    out.extend_from_slice(&(agent.obs_dim as u32).to_le_bytes());
    out.extend_from_slice(&scaler.v_max.to_le_bytes());
    out.extend_from_slice(&scaler.d_max.to_le_bytes());
    for net in [
        &agent.actor,
        &agent.critic,
        &agent.target_actor,
        &agent.target_critic,
    ] {
        out.extend_from_slice(&crate::nn::to_bytes(net));
    }
    out
}

/// Load and validate an agent checkpoint file.
pub fn load_agent_checkpoint(path: &Path) -> Result<AgentCheckpoint> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Checkpoint(format!("cannot read {}: {e}", path.display())))?;
    let header = 8 + 1 + 4 + 8 + 8;
    if bytes.len() < header {
        return Err(Error::Checkpoint("truncated agent checkpoint".into()));
    }
    if bytes[..8] != AGENT_MAGIC {
        return Err(Error::Checkpoint("bad agent checkpoint magic".into()));
    }
    if bytes[8] != AGENT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported agent checkpoint version {}",
            bytes[8]
        )));
    }
    let obs_dim = u32::from_le_bytes(bytes[9..13].try_into().unwrap()) as usize;
    let v_max = f64::from_le_bytes(bytes[13..21].try_into().unwrap());
    let d_max = f64::from_le_bytes(bytes[21..29].try_into().unwrap());
    let mut offset = header;
    let mut nets = Vec::with_capacity(4);
    for _ in 0..4 {
        let (net, used) = crate::nn::parse_block(&bytes[offset..])?;
        offset += used;
        nets.push(net);
    }
    if offset != bytes.len() {
        return Err(Error::Checkpoint("trailing bytes in agent checkpoint".into()));
    }
    let target_critic = nets.pop().unwrap();
    let target_actor = nets.pop().unwrap();
    let critic = nets.pop().unwrap();
    let actor = nets.pop().unwrap();
    if actor.input_dim() != obs_dim || actor.output_dim() != ACTION_DIM {
        return Err(Error::Checkpoint(format!(
            "actor shape {:?} does not match manifest obs_dim {obs_dim}",
            actor.dims()
        )));
    }
    if critic.input_dim() != obs_dim + ACTION_DIM || critic.output_dim() != 1 {
        return Err(Error::Checkpoint(format!(
            "critic shape {:?} does not match manifest obs_dim {obs_dim}",
            critic.dims()
        )));
    }
    Ok(AgentCheckpoint {
        obs_dim,
        scaler: ObsScaler { v_max, d_max },
        actor,
        critic,
        target_actor,
        target_critic,
    })
}
