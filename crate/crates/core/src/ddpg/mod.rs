//! Off-policy deterministic-policy-gradient learner: replay buffer,
//! exploration noise, critic regression, actor ascent, and soft target
//! tracking. The update order inside one training step is fixed:
//! critic, then actor, then both targets.

mod agent;
mod noise;
mod replay;

pub use agent::{
    critic_targets, load_agent_checkpoint, soft_update, Agent, AgentCheckpoint, AgentConfig,
    AgentSeeds, Policy, TrainMetrics,
};
pub use noise::{ExplorationNoise, NoiseKind};
pub use replay::{ReplayBuffer, Transition};
