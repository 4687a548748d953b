//! Labeled seed derivation: every randomized component gets its own stream
//! from the master seed, so changing one stream never perturbs another.

use crate::ddpg::AgentSeeds;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic per-component seed: a stable label hash folded into the
/// master seed through an avalanche mixer.
pub fn rng_split(master_seed: u64, stream_label: &str) -> u64 {
    splitmix64(splitmix64(master_seed) ^ fnv1a(stream_label.as_bytes()))
}

/// The agent's four streams, derived from the master seed.
pub fn agent_seeds(master_seed: u64) -> AgentSeeds {
    AgentSeeds {
        actor_init: rng_split(master_seed, "actor-init"),
        critic_init: rng_split(master_seed, "critic-init"),
        noise: rng_split(master_seed, "noise"),
        sampling: rng_split(master_seed, "sampling"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_inputs_same_stream() {
        assert_eq!(rng_split(42, "noise"), rng_split(42, "noise"));
    }

    #[test]
    fn labels_in_use_do_not_collide() {
        let labels = [
            "actor-init",
            "critic-init",
            "noise",
            "sampling",
            "env",
            "baseline",
        ];
        let mut seen = std::collections::HashSet::new();
        for master in [0u64, 1, 42, u64::MAX] {
            for label in labels {
                assert!(
                    seen.insert(rng_split(master, label)),
                    "collision at master {master}, label {label}"
                );
            }
        }
    }

    #[test]
    fn streams_are_isolated() {
        // Two masters differ; the derived init seeds differ, but a given
        // label's seed depends only on (master, label).
        let a = agent_seeds(7);
        let b = agent_seeds(7);
        assert_eq!(a.actor_init, b.actor_init);
        assert_eq!(a.noise, b.noise);
        let c = agent_seeds(8);
        assert_ne!(a.actor_init, c.actor_init);
    }
}
