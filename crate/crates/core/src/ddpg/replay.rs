//! Bounded FIFO experience store with uniform sampling.

use rand::Rng;
use std::collections::VecDeque;

/// One experienced step: (s, a, r, s', done).
///
/// `done` marks real terminals (collision, leaving the track); step-budget
/// cutoffs are stored with `done = false` so values bootstrap through them.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub action: [f64; 2],
    pub reward: f64,
    pub next_obs: Vec<f64>,
    pub done: bool,
}

/// Bounded FIFO of transitions; inserting beyond capacity evicts exactly the
/// oldest entry.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    storage: VecDeque<Transition>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        ReplayBuffer {
            capacity,
            storage: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    pub fn push(&mut self, t: Transition) {
        debug_assert!((0.0..=2.0).contains(&t.reward), "reward out of range");
        debug_assert!(t.action.iter().all(|a| a.abs() <= 1.0), "action out of range");
        if self.storage.len() == self.capacity {
            self.storage.pop_front();
        }
        self.storage.push_back(t);
    }

    /// Uniform sample with replacement.
    pub fn sample<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<Transition> {
        assert!(!self.storage.is_empty(), "cannot sample an empty buffer");
        (0..n)
            .map(|_| self.storage[rng.gen_range(0..self.storage.len())].clone())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.storage.iter()
    }
}
