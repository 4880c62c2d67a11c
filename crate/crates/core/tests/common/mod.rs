//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spibb_core::envgen::{generate_dataset, generate_random_mdp, GenerationConfig};
use spibb_core::{FiniteMdp, StochasticPolicy, TransitionDataset};

/// Full-support random policy from normalized exponential draws.
pub fn random_policy(n_states: usize, n_actions: usize, rng: &mut impl Rng) -> StochasticPolicy {
    let mut probs = Vec::with_capacity(n_states * n_actions);
    for _ in 0..n_states {
        let w: Vec<f64> = (0..n_actions)
            .map(|_| rng.random_range(0.05..1.0))
            .collect();
        let total: f64 = w.iter().sum();
        probs.extend(w.iter().map(|v| v / total));
    }
    StochasticPolicy::new(n_states, n_actions, probs).expect("normalized rows")
}

/// A small random MDP, a random full-support baseline and a dataset it collected.
pub struct Instance {
    pub mdp: FiniteMdp,
    pub baseline: StochasticPolicy,
    pub dataset: TransitionDataset,
}

pub fn small_instance(
    seed: u64,
    max_states: usize,
    n_actions: usize,
    max_trajectories: usize,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_states = rng.random_range(3..=max_states);
    let config = GenerationConfig {
        n_states,
        n_actions,
        connectivity: rng.random_range(1..=n_states.min(4)),
        seed,
        ..GenerationConfig::default()
    };
    let mdp = generate_random_mdp(&config).expect("valid config");
    let baseline = random_policy(n_states, n_actions, &mut rng);
    let n = rng.random_range(1..=max_trajectories);
    let dataset = generate_dataset(&mdp, &baseline, n, rng.random(), 200).expect("valid inputs");
    Instance {
        mdp,
        baseline,
        dataset,
    }
}
