//! Shared fixtures for the criterion benchmarks.

use spibb_core::benchmark::{GRIDWORLD_BASELINE_SEED, GRIDWORLD_BASELINE_TARGET};
use spibb_core::envgen::{
    baseline_for_target, generate_dataset, make_gridworld, DEFAULT_EPISODE_CAP,
};
use spibb_core::{FiniteMdp, StochasticPolicy, TransitionDataset};

pub struct Fixture {
    pub mdp: FiniteMdp,
    pub baseline: StochasticPolicy,
    pub dataset: TransitionDataset,
}

/// The gridworld, its benchmark baseline and a baseline dataset of `n` trajectories.
pub fn gridworld_fixture(n: usize) -> Fixture {
    let mdp = make_gridworld();
    let baseline = baseline_for_target(&mdp, GRIDWORLD_BASELINE_TARGET, GRIDWORLD_BASELINE_SEED)
        .expect("baseline");
    let dataset = generate_dataset(&mdp, &baseline, n, 1, DEFAULT_EPISODE_CAP).expect("dataset");
    Fixture {
        mdp,
        baseline,
        dataset,
    }
}
