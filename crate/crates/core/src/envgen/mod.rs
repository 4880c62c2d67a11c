//! Environments and experiment inputs: the stochastic gridworld, random
//! MDPs, baselines of controlled quality, and trajectory datasets.

mod baseline;
mod gridworld;
mod random_mdp;
mod sampler;

pub use baseline::{
    baseline_for_target, generate_baseline, randomize, soften, softmax_policy, BaselineAnchors,
    RANDOMIZATION_STEP, SOFTENING_TOLERANCE,
};
pub use gridworld::{
    grid_move, make_gridworld, Move, GRID_GAMMA, GRID_GOAL, GRID_SIZE, GRID_START,
};
pub use random_mdp::{generate_random_mdp, random_dynamics, with_goal, GenerationConfig};
pub use sampler::{generate_dataset, DEFAULT_EPISODE_CAP};

pub(crate) use sampler::sample_index;
