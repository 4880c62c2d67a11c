//! The continuous helicopter navigation task, its Euclidean pseudo-counts,
//! and model-free SPIBB targets against abstract Q-functions and policies.

mod dataset;
mod env;
mod pseudo_count;
mod targets;

pub use dataset::{
    generate_heli_dataset, read_heli_dataset, write_heli_dataset, HeliDataset, HeliTransition,
    UniformHeliPolicy,
};
pub use env::{
    heli_initial_state, heli_step, landing_reward, HeliAction, HeliState, CRASH_REWARD,
    MAX_LANDING_REWARD, N_HELI_ACTIONS, SIGMA_S, SIGMA_V, TAU,
};
pub use pseudo_count::{pseudo_count, EuclideanPseudoCounter};
pub use targets::{spibb_targets, ActionPolicy, PseudoCounter, QFunction, Sample, TabularQ};
