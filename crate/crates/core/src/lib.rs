//! Safe policy improvement with baseline bootstrapping (SPIBB) for batch
//! reinforcement learning, its competitor algorithms, environment
//! generators, and the mean/CVaR benchmark protocol.

pub mod benchmark;
pub mod competitors;
pub mod dataset;
pub mod envgen;
pub mod error;
pub mod helicopter;
pub mod mdp;
pub mod spibb;

pub use dataset::{Transition, TransitionDataset};
pub use error::{Error, Result};
pub use mdp::{FiniteMdp, StochasticPolicy, ValueFunctions};
