use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Transition, TransitionDataset};
use crate::error::{Error, Result};
use crate::mdp::{FiniteMdp, StochasticPolicy};

pub const DEFAULT_EPISODE_CAP: usize = 1000;

/// Inverse-CDF draw from a distribution; rounding falls back to the last
/// positive entry.
pub(crate) fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            cumulative += p;
            last = i;
            if u < cumulative {
                return i;
            }
        }
    }
    last
}

/// Samples `n_trajectories` episodes of `behavior` in `mdp` from its
/// initial state. Episodes stop at a terminal state or after `episode_cap`
/// steps (then the last transition has `done = false`).
pub fn generate_dataset(
    mdp: &FiniteMdp,
    behavior: &StochasticPolicy,
    n_trajectories: usize,
    seed: u64,
    episode_cap: usize,
) -> Result<TransitionDataset> {
    behavior.check_shape(mdp.n_states(), mdp.n_actions())?;
    if episode_cap == 0 {
        return Err(Error::invalid("episode_cap", "must be positive"));
    }
    if mdp.is_terminal(mdp.initial_state()) {
        return Err(Error::TerminalState(format!(
            "initial state {}",
            mdp.initial_state()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trajectories = (0..n_trajectories)
        .map(|_| {
            let mut episode = Vec::new();
            let mut x = mdp.initial_state();
            for _ in 0..episode_cap {
                let a = sample_index(behavior.row(x), &mut rng);
                if mdp.is_exit(x, a) {
                    // Exit pairs end the episode with their reward.
                    episode.push(Transition {
                        state: x,
                        action: a,
                        reward: mdp.reward(x, a),
                        next_state: x,
                        done: true,
                    });
                    break;
                }
                let y = sample_index(mdp.transition_row(x, a), &mut rng);
                let done = mdp.is_terminal(y);
                episode.push(Transition {
                    state: x,
                    action: a,
                    reward: mdp.outcome_reward(x, a, y),
                    next_state: y,
                    done,
                });
                if done {
                    break;
                }
                x = y;
            }
            episode
        })
        .collect();
    Ok(TransitionDataset::new(trajectories, seed))
}
