use crate::dataset::Transition;
use crate::mdp::{CountTable, StochasticPolicy};
use crate::spibb::bootstrapped_backup;

/// Action values over an arbitrary state space with `0..n_actions` actions.
pub trait QFunction<S> {
    fn q(&self, state: &S, action: usize) -> f64;
}

/// Action probabilities over an arbitrary state space.
pub trait ActionPolicy<S> {
    fn prob(&self, state: &S, action: usize) -> f64;
}

/// Generalized visit counts.
pub trait PseudoCounter<S> {
    fn pseudo_count(&self, state: &S, action: usize) -> f64;
}

/// One observed transition over an arbitrary state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<S> {
    pub state: S,
    pub action: usize,
    pub reward: f64,
    pub next_state: S,
    pub done: bool,
}

impl From<&Transition> for Sample<usize> {
    fn from(tr: &Transition) -> Self {
        Self {
            state: tr.state,
            action: tr.action,
            reward: tr.reward,
            next_state: tr.next_state,
            done: tr.done,
        }
    }
}

/// Row-major `|X| x |A|` table viewed as a [`QFunction`].
#[derive(Debug, Clone, Copy)]
pub struct TabularQ<'a> {
    pub values: &'a [f64],
    pub n_actions: usize,
}

impl QFunction<usize> for TabularQ<'_> {
    fn q(&self, state: &usize, action: usize) -> f64 {
        self.values[state * self.n_actions + action]
    }
}

impl ActionPolicy<usize> for StochasticPolicy {
    fn prob(&self, state: &usize, action: usize) -> f64 {
        StochasticPolicy::prob(self, *state, action)
    }
}

impl PseudoCounter<usize> for CountTable {
    fn pseudo_count(&self, state: &usize, action: usize) -> f64 {
        self.get(*state, action) as f64
    }
}

/// Model-free SPIBB regression targets
///
/// `y = r + gamma * [sum_{a' in B} pi_b(a'|x') Q(x',a') + (sum_{a' not in B} pi_b(a'|x')) max_{a' not in B} Q(x',a')]`
///
/// where `(x', a')` is bootstrapped when its pseudo-count is below
/// `n_wedge`. Terminal transitions get `y = r`.
pub fn spibb_targets<S, Q, P, C>(
    batch: &[Sample<S>],
    n_actions: usize,
    q: &Q,
    baseline: &P,
    counter: &C,
    n_wedge: f64,
    gamma: f64,
) -> Vec<f64>
where
    Q: QFunction<S> + ?Sized,
    P: ActionPolicy<S> + ?Sized,
    C: PseudoCounter<S> + ?Sized,
{
    let mut q_row = vec![0.0; n_actions];
    let mut pi_row = vec![0.0; n_actions];
    let mut boot_row = vec![false; n_actions];
    batch
        .iter()
        .map(|sample| {
            if sample.done {
                return sample.reward;
            }
            let next = &sample.next_state;
            for a in 0..n_actions {
                q_row[a] = q.q(next, a);
                pi_row[a] = baseline.prob(next, a);
                boot_row[a] = counter.pseudo_count(next, a) < n_wedge;
            }
            sample.reward + gamma * bootstrapped_backup(&q_row, &pi_row, &boot_row)
        })
        .collect()
}
