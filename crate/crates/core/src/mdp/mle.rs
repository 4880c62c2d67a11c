use super::{FiniteMdp, MdpParts};
use crate::dataset::TransitionDataset;
use crate::error::{Error, Result};

/// What the learner knows about the environment besides the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub n_states: usize,
    pub n_actions: usize,
    pub gamma: f64,
    pub r_max: f64,
    pub initial_state: usize,
}

impl ModelSpec {
    pub fn of(mdp: &FiniteMdp) -> Self {
        Self {
            n_states: mdp.n_states(),
            n_actions: mdp.n_actions(),
            gamma: mdp.gamma(),
            r_max: mdp.r_max(),
            initial_state: mdp.initial_state(),
        }
    }

    pub fn v_max(&self) -> f64 {
        self.r_max / (1.0 - self.gamma)
    }
}

/// Visit counts `N_D(x, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n_states: usize,
    n_actions: usize,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn new(n_states: usize, n_actions: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n_states * n_actions {
            return Err(Error::DimensionMismatch {
                what: "count table",
                expected: n_states * n_actions,
                found: counts.len(),
            });
        }
        Ok(Self {
            n_states,
            n_actions,
            counts,
        })
    }

    pub fn from_dataset(
        dataset: &TransitionDataset,
        n_states: usize,
        n_actions: usize,
    ) -> Result<Self> {
        let mut counts = vec![0u64; n_states * n_actions];
        for tr in dataset.transitions() {
            if tr.state >= n_states || tr.action >= n_actions || tr.next_state >= n_states {
                return Err(Error::invalid(
                    "dataset",
                    format!(
                        "transition ({}, {}, {}) outside a {n_states}x{n_actions} model",
                        tr.state, tr.action, tr.next_state
                    ),
                ));
            }
            counts[tr.state * n_actions + tr.action] += 1;
        }
        Ok(Self {
            n_states,
            n_actions,
            counts,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, x: usize, a: usize) -> u64 {
        self.counts[x * self.n_actions + a]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Maximum-likelihood model of the dataset with pessimistic unvisited pairs.
///
/// Visited pairs get empirical frequencies and mean rewards. Unvisited
/// non-terminal pairs become exit pairs paying `-V_max`, so their value is
/// `-V_max` under every policy. States reached by a `done` transition are
/// terminal.
pub fn build_mle_mdp(
    dataset: &TransitionDataset,
    spec: &ModelSpec,
) -> Result<(FiniteMdp, CountTable)> {
    build_mle_mdp_with(dataset, spec, -spec.v_max())
}

/// [`build_mle_mdp`] with unvisited pairs worth `unvisited_value` instead,
/// which must lie in `[-V_max, V_max]`.
pub fn build_mle_mdp_with(
    dataset: &TransitionDataset,
    spec: &ModelSpec,
    unvisited_value: f64,
) -> Result<(FiniteMdp, CountTable)> {
    if !(unvisited_value.abs() <= spec.v_max()) {
        return Err(Error::invalid(
            "unvisited_value",
            format!("{unvisited_value} outside [-V_max, V_max]"),
        ));
    }
    let (ns, na) = (spec.n_states, spec.n_actions);
    let counts = CountTable::from_dataset(dataset, ns, na)?;
    let mut next_counts = vec![0u64; ns * na * ns];
    let mut reward_sum = vec![0.0; ns * na];
    let mut terminal = vec![false; ns];
    for tr in dataset.transitions() {
        let sa = tr.state * na + tr.action;
        next_counts[sa * ns + tr.next_state] += 1;
        reward_sum[sa] += tr.reward;
        if tr.done {
            terminal[tr.next_state] = true;
        }
    }

    let mut transition = vec![0.0; ns * na * ns];
    let mut reward = vec![0.0; ns * na];
    for x in (0..ns).filter(|&x| !terminal[x]) {
        for a in 0..na {
            let sa = x * na + a;
            let n = counts.get(x, a);
            if n == 0 {
                reward[sa] = unvisited_value;
                continue;
            }
            let n = n as f64;
            reward[sa] = reward_sum[sa] / n;
            for y in 0..ns {
                let c = next_counts[sa * ns + y];
                if c > 0 {
                    transition[sa * ns + y] = c as f64 / n;
                }
            }
        }
    }

    let mdp = FiniteMdp::from_parts(MdpParts {
        n_states: ns,
        n_actions: na,
        transition,
        reward,
        outcome_reward: None,
        gamma: spec.gamma,
        initial_state: spec.initial_state,
        terminal,
        r_max: spec.r_max,
    })?;
    Ok((mdp, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Transition;
    use crate::mdp::{policy_evaluation, StochasticPolicy};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> ModelSpec {
        ModelSpec {
            n_states: 3,
            n_actions: 2,
            gamma: 0.95,
            r_max: 1.0,
            initial_state: 0,
        }
    }

    fn tr(state: usize, action: usize, reward: f64, next_state: usize, done: bool) -> Transition {
        Transition {
            state,
            action,
            reward,
            next_state,
            done,
        }
    }

    #[test]
    fn single_sample() {
        let dataset = TransitionDataset::new(vec![vec![tr(0, 1, 1.0, 2, false)]], 0);
        let (mle, counts) = build_mle_mdp(&dataset, &spec()).unwrap();
        assert_eq!(counts.get(0, 1), 1);
        assert_eq!(mle.transition(0, 1, 2), 1.0);
        assert_eq!(mle.reward(0, 1), 1.0);
    }

    #[test]
    fn empty_dataset_is_all_pessimistic() {
        let (mle, counts) = build_mle_mdp(&TransitionDataset::default(), &spec()).unwrap();
        assert_eq!(counts.total(), 0);
        for x in 0..3 {
            for a in 0..2 {
                assert!(mle.is_exit(x, a));
                assert!((mle.reward(x, a) + 20.0).abs() < 1e-12);
            }
        }
        let values = policy_evaluation(&mle, &StochasticPolicy::uniform(3, 2)).unwrap();
        assert!(values.q.iter().all(|q| (q + 20.0).abs() < 1e-12));
    }

    #[test]
    fn unvisited_value_is_configurable() {
        let dataset = TransitionDataset::new(vec![vec![tr(0, 1, 1.0, 2, true)]], 0);
        let (mle, _) = build_mle_mdp_with(&dataset, &spec(), 0.0).unwrap();
        let values = policy_evaluation(&mle, &StochasticPolicy::uniform(3, 2)).unwrap();
        assert_eq!(values.q[0], 0.0);
        assert_eq!(values.q[1], 1.0);
        assert!(build_mle_mdp_with(&dataset, &spec(), -20.5).is_err());
        assert!(build_mle_mdp_with(&dataset, &spec(), f64::NAN).is_err());
    }

    #[test]
    fn bernoulli_frequencies_converge() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let episode = (0..1000)
            .map(|_| {
                let next = if rng.random::<f64>() < 0.75 { 1 } else { 2 };
                tr(0, 0, 0.0, next, false)
            })
            .collect();
        let dataset = TransitionDataset::new(vec![episode], 11);
        let (mle, counts) = build_mle_mdp(&dataset, &spec()).unwrap();
        assert_eq!(counts.total(), 1000);
        assert!((mle.transition(0, 0, 1) - 0.75).abs() < 0.05);
        assert!((mle.transition(0, 0, 2) - 0.25).abs() < 0.05);
    }

    #[test]
    fn done_marks_terminal() {
        let dataset = TransitionDataset::new(vec![vec![tr(0, 0, 1.0, 2, true)]], 0);
        let (mle, _) = build_mle_mdp(&dataset, &spec()).unwrap();
        assert!(mle.is_terminal(2));
        assert!(!mle.is_terminal(1));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let dataset = TransitionDataset::new(vec![vec![tr(5, 0, 0.0, 0, false)]], 0);
        assert!(build_mle_mdp(&dataset, &spec()).is_err());
    }
}
