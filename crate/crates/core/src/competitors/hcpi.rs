use super::estimators::{discounted_return, is_estimates, Estimator};
use super::stats::t_test_lower_bound;
use super::{basic_rl, DEFAULT_DELTA_HCPI};
use crate::dataset::TransitionDataset;
use crate::error::{Error, Result};
use crate::mdp::{build_mle_mdp, policy_evaluation, ModelSpec, StochasticPolicy};

#[derive(Debug, Clone, PartialEq)]
pub struct HcpiConfig {
    pub delta_hcpi: f64,
    pub estimator: Estimator,
    /// Fraction of trajectories used to train the candidate policy.
    pub train_fraction: f64,
    /// Mixture weights of the baseline in `(1 - alpha) pi_t + alpha pi_b`.
    pub candidate_alphas: Vec<f64>,
}

impl Default for HcpiConfig {
    fn default() -> Self {
        Self {
            delta_hcpi: DEFAULT_DELTA_HCPI,
            estimator: Estimator::default(),
            train_fraction: 0.5,
            candidate_alphas: (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

impl HcpiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_hcpi > 0.0 && self.delta_hcpi <= 1.0) {
            return Err(Error::invalid(
                "delta_hcpi",
                format!("{} not in (0, 1]", self.delta_hcpi),
            ));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::invalid(
                "train_fraction",
                format!("{} not in (0, 1)", self.train_fraction),
            ));
        }
        if let Some(alpha) = self
            .candidate_alphas
            .iter()
            .find(|a| !(0.0..=1.0).contains(*a))
        {
            return Err(Error::invalid(
                "candidate_alphas",
                format!("{alpha} not in [0, 1]"),
            ));
        }
        if !self.candidate_alphas.contains(&1.0) {
            return Err(Error::invalid(
                "candidate_alphas",
                "must contain 1.0 (the baseline itself)",
            ));
        }
        Ok(())
    }
}

/// High-confidence policy improvement over mixtures of a Basic RL policy
/// and the baseline, with the baseline as behavior policy.
///
/// The candidate with the highest t-test lower bound on `D_test` is
/// returned when that bound beats the baseline's mean test return;
/// otherwise the baseline is.
pub fn hcpi(
    dataset: &TransitionDataset,
    baseline: &StochasticPolicy,
    config: &HcpiConfig,
    spec: &ModelSpec,
) -> Result<StochasticPolicy> {
    hcpi_with_behavior(dataset, baseline, baseline, config, spec)
}

/// [`hcpi`] for data collected by `behavior` rather than the baseline. The
/// baseline's reference value is then its ordinary importance-sampling
/// estimate, which reduces to the mean test return when the two coincide.
pub fn hcpi_with_behavior(
    dataset: &TransitionDataset,
    baseline: &StochasticPolicy,
    behavior: &StochasticPolicy,
    config: &HcpiConfig,
    spec: &ModelSpec,
) -> Result<StochasticPolicy> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::invalid(
            "dataset",
            "HCPI needs at least one transition",
        ));
    }
    baseline.check_shape(spec.n_states, spec.n_actions)?;
    behavior.check_shape(spec.n_states, spec.n_actions)?;
    let n_train = (config.train_fraction * dataset.n_trajectories() as f64).round() as usize;
    let (train, test) = dataset.split_at(n_train);
    if test.n_trajectories() < 2 {
        return Ok(baseline.clone());
    }

    let (mle, _) = build_mle_mdp(&train, spec)?;
    let trained = basic_rl(&mle)?;
    let baseline_reference = if baseline == behavior {
        test.trajectories
            .iter()
            .map(|t| discounted_return(t, spec.gamma))
            .sum::<f64>()
    } else {
        is_estimates(
            &test.trajectories,
            baseline,
            behavior,
            spec.gamma,
            Estimator::ImportanceSampling,
            None,
        )?
        .iter()
        .sum::<f64>()
    } / test.n_trajectories() as f64;

    let mut best: Option<(f64, StochasticPolicy)> = None;
    for &alpha in &config.candidate_alphas {
        let candidate = trained.mixture(baseline, alpha)?;
        let q_hat = match config.estimator {
            Estimator::DoublyRobust => Some(policy_evaluation(&mle, &candidate)?.q),
            _ => None,
        };
        let estimates = is_estimates(
            &test.trajectories,
            &candidate,
            behavior,
            spec.gamma,
            config.estimator,
            q_hat.as_deref(),
        )?;
        let bound = t_test_lower_bound(&estimates, config.delta_hcpi)?;
        if best.as_ref().is_none_or(|(b, _)| bound > *b) {
            best = Some((bound, candidate));
        }
    }
    match best {
        Some((bound, candidate)) if bound > baseline_reference => Ok(candidate),
        _ => Ok(baseline.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Transition;

    fn spec() -> ModelSpec {
        ModelSpec {
            n_states: 3,
            n_actions: 2,
            gamma: 0.9,
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

    /// Action 1 always pays 1, action 0 pays 0; every episode is one step.
    fn bandit(n: usize) -> TransitionDataset {
        let episodes = (0..n)
            .map(|i| {
                vec![if i % 2 == 0 {
                    tr(0, 0, 0.0, 2, true)
                } else {
                    tr(0, 1, 1.0, 2, true)
                }]
            })
            .collect();
        TransitionDataset::new(episodes, 0)
    }

    #[test]
    fn rejects_configs_without_baseline_candidate() {
        let config = HcpiConfig {
            candidate_alphas: vec![0.0, 0.5],
            ..HcpiConfig::default()
        };
        assert!(config.validate().is_err());
        assert!(HcpiConfig::default().validate().is_ok());
    }

    #[test]
    fn too_few_test_trajectories_returns_baseline() {
        let baseline = StochasticPolicy::uniform(3, 2);
        let policy = hcpi(&bandit(2), &baseline, &HcpiConfig::default(), &spec()).unwrap();
        assert_eq!(policy, baseline);
    }

    #[test]
    fn improves_on_a_clear_bandit() {
        let baseline = StochasticPolicy::uniform(3, 2);
        let policy = hcpi(&bandit(200), &baseline, &HcpiConfig::default(), &spec()).unwrap();
        assert!(policy.prob(0, 1) > 0.5);
    }

    #[test]
    fn deterministic_rewards_make_the_bound_tight() {
        // With delta = 1 the pure trained policy has the highest raw estimate.
        let baseline = StochasticPolicy::uniform(3, 2);
        let config = HcpiConfig {
            delta_hcpi: 1.0,
            ..HcpiConfig::default()
        };
        let policy = hcpi(&bandit(200), &baseline, &config, &spec()).unwrap();
        assert_eq!(policy.row(0), &[0.0, 1.0]);
    }
}
