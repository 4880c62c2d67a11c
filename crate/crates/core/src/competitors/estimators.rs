use crate::dataset::Transition;
use crate::error::{Error, Result};
use crate::mdp::StochasticPolicy;

/// Off-policy return estimator used by HCPI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    ImportanceSampling,
    WeightedIs,
    PerDecisionIs,
    #[default]
    WeightedPerDecisionIs,
    DoublyRobust,
}

impl Estimator {
    pub const ALL: [Estimator; 5] = [
        Estimator::ImportanceSampling,
        Estimator::WeightedIs,
        Estimator::PerDecisionIs,
        Estimator::WeightedPerDecisionIs,
        Estimator::DoublyRobust,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::ImportanceSampling => "importance_sampling",
            Estimator::WeightedIs => "weighted_is",
            Estimator::PerDecisionIs => "per_decision_is",
            Estimator::WeightedPerDecisionIs => "weighted_per_decision_is",
            Estimator::DoublyRobust => "doubly_robust",
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid("estimator", format!("unknown estimator {s:?}")))
    }
}

pub fn discounted_return(trajectory: &[Transition], gamma: f64) -> f64 {
    let mut discount = 1.0;
    let mut total = 0.0;
    for tr in trajectory {
        total += discount * tr.reward;
        discount *= gamma;
    }
    total
}

/// Cumulative ratios `prod_{u <= t} pi(a_u|x_u) / pi_b(a_u|x_u)` along a trajectory.
fn cumulative_ratios(
    trajectory: &[Transition],
    candidate: &StochasticPolicy,
    behavior: &StochasticPolicy,
) -> Result<Vec<f64>> {
    let mut weight = 1.0;
    trajectory
        .iter()
        .map(|tr| {
            let b = behavior.prob(tr.state, tr.action);
            if b <= 0.0 {
                return Err(Error::ZeroBaselineProbability {
                    state: tr.state,
                    action: tr.action,
                });
            }
            weight *= candidate.prob(tr.state, tr.action) / b;
            Ok(weight)
        })
        .collect()
}

/// One return estimate of `candidate` per trajectory generated by `behavior`.
///
/// For the weighted estimators each trajectory's contribution is scaled by
/// `n / sum of weights`, so the mean of the list is the weighted estimate.
/// `q_hat` (row-major `|X| x |A|`, Q of the candidate in some model) is
/// required by the doubly robust estimator and ignored otherwise.
pub fn is_estimates(
    trajectories: &[Vec<Transition>],
    candidate: &StochasticPolicy,
    behavior: &StochasticPolicy,
    gamma: f64,
    estimator: Estimator,
    q_hat: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if candidate.n_states() != behavior.n_states() || candidate.n_actions() != behavior.n_actions()
    {
        return Err(Error::DimensionMismatch {
            what: "candidate policy",
            expected: behavior.n_states() * behavior.n_actions(),
            found: candidate.n_states() * candidate.n_actions(),
        });
    }
    for tr in trajectories.iter().flatten() {
        if tr.state >= behavior.n_states() || tr.action >= behavior.n_actions() {
            return Err(Error::invalid(
                "trajectories",
                format!(
                    "pair ({}, {}) outside the policy tables",
                    tr.state, tr.action
                ),
            ));
        }
    }
    let ratios = trajectories
        .iter()
        .map(|t| cumulative_ratios(t, candidate, behavior))
        .collect::<Result<Vec<_>>>()?;
    let n = trajectories.len() as f64;

    let estimates = match estimator {
        Estimator::ImportanceSampling => trajectories
            .iter()
            .zip(&ratios)
            .map(|(t, w)| w.last().copied().unwrap_or(1.0) * discounted_return(t, gamma))
            .collect(),
        Estimator::WeightedIs => {
            let weights: Vec<f64> = ratios
                .iter()
                .map(|w| w.last().copied().unwrap_or(1.0))
                .collect();
            let total: f64 = weights.iter().sum();
            trajectories
                .iter()
                .zip(&weights)
                .map(|(t, &w)| {
                    if total > 0.0 {
                        n * w / total * discounted_return(t, gamma)
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        Estimator::PerDecisionIs => trajectories
            .iter()
            .zip(&ratios)
            .map(|(t, w)| {
                let mut discount = 1.0;
                let mut total = 0.0;
                for (tr, rho) in t.iter().zip(w) {
                    total += discount * rho * tr.reward;
                    discount *= gamma;
                }
                total
            })
            .collect(),
        Estimator::WeightedPerDecisionIs => {
            // Finished trajectories keep their last weight in the normaliser.
            let horizon = trajectories.iter().map(Vec::len).max().unwrap_or(0);
            let weight_at = |w: &Vec<f64>, t: usize| {
                if w.is_empty() {
                    1.0
                } else {
                    w[t.min(w.len() - 1)]
                }
            };
            let normalisers: Vec<f64> = (0..horizon)
                .map(|t| ratios.iter().map(|w| weight_at(w, t)).sum())
                .collect();
            trajectories
                .iter()
                .zip(&ratios)
                .map(|(traj, w)| {
                    let mut discount = 1.0;
                    let mut total = 0.0;
                    for (t, (tr, rho)) in traj.iter().zip(w).enumerate() {
                        if normalisers[t] > 0.0 {
                            total += discount * n * rho / normalisers[t] * tr.reward;
                        }
                        discount *= gamma;
                    }
                    total
                })
                .collect()
        }
        Estimator::DoublyRobust => {
            let q_hat = q_hat.ok_or_else(|| {
                Error::invalid("q_hat", "doubly robust estimator needs a Q table")
            })?;
            let na = candidate.n_actions();
            if q_hat.len() != candidate.n_states() * na {
                return Err(Error::DimensionMismatch {
                    what: "q_hat",
                    expected: candidate.n_states() * na,
                    found: q_hat.len(),
                });
            }
            let v_hat = |x: usize| -> f64 {
                candidate
                    .row(x)
                    .iter()
                    .zip(&q_hat[x * na..(x + 1) * na])
                    .map(|(p, q)| p * q)
                    .sum()
            };
            trajectories
                .iter()
                .zip(&ratios)
                .map(|(traj, w)| {
                    let mut discount = 1.0;
                    let mut previous = 1.0;
                    let mut total = 0.0;
                    for (tr, &rho) in traj.iter().zip(w) {
                        let q = q_hat[tr.state * na + tr.action];
                        total += discount * (rho * (tr.reward - q) + previous * v_hat(tr.state));
                        previous = rho;
                        discount *= gamma;
                    }
                    total
                })
                .collect()
        }
    };
    Ok(estimates)
}
