use nalgebra::{DMatrix, DVector};

use super::{FiniteMdp, StochasticPolicy, ValueFunctions};
use crate::error::{Error, Result};

/// Largest `|X| * |A|` solved by a direct linear solve; larger models iterate.
pub const DIRECT_SOLVE_LIMIT: usize = 10_000;

/// Maximum Bellman residual accepted from the solvers.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 1_000_000;
const MAX_POLICY_ITERATIONS: usize = 10_000;
const TIE_TOLERANCE: f64 = 1e-12;

/// Exact values of `policy` in `mdp`. Terminal states have value 0.
pub fn policy_evaluation(mdp: &FiniteMdp, policy: &StochasticPolicy) -> Result<ValueFunctions> {
    policy.check_shape(mdp.n_states(), mdp.n_actions())?;
    let v = if mdp.n_states() * mdp.n_actions() <= DIRECT_SOLVE_LIMIT {
        direct_state_values(mdp, policy)?
    } else {
        iterative_state_values(mdp, policy, vec![0.0; mdp.n_states()])?
    };
    let mut values = values_from_v(mdp, policy, v);
    let mut residual = expectation_residual(mdp, policy, &values.q);
    if residual >= RESIDUAL_TOLERANCE {
        // Polish an inaccurate direct solve with sweeps from its solution.
        let v = iterative_state_values(mdp, policy, values.v.clone())?;
        values = values_from_v(mdp, policy, v);
        residual = expectation_residual(mdp, policy, &values.q);
        if residual >= RESIDUAL_TOLERANCE {
            return Err(Error::NotConverged {
                what: "policy evaluation",
                iterations: MAX_SWEEPS,
                residual,
            });
        }
    }
    Ok(values)
}

/// `rho(pi, M) = V(x_0)`.
pub fn performance(mdp: &FiniteMdp, policy: &StochasticPolicy) -> Result<f64> {
    Ok(policy_evaluation(mdp, policy)?.v[mdp.initial_state()])
}

/// Deterministic optimal policy and its values, by policy iteration.
///
/// Ties between actions are broken towards the lowest action index.
pub fn solve_optimal(mdp: &FiniteMdp) -> Result<(StochasticPolicy, ValueFunctions)> {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let mut actions = vec![0usize; ns];
    let mut iterations = 0;
    let values = loop {
        let policy = StochasticPolicy::deterministic(na, &actions)?;
        let values = policy_evaluation(mdp, &policy)?;
        let mut changed = false;
        for x in 0..ns {
            if mdp.is_terminal(x) {
                continue;
            }
            let row = values.q_row(x);
            let best = max_of(row);
            // Only switch on a strict improvement so the iteration cannot cycle.
            if best > row[actions[x]] + TIE_TOLERANCE {
                actions[x] = lowest_near_max(row, best);
                changed = true;
            }
        }
        iterations += 1;
        if !changed {
            break values;
        }
        if iterations >= MAX_POLICY_ITERATIONS {
            return Err(Error::NotConverged {
                what: "optimal policy iteration",
                iterations,
                residual: bellman_optimality_residual(mdp, &values.q),
            });
        }
    };

    for (x, action) in actions.iter_mut().enumerate() {
        *action = if mdp.is_terminal(x) {
            0
        } else {
            let row = values.q_row(x);
            lowest_near_max(row, max_of(row))
        };
    }
    let policy = StochasticPolicy::deterministic(na, &actions)?;
    let values = policy_evaluation(mdp, &policy)?;
    let residual = bellman_optimality_residual(mdp, &values.q);
    if residual >= RESIDUAL_TOLERANCE {
        return Err(Error::NotConverged {
            what: "optimal policy iteration",
            iterations,
            residual,
        });
    }
    Ok((policy, values))
}

/// `max |Q - T* Q|` over non-terminal pairs.
pub fn bellman_optimality_residual(mdp: &FiniteMdp, q: &[f64]) -> f64 {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let greedy: Vec<f64> = (0..ns)
        .map(|x| {
            if mdp.is_terminal(x) {
                0.0
            } else {
                max_of(&q[x * na..(x + 1) * na])
            }
        })
        .collect();
    let mut residual: f64 = 0.0;
    for x in (0..ns).filter(|&x| !mdp.is_terminal(x)) {
        for a in 0..na {
            let backup = mdp.reward(x, a)
                + mdp.gamma()
                    * mdp
                        .successors(x, a)
                        .map(|(y, p)| p * greedy[y])
                        .sum::<f64>();
            residual = residual.max((q[x * na + a] - backup).abs());
        }
    }
    residual
}

pub(crate) fn max_of(row: &[f64]) -> f64 {
    row.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn lowest_near_max(row: &[f64], best: f64) -> usize {
    row.iter()
        .position(|&q| q >= best - TIE_TOLERANCE)
        .expect("row is non-empty")
}

fn policy_reward(mdp: &FiniteMdp, policy: &StochasticPolicy, x: usize) -> f64 {
    (0..mdp.n_actions())
        .map(|a| policy.prob(x, a) * mdp.reward(x, a))
        .sum()
}

fn direct_state_values(mdp: &FiniteMdp, policy: &StochasticPolicy) -> Result<Vec<f64>> {
    let ns = mdp.n_states();
    let gamma = mdp.gamma();
    let mut system = DMatrix::<f64>::identity(ns, ns);
    let mut rhs = DVector::<f64>::zeros(ns);
    for x in (0..ns).filter(|&x| !mdp.is_terminal(x)) {
        rhs[x] = policy_reward(mdp, policy, x);
        for a in 0..mdp.n_actions() {
            let pa = policy.prob(x, a);
            if pa == 0.0 {
                continue;
            }
            for (y, p) in mdp.successors(x, a) {
                system[(x, y)] -= gamma * pa * p;
            }
        }
    }
    let solution = system.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok(solution.iter().copied().collect())
}

fn iterative_state_values(
    mdp: &FiniteMdp,
    policy: &StochasticPolicy,
    mut v: Vec<f64>,
) -> Result<Vec<f64>> {
    let ns = mdp.n_states();
    let gamma = mdp.gamma();
    let rewards: Vec<f64> = (0..ns)
        .map(|x| {
            if mdp.is_terminal(x) {
                0.0
            } else {
                policy_reward(mdp, policy, x)
            }
        })
        .collect();
    let mut next = vec![0.0; ns];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        residual = 0.0;
        for x in 0..ns {
            next[x] = if mdp.is_terminal(x) {
                0.0
            } else {
                rewards[x]
                    + gamma
                        * (0..mdp.n_actions())
                            .filter(|&a| policy.prob(x, a) > 0.0)
                            .map(|a| {
                                policy.prob(x, a)
                                    * mdp.successors(x, a).map(|(y, p)| p * v[y]).sum::<f64>()
                            })
                            .sum::<f64>()
            };
            residual = residual.max((next[x] - v[x]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if residual < 0.1 * RESIDUAL_TOLERANCE {
            return Ok(v);
        }
    }
    Err(Error::NotConverged {
        what: "policy evaluation",
        iterations: MAX_SWEEPS,
        residual,
    })
}

fn values_from_v(mdp: &FiniteMdp, policy: &StochasticPolicy, v: Vec<f64>) -> ValueFunctions {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let mut q = vec![0.0; ns * na];
    for x in (0..ns).filter(|&x| !mdp.is_terminal(x)) {
        for a in 0..na {
            q[x * na + a] = mdp.reward(x, a)
                + mdp.gamma() * mdp.successors(x, a).map(|(y, p)| p * v[y]).sum::<f64>();
        }
    }
    let v = (0..ns)
        .map(|x| (0..na).map(|a| policy.prob(x, a) * q[x * na + a]).sum())
        .collect();
    ValueFunctions::new(na, v, q)
}

fn expectation_residual(mdp: &FiniteMdp, policy: &StochasticPolicy, q: &[f64]) -> f64 {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let v: Vec<f64> = (0..ns)
        .map(|x| (0..na).map(|a| policy.prob(x, a) * q[x * na + a]).sum())
        .collect();
    let mut residual: f64 = 0.0;
    for x in (0..ns).filter(|&x| !mdp.is_terminal(x)) {
        for a in 0..na {
            let backup = mdp.reward(x, a)
                + mdp.gamma() * mdp.successors(x, a).map(|(y, p)| p * v[y]).sum::<f64>();
            residual = residual.max((q[x * na + a] - backup).abs());
        }
    }
    residual
}
