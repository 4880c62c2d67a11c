//! Finite MDPs, stochastic policies, and exact dynamic-programming solvers.
//!
//! Tables are stored flat in row-major order: rewards and policies are
//! indexed `state * n_actions + action`, transitions
//! `(state * n_actions + action) * n_states + next_state`.
//!
//! A transition row may be all zeros. For a terminal state this means the
//! state absorbs with value 0. For a non-terminal state it marks an *exit*
//! pair: taking the action collects its reward and ends the episode. Exit
//! pairs are how the maximum-likelihood model encodes unvisited pairs with a
//! value of exactly `-V_max`.

mod mle;
mod solve;

pub use mle::{build_mle_mdp, build_mle_mdp_with, CountTable, ModelSpec};
pub use solve::{
    bellman_optimality_residual, performance, policy_evaluation, solve_optimal, DIRECT_SOLVE_LIMIT,
    RESIDUAL_TOLERANCE,
};

use crate::error::{Error, Result};

/// Tolerance on row sums of transition and policy tables.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// The raw tables of a [`FiniteMdp`], used to build or rebuild one.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpParts {
    pub n_states: usize,
    pub n_actions: usize,
    pub transition: Vec<f64>,
    /// Expected immediate reward per (state, action).
    pub reward: Vec<f64>,
    /// Optional reward per (state, action, next state) used when sampling
    /// episodes. When present, `reward` must be its expectation.
    pub outcome_reward: Option<Vec<f64>>,
    pub gamma: f64,
    pub initial_state: usize,
    pub terminal: Vec<bool>,
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMdp {
    parts: MdpParts,
}

impl FiniteMdp {
    pub fn from_parts(parts: MdpParts) -> Result<Self> {
        let MdpParts {
            n_states: ns,
            n_actions: na,
            ..
        } = parts;
        if ns == 0 {
            return Err(Error::invalid("n_states", "must be positive"));
        }
        if na == 0 {
            return Err(Error::invalid("n_actions", "must be positive"));
        }
        if !(0.0..1.0).contains(&parts.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("{} not in [0, 1)", parts.gamma),
            ));
        }
        if !(parts.r_max.is_finite() && parts.r_max >= 0.0) {
            return Err(Error::invalid(
                "r_max",
                format!("{} is not a finite bound", parts.r_max),
            ));
        }
        check_len("transition", ns * na * ns, parts.transition.len())?;
        check_len("reward", ns * na, parts.reward.len())?;
        check_len("terminal", ns, parts.terminal.len())?;
        if let Some(outcome) = &parts.outcome_reward {
            check_len("outcome_reward", ns * na * ns, outcome.len())?;
        }
        if parts.initial_state >= ns {
            return Err(Error::invalid(
                "initial_state",
                format!("{} out of range for {} states", parts.initial_state, ns),
            ));
        }

        let v_max = parts.r_max / (1.0 - parts.gamma);
        for x in 0..ns {
            for a in 0..na {
                let sa = x * na + a;
                let row = &parts.transition[sa * ns..(sa + 1) * ns];
                if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::NotADistribution {
                        what: "transition",
                        row: sa,
                        sum: f64::NAN,
                    });
                }
                let sum: f64 = row.iter().sum();
                let zero = row.iter().all(|p| *p == 0.0);
                if parts.terminal[x] {
                    if !zero {
                        return Err(Error::invalid(
                            "transition",
                            format!("terminal state {x} must have all-zero rows"),
                        ));
                    }
                    continue;
                }
                if !zero && (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                    return Err(Error::NotADistribution {
                        what: "transition",
                        row: sa,
                        sum,
                    });
                }
                let r = parts.reward[sa];
                let bound = if zero { v_max } else { parts.r_max };
                if !r.is_finite() || r.abs() > bound * (1.0 + 1e-12) + 1e-12 {
                    return Err(Error::invalid(
                        "reward",
                        format!("|R({x},{a})| = {} exceeds bound {bound}", r.abs()),
                    ));
                }
            }
        }
        if let Some(outcome) = &parts.outcome_reward {
            if let Some(r) = outcome
                .iter()
                .find(|r| !r.is_finite() || r.abs() > parts.r_max * (1.0 + 1e-12) + 1e-12)
            {
                return Err(Error::invalid(
                    "outcome_reward",
                    format!("{r} exceeds r_max {}", parts.r_max),
                ));
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &MdpParts {
        &self.parts
    }

    pub fn into_parts(self) -> MdpParts {
        self.parts
    }

    pub fn n_states(&self) -> usize {
        self.parts.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.parts.n_actions
    }

    pub fn gamma(&self) -> f64 {
        self.parts.gamma
    }

    pub fn initial_state(&self) -> usize {
        self.parts.initial_state
    }

    pub fn r_max(&self) -> f64 {
        self.parts.r_max
    }

    /// Bound on the absolute value of any return: `R_max / (1 - gamma)`.
    pub fn v_max(&self) -> f64 {
        self.parts.r_max / (1.0 - self.parts.gamma)
    }

    pub fn is_terminal(&self, x: usize) -> bool {
        self.parts.terminal[x]
    }

    pub fn terminal_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_states()).filter(|&x| self.parts.terminal[x])
    }

    pub fn transition_row(&self, x: usize, a: usize) -> &[f64] {
        let ns = self.parts.n_states;
        let sa = x * self.parts.n_actions + a;
        &self.parts.transition[sa * ns..(sa + 1) * ns]
    }

    pub fn transition(&self, x: usize, a: usize, next: usize) -> f64 {
        self.transition_row(x, a)[next]
    }

    pub fn reward(&self, x: usize, a: usize) -> f64 {
        self.parts.reward[x * self.parts.n_actions + a]
    }

    pub fn rewards(&self) -> &[f64] {
        &self.parts.reward
    }

    /// Reward observed when `(x, a)` leads to `next`.
    pub fn outcome_reward(&self, x: usize, a: usize, next: usize) -> f64 {
        match &self.parts.outcome_reward {
            Some(table) => {
                let ns = self.parts.n_states;
                table[(x * self.parts.n_actions + a) * ns + next]
            }
            None => self.reward(x, a),
        }
    }

    /// True when `(x, a)` is a non-terminal pair with an all-zero row.
    pub fn is_exit(&self, x: usize, a: usize) -> bool {
        !self.is_terminal(x) && self.transition_row(x, a).iter().all(|p| *p == 0.0)
    }

    pub(crate) fn successors(&self, x: usize, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.transition_row(x, a)
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

/// A per-state distribution over actions.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticPolicy {
    n_states: usize,
    n_actions: usize,
    probs: Vec<f64>,
}

impl StochasticPolicy {
    pub fn new(n_states: usize, n_actions: usize, probs: Vec<f64>) -> Result<Self> {
        check_len("policy", n_states * n_actions, probs.len())?;
        for (x, row) in probs.chunks(n_actions.max(1)).enumerate() {
            check_distribution("policy", x, row)?;
        }
        Ok(Self {
            n_states,
            n_actions,
            probs,
        })
    }

    pub(crate) fn from_probs_unchecked(n_states: usize, n_actions: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), n_states * n_actions);
        Self {
            n_states,
            n_actions,
            probs,
        }
    }

    pub fn uniform(n_states: usize, n_actions: usize) -> Self {
        let p = 1.0 / n_actions as f64;
        Self::from_probs_unchecked(n_states, n_actions, vec![p; n_states * n_actions])
    }

    /// One-hot policy taking `actions[x]` in state `x`.
    pub fn deterministic(n_actions: usize, actions: &[usize]) -> Result<Self> {
        let mut probs = vec![0.0; actions.len() * n_actions];
        for (x, &a) in actions.iter().enumerate() {
            if a >= n_actions {
                return Err(Error::invalid(
                    "action",
                    format!("{a} out of range in state {x}"),
                ));
            }
            probs[x * n_actions + a] = 1.0;
        }
        Ok(Self::from_probs_unchecked(actions.len(), n_actions, probs))
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.probs[x * self.n_actions..(x + 1) * self.n_actions]
    }

    pub fn prob(&self, x: usize, a: usize) -> f64 {
        self.probs[x * self.n_actions + a]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `(1 - alpha) * self + alpha * other`.
    pub fn mixture(&self, other: &StochasticPolicy, alpha: f64) -> Result<Self> {
        check_len("policy", self.probs.len(), other.probs.len())?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid("alpha", format!("{alpha} not in [0, 1]")));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (1.0 - alpha) * p + alpha * q)
            .collect();
        Ok(Self::from_probs_unchecked(
            self.n_states,
            self.n_actions,
            probs,
        ))
    }

    pub fn max_abs_diff(&self, other: &StochasticPolicy) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_shape(&self, n_states: usize, n_actions: usize) -> Result<()> {
        check_len("policy states", n_states, self.n_states)?;
        check_len("policy actions", n_actions, self.n_actions)
    }
}

pub(crate) fn check_distribution(what: &'static str, row_index: usize, row: &[f64]) -> Result<()> {
    let sum: f64 = row.iter().sum();
    if row.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::NotADistribution {
            what,
            row: row_index,
            sum,
        });
    }
    Ok(())
}

/// State and action values of a policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunctions {
    n_actions: usize,
    pub v: Vec<f64>,
    pub q: Vec<f64>,
}

impl ValueFunctions {
    pub fn new(n_actions: usize, v: Vec<f64>, q: Vec<f64>) -> Self {
        debug_assert_eq!(v.len() * n_actions, q.len());
        Self { n_actions, v, q }
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn v(&self, x: usize) -> f64 {
        self.v[x]
    }

    pub fn q(&self, x: usize, a: usize) -> f64 {
        self.q[x * self.n_actions + a]
    }

    pub fn q_row(&self, x: usize) -> &[f64] {
        &self.q[x * self.n_actions..(x + 1) * self.n_actions]
    }
}
