//! Safe policy improvement with baseline bootstrapping.
//!
//! Pairs observed fewer than `N_wedge` times form the bootstrapped set. On
//! those pairs the trained policy either copies the baseline (`Pi_b`) or may
//! not exceed it (`Pi_<=b`); everywhere else it is greedy with respect to the
//! maximum-likelihood model.
//!
//! The model SPIBB plans in values unvisited pairs at
//! [`UNVISITED_PAIR_VALUE`]: such a pair is treated as ending the episode
//! with no reward. The `-V_max` convention used by Basic RL would make
//! every state whose baseline puts mass on an unseen action look
//! catastrophic, and `Pi_b` (which must keep that mass) then routes around
//! states the baseline handles well.

mod certificate;
mod fixed_point;
mod projection;

pub use certificate::{error_epsilon, n_wedge_for_zeta, safety_certificate, SafetyCertificate};
pub(crate) use fixed_point::bootstrapped_backup;
pub use fixed_point::spibb_q_fixed_point;
pub use projection::{project_pi_b, project_pi_leq_b};

use crate::dataset::TransitionDataset;
use crate::error::{Error, Result};
use crate::mdp::{
    build_mle_mdp_with, performance, policy_evaluation, CountTable, FiniteMdp, ModelSpec,
    StochasticPolicy, ValueFunctions,
};

/// Value of an unvisited pair in the model SPIBB plans in.
pub const UNVISITED_PAIR_VALUE: f64 = 0.0;

/// Maximum-likelihood model with unvisited pairs worth [`UNVISITED_PAIR_VALUE`].
pub fn build_spibb_model(
    dataset: &TransitionDataset,
    spec: &ModelSpec,
) -> Result<(FiniteMdp, CountTable)> {
    build_mle_mdp_with(dataset, spec, UNVISITED_PAIR_VALUE)
}

/// State-action pairs with too few samples to be trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapSet {
    n_states: usize,
    n_actions: usize,
    n_wedge: u64,
    member: Vec<bool>,
}

impl BootstrapSet {
    pub fn from_members(
        n_states: usize,
        n_actions: usize,
        n_wedge: u64,
        member: Vec<bool>,
    ) -> Result<Self> {
        if member.len() != n_states * n_actions {
            return Err(Error::DimensionMismatch {
                what: "bootstrap set",
                expected: n_states * n_actions,
                found: member.len(),
            });
        }
        Ok(Self {
            n_states,
            n_actions,
            n_wedge,
            member,
        })
    }

    pub fn all(n_states: usize, n_actions: usize) -> Self {
        Self {
            n_states,
            n_actions,
            n_wedge: u64::MAX,
            member: vec![true; n_states * n_actions],
        }
    }

    pub fn empty(n_states: usize, n_actions: usize) -> Self {
        Self {
            n_states,
            n_actions,
            n_wedge: 0,
            member: vec![false; n_states * n_actions],
        }
    }

    pub fn n_wedge(&self) -> u64 {
        self.n_wedge
    }

    pub fn contains(&self, x: usize, a: usize) -> bool {
        self.member[x * self.n_actions + a]
    }

    pub fn row(&self, x: usize) -> &[bool] {
        &self.member[x * self.n_actions..(x + 1) * self.n_actions]
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }
}

/// `member(x, a) <=> N_D(x, a) < n_wedge`.
pub fn compute_bootstrap_set(counts: &CountTable, n_wedge: u64) -> BootstrapSet {
    BootstrapSet {
        n_states: counts.n_states(),
        n_actions: counts.n_actions(),
        n_wedge,
        member: counts.as_slice().iter().map(|&n| n < n_wedge).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpibbVariant {
    /// Copy the baseline on bootstrapped pairs.
    PiB,
    /// Never exceed the baseline on bootstrapped pairs.
    PiLeqB,
}

impl SpibbVariant {
    pub fn project(
        self,
        q_row: &[f64],
        baseline_row: &[f64],
        boot_row: &[bool],
    ) -> Result<Vec<f64>> {
        match self {
            SpibbVariant::PiB => project_pi_b(q_row, baseline_row, boot_row),
            SpibbVariant::PiLeqB => project_pi_leq_b(q_row, baseline_row, boot_row),
        }
    }
}

/// Result of a constrained policy iteration.
#[derive(Debug, Clone)]
pub struct SpibbSolution {
    pub policy: StochasticPolicy,
    pub values: ValueFunctions,
    pub iterations: usize,
    /// `rho(pi^(i), M_hat)` for every evaluated iterate, starting from the baseline.
    pub performance_trace: Vec<f64>,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 1000;
const Q_TOLERANCE: f64 = 1e-10;

/// Policy iteration over `Pi_b` or `Pi_<=b` in the model `mle`, starting
/// from the baseline.
pub fn spibb_policy_iteration(
    mle: &FiniteMdp,
    baseline: &StochasticPolicy,
    boot: &BootstrapSet,
    variant: SpibbVariant,
) -> Result<StochasticPolicy> {
    Ok(spibb_solve(mle, baseline, boot, variant, DEFAULT_MAX_ITERATIONS)?.policy)
}

pub fn spibb_solve(
    mle: &FiniteMdp,
    baseline: &StochasticPolicy,
    boot: &BootstrapSet,
    variant: SpibbVariant,
    max_iterations: usize,
) -> Result<SpibbSolution> {
    let (ns, na) = (mle.n_states(), mle.n_actions());
    baseline.check_shape(ns, na)?;
    if boot.n_states != ns || boot.n_actions != na {
        return Err(Error::DimensionMismatch {
            what: "bootstrap set",
            expected: ns * na,
            found: boot.member.len(),
        });
    }

    let mut policy = baseline.clone();
    let mut values = policy_evaluation(mle, &policy)?;
    let mut trace = vec![values.v[mle.initial_state()]];
    for iteration in 1..=max_iterations {
        let mut probs = Vec::with_capacity(ns * na);
        for x in 0..ns {
            probs.extend(variant.project(values.q_row(x), baseline.row(x), boot.row(x))?);
        }
        let next = StochasticPolicy::new(ns, na, probs)?;
        if next == policy {
            return Ok(SpibbSolution {
                policy,
                values,
                iterations: iteration,
                performance_trace: trace,
            });
        }
        let next_values = policy_evaluation(mle, &next)?;
        let q_change = values
            .q
            .iter()
            .zip(&next_values.q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        trace.push(next_values.v[mle.initial_state()]);
        policy = next;
        values = next_values;
        if q_change < Q_TOLERANCE {
            return Ok(SpibbSolution {
                policy,
                values,
                iterations: iteration,
                performance_trace: trace,
            });
        }
        if iteration == max_iterations {
            let mut probs = Vec::with_capacity(ns * na);
            for x in 0..ns {
                probs.extend(variant.project(values.q_row(x), baseline.row(x), boot.row(x))?);
            }
            return Err(Error::PolicyIterationCap {
                iterations: max_iterations,
                previous: Box::new(policy),
                last: Box::new(StochasticPolicy::new(ns, na, probs)?),
            });
        }
    }
    Err(Error::PolicyIterationCap {
        iterations: max_iterations,
        previous: Box::new(baseline.clone()),
        last: Box::new(policy),
    })
}

/// Trains a SPIBB policy on `mle` and certifies it against the baseline.
pub fn spibb_with_certificate(
    mle: &FiniteMdp,
    counts: &CountTable,
    baseline: &StochasticPolicy,
    n_wedge: u64,
    variant: SpibbVariant,
    delta: f64,
) -> Result<(StochasticPolicy, SafetyCertificate)> {
    let boot = compute_bootstrap_set(counts, n_wedge);
    let policy = spibb_policy_iteration(mle, baseline, &boot, variant)?;
    let rho_spibb = performance(mle, &policy)?;
    let rho_baseline = performance(mle, baseline)?;
    let certificate = safety_certificate(
        n_wedge.max(1),
        delta,
        mle.v_max(),
        mle.gamma(),
        rho_spibb,
        rho_baseline,
        mle.n_states(),
        mle.n_actions(),
    )?;
    Ok((policy, certificate))
}
