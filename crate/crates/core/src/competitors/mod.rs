//! Non-SPIBB batch algorithms used as competitors in the benchmarks.

mod estimators;
mod hcpi;
mod robust;
mod stats;

pub use estimators::{discounted_return, is_estimates, Estimator};
pub use hcpi::{hcpi, hcpi_with_behavior, HcpiConfig};
pub use robust::{
    l1_worst_case, robust_error_table, robust_evaluation, robust_mdp, robust_mdp_with_errors,
};
pub use stats::{student_t_quantile, t_test_lower_bound};

use crate::error::{Error, Result};
use crate::mdp::{solve_optimal, CountTable, FiniteMdp, StochasticPolicy};

pub const DEFAULT_KAPPA: f64 = 0.003;
pub const DEFAULT_DELTA_ROB: f64 = 0.1;
pub const DEFAULT_DELTA_HCPI: f64 = 0.9;

/// Optimal policy of the maximum-likelihood model. Unvisited pairs are
/// pessimistic there, so this is batch Q-learning with `-V_max` init.
pub fn basic_rl(mle: &FiniteMdp) -> Result<StochasticPolicy> {
    Ok(solve_optimal(mle)?.0)
}

/// The model with rewards `R_hat(x,a) - kappa / sqrt(N_D(x,a))` on visited pairs.
pub fn ramdp_adjusted_mdp(mle: &FiniteMdp, counts: &CountTable, kappa: f64) -> Result<FiniteMdp> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::invalid(
            "kappa",
            format!("{kappa} must be a nonnegative real"),
        ));
    }
    let na = mle.n_actions();
    let mut parts = mle.parts().clone();
    for x in (0..mle.n_states()).filter(|&x| !mle.is_terminal(x)) {
        for a in 0..na {
            let n = counts.get(x, a);
            if n > 0 && !mle.is_exit(x, a) {
                parts.reward[x * na + a] -= kappa / (n as f64).sqrt();
            }
        }
    }
    parts.r_max += kappa;
    FiniteMdp::from_parts(parts)
}

/// Reward-adjusted MDP: optimal policy after penalising rarely seen pairs.
pub fn ramdp(mle: &FiniteMdp, counts: &CountTable, kappa: f64) -> Result<StochasticPolicy> {
    basic_rl(&ramdp_adjusted_mdp(mle, counts, kappa)?)
}
