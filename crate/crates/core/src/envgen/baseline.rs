use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mdp::{performance, solve_optimal, FiniteMdp, StochasticPolicy, ValueFunctions};

/// Accuracy of the softened policy's performance.
pub const SOFTENING_TOLERANCE: f64 = 1e-4;
const MAX_BISECTIONS: usize = 200;
/// Probability mass moved away from the optimal action per randomization step.
pub const RANDOMIZATION_STEP: f64 = 0.1;
const MAX_RANDOMIZATION_STEPS: usize = 1_000_000;
const LN_TEMPERATURE_RANGE: (f64, f64) = (-25.0, 25.0);

/// Performance anchors of a baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineAnchors {
    pub rho_star: f64,
    pub rho_uniform: f64,
}

impl BaselineAnchors {
    pub fn of(mdp: &FiniteMdp) -> Result<Self> {
        let (optimal, _) = solve_optimal(mdp)?;
        Ok(Self {
            rho_star: performance(mdp, &optimal)?,
            rho_uniform: performance(
                mdp,
                &StochasticPolicy::uniform(mdp.n_states(), mdp.n_actions()),
            )?,
        })
    }

    /// `eta rho* + (1 - eta) rho_uniform`.
    pub fn target(&self, eta: f64) -> f64 {
        eta * self.rho_star + (1.0 - eta) * self.rho_uniform
    }
}

/// Boltzmann policy `pi(a|x) ∝ exp(Q(x,a) / temperature)`; terminal rows are uniform.
pub fn softmax_policy(
    mdp: &FiniteMdp,
    values: &ValueFunctions,
    temperature: f64,
) -> StochasticPolicy {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let mut probs = Vec::with_capacity(ns * na);
    for x in 0..ns {
        if mdp.is_terminal(x) {
            probs.extend(std::iter::repeat_n(1.0 / na as f64, na));
            continue;
        }
        let row = values.q_row(x);
        let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = row
            .iter()
            .map(|q| ((q - best) / temperature).exp())
            .collect();
        let total: f64 = weights.iter().sum();
        probs.extend(weights.iter().map(|w| w / total));
    }
    StochasticPolicy::from_probs_unchecked(ns, na, probs)
}

/// Softmax over `Q*` whose performance is within `1e-4` of `target`,
/// found by bisection on the log-temperature. Returns the policy and its
/// temperature.
pub fn soften(
    mdp: &FiniteMdp,
    q_star: &ValueFunctions,
    target: f64,
) -> Result<(StochasticPolicy, f64)> {
    let rho_at = |ln_t: f64| -> Result<(StochasticPolicy, f64)> {
        let policy = softmax_policy(mdp, q_star, ln_t.exp());
        let rho = performance(mdp, &policy)?;
        Ok((policy, rho))
    };
    // Performance decreases with temperature: lo is greedy-like, hi uniform-like.
    let (mut lo, mut hi) = LN_TEMPERATURE_RANGE;
    let (greedy, rho_lo) = rho_at(lo)?;
    if (rho_lo - target).abs() < SOFTENING_TOLERANCE {
        return Ok((greedy, lo.exp()));
    }
    let (_, rho_hi) = rho_at(hi)?;
    if !(rho_lo > target && target > rho_hi) {
        return Err(Error::Bisection(format!(
            "target {target} outside the softmax range [{rho_hi}, {rho_lo}]"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let (policy, rho) = rho_at(mid)?;
        if (rho - target).abs() < SOFTENING_TOLERANCE {
            return Ok((policy, mid.exp()));
        }
        if rho > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Bisection(format!(
        "no temperature within {SOFTENING_TOLERANCE} of {target} after {MAX_BISECTIONS} iterations"
    )))
}

/// Moves `0.1` probability mass from the optimal action of random states to
/// random other actions until performance drops to `target` or below.
pub fn randomize(
    mdp: &FiniteMdp,
    policy: StochasticPolicy,
    optimal_actions: &[usize],
    target: f64,
    rng: &mut impl Rng,
) -> Result<StochasticPolicy> {
    let (ns, na) = (mdp.n_states(), mdp.n_actions());
    let free: Vec<usize> = (0..ns).filter(|&x| !mdp.is_terminal(x)).collect();
    let mut probs = policy.probs().to_vec();
    let mut rho = performance(mdp, &policy)?;
    let mut steps = 0;
    while rho > target {
        if na < 2
            || free
                .iter()
                .all(|&x| probs[x * na + optimal_actions[x]] <= 0.0)
        {
            return Err(Error::invalid(
                "target",
                format!("performance {rho} cannot be randomized down to {target}"),
            ));
        }
        if steps >= MAX_RANDOMIZATION_STEPS {
            return Err(Error::NotConverged {
                what: "baseline randomization",
                iterations: steps,
                residual: rho - target,
            });
        }
        let x = free[rng.random_range(0..free.len())];
        let best = optimal_actions[x];
        let mut other = rng.random_range(0..na - 1);
        if other >= best {
            other += 1;
        }
        let moved = RANDOMIZATION_STEP.min(probs[x * na + best]);
        probs[x * na + best] -= moved;
        probs[x * na + other] += moved;
        rho = performance(
            mdp,
            &StochasticPolicy::from_probs_unchecked(ns, na, probs.clone()),
        )?;
        steps += 1;
    }
    Ok(StochasticPolicy::from_probs_unchecked(ns, na, probs))
}

/// Baseline with performance at most `target`: softmax over `Q*` aimed at
/// `(target + rho*) / 2`, then randomized down to `target`.
pub fn baseline_for_target(mdp: &FiniteMdp, target: f64, seed: u64) -> Result<StochasticPolicy> {
    let (optimal, q_star) = solve_optimal(mdp)?;
    let rho_star = q_star.v[mdp.initial_state()];
    if target >= rho_star {
        return Err(Error::invalid(
            "target",
            format!("{target} is not below rho* = {rho_star}"),
        ));
    }
    let (soft, _) = soften(mdp, &q_star, 0.5 * (target + rho_star))?;
    let na = mdp.n_actions();
    let actions: Vec<usize> = (0..mdp.n_states())
        .map(|x| (0..na).find(|&a| optimal.prob(x, a) == 1.0).unwrap_or(0))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    randomize(mdp, soft, &actions, target, &mut rng)
}

/// Baseline of quality `eta`, targeting `eta rho* + (1 - eta) rho_uniform`.
pub fn generate_baseline(mdp: &FiniteMdp, eta: f64, seed: u64) -> Result<StochasticPolicy> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid("eta", format!("{eta} not in (0, 1)")));
    }
    let anchors = BaselineAnchors::of(mdp)?;
    baseline_for_target(mdp, anchors.target(eta), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envgen::make_gridworld;

    #[test]
    fn softmax_limits() {
        let mdp = make_gridworld();
        let (_, q) = solve_optimal(&mdp).unwrap();
        let hot = softmax_policy(&mdp, &q, 1e9);
        assert!(hot.max_abs_diff(&StochasticPolicy::uniform(25, 4)) < 1e-6);
        let cold = softmax_policy(&mdp, &q, 1e-9);
        assert!(cold
            .probs()
            .iter()
            .all(|p| *p < 1e-6 || *p > 1.0 - 1e-6 || (*p - 0.25).abs() < 1e-12));
    }

    #[test]
    fn gridworld_baseline_hits_target() {
        let mdp = make_gridworld();
        let baseline = baseline_for_target(&mdp, 0.4, 1).unwrap();
        let rho = performance(&mdp, &baseline).unwrap();
        assert!(rho <= 0.4 && rho > 0.38, "{rho}");
    }

    #[test]
    fn eta_zero_target_is_uniform_performance() {
        let mdp = make_gridworld();
        let anchors = BaselineAnchors::of(&mdp).unwrap();
        assert_eq!(anchors.target(0.0), anchors.rho_uniform);
        assert!(generate_baseline(&mdp, 0.0, 0).is_err());
    }
}
