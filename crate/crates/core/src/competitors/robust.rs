use crate::error::{Error, Result};
use crate::mdp::{policy_evaluation, CountTable, FiniteMdp, StochasticPolicy, ValueFunctions};
use crate::spibb::error_epsilon;

/// Diameter of the probability simplex in L1.
const MAX_ERROR: f64 = 2.0;
const TIE_TOLERANCE: f64 = 1e-12;
const MAX_POLICY_ITERATIONS: usize = 1000;
const MAX_ADVERSARY_ITERATIONS: usize = 10_000;

/// `e(x, a) = min(2, error_epsilon(N_D(x, a), delta_rob))`, row-major.
pub fn robust_error_table(counts: &CountTable, delta_rob: f64) -> Result<Vec<f64>> {
    if !(delta_rob > 0.0 && delta_rob < 1.0) {
        return Err(Error::invalid(
            "delta_rob",
            format!("{delta_rob} not in (0, 1)"),
        ));
    }
    let (ns, na) = (counts.n_states(), counts.n_actions());
    Ok(counts
        .as_slice()
        .iter()
        .map(|&n| error_epsilon(n, delta_rob, ns, na).min(MAX_ERROR))
        .collect())
}

/// Worst distribution within L1 distance `e` of `p_hat` for successor
/// values `values`: up to `e / 2` mass moves onto the lowest-value state
/// (lowest index among ties), taken from the highest-value successors first.
pub fn l1_worst_case(p_hat: &[f64], values: &[f64], e: f64) -> Vec<f64> {
    let mut p = p_hat.to_vec();
    let total: f64 = p.iter().sum();
    if total == 0.0 || e <= 0.0 {
        return p;
    }
    let worst = (0..values.len()).fold(0, |w, y| if values[y] < values[w] { y } else { w });
    let moved = (e / 2.0).min(total - p[worst]);
    if moved <= 0.0 {
        return p;
    }
    p[worst] += moved;
    let mut order: Vec<usize> = (0..p.len())
        .filter(|&y| y != worst && p_hat[y] > 0.0)
        .collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut remaining = moved;
    for y in order {
        let take = remaining.min(p[y]);
        p[y] -= take;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    p
}

fn check_errors(mle: &FiniteMdp, errors: &[f64]) -> Result<()> {
    let expected = mle.n_states() * mle.n_actions();
    if errors.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "robust error table",
            expected,
            found: errors.len(),
        });
    }
    if let Some(e) = errors.iter().find(|e| !(**e >= 0.0)) {
        return Err(Error::invalid(
            "errors",
            format!("{e} is not a nonnegative radius"),
        ));
    }
    Ok(())
}

/// Model with worst-case rewards `R_hat - e R_max` clamped to `[-R_max, R_max]`.
/// Exit pairs keep their reward.
fn pessimistic_rewards(mle: &FiniteMdp, errors: &[f64]) -> FiniteMdp {
    let mut parts = mle.parts().clone();
    let (ns, na) = (mle.n_states(), mle.n_actions());
    let r_max = mle.r_max();
    for x in (0..ns).filter(|&x| !mle.is_terminal(x)) {
        for a in (0..na).filter(|&a| !mle.is_exit(x, a)) {
            let sa = x * na + a;
            parts.reward[sa] =
                (parts.reward[sa] - errors[sa].min(MAX_ERROR) * r_max).clamp(-r_max, r_max);
        }
    }
    FiniteMdp::from_parts(parts).expect("clamped rewards keep the model valid")
}

/// `model` with every row replaced by its L1 worst case against `v`.
fn adversarial_model(
    model: &FiniteMdp,
    nominal: &FiniteMdp,
    errors: &[f64],
    v: &[f64],
) -> Result<FiniteMdp> {
    let mut parts = model.parts().clone();
    let (ns, na) = (model.n_states(), model.n_actions());
    for x in (0..ns).filter(|&x| !model.is_terminal(x)) {
        for a in 0..na {
            let sa = x * na + a;
            let row = l1_worst_case(nominal.transition_row(x, a), v, errors[sa].min(MAX_ERROR));
            parts.transition[sa * ns..(sa + 1) * ns].copy_from_slice(&row);
        }
    }
    FiniteMdp::from_parts(parts)
}

/// Worst-case values of `policy` over the rectangular L1 uncertainty set
/// around `mle` with radii `errors`.
///
/// The adversary's problem is itself solved by policy iteration: fix the
/// worst-case model for the current values, evaluate exactly, repeat until
/// the values stop decreasing.
pub fn robust_evaluation(
    mle: &FiniteMdp,
    errors: &[f64],
    policy: &StochasticPolicy,
) -> Result<ValueFunctions> {
    check_errors(mle, errors)?;
    let pessimistic = pessimistic_rewards(mle, errors);
    robust_evaluation_in(&pessimistic, mle, errors, policy)
}

fn robust_evaluation_in(
    pessimistic: &FiniteMdp,
    nominal: &FiniteMdp,
    errors: &[f64],
    policy: &StochasticPolicy,
) -> Result<ValueFunctions> {
    let mut values = policy_evaluation(pessimistic, policy)?;
    for _ in 0..MAX_ADVERSARY_ITERATIONS {
        let model = adversarial_model(pessimistic, nominal, errors, &values.v)?;
        let next = policy_evaluation(&model, policy)?;
        let decrease = values
            .v
            .iter()
            .zip(&next.v)
            .map(|(old, new)| old - new)
            .fold(0.0, f64::max);
        values = next;
        if decrease <= TIE_TOLERANCE {
            return Ok(values);
        }
    }
    Err(Error::NotConverged {
        what: "robust policy evaluation",
        iterations: MAX_ADVERSARY_ITERATIONS,
        residual: f64::NAN,
    })
}

/// Robust policy iteration with radii `errors` (row-major, clamped to 2).
pub fn robust_mdp_with_errors(mle: &FiniteMdp, errors: &[f64]) -> Result<StochasticPolicy> {
    check_errors(mle, errors)?;
    let (ns, na) = (mle.n_states(), mle.n_actions());
    let pessimistic = pessimistic_rewards(mle, errors);
    let mut actions = vec![0usize; ns];
    let mut previous = StochasticPolicy::deterministic(na, &actions)?;
    for _ in 0..MAX_POLICY_ITERATIONS {
        let policy = StochasticPolicy::deterministic(na, &actions)?;
        let values = robust_evaluation_in(&pessimistic, mle, errors, &policy)?;
        // Robust Q of every action against the policy's worst-case values.
        let model = adversarial_model(&pessimistic, mle, errors, &values.v)?;
        let mut changed = false;
        for x in (0..ns).filter(|&x| !mle.is_terminal(x)) {
            let q: Vec<f64> = (0..na)
                .map(|a| {
                    model.reward(x, a)
                        + model.gamma()
                            * model
                                .transition_row(x, a)
                                .iter()
                                .zip(&values.v)
                                .map(|(p, v)| p * v)
                                .sum::<f64>()
                })
                .collect();
            let best = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if best > q[actions[x]] + TIE_TOLERANCE {
                actions[x] = q
                    .iter()
                    .position(|&v| v >= best - TIE_TOLERANCE)
                    .expect("non-empty");
                changed = true;
            }
        }
        if !changed {
            return Ok(policy);
        }
        previous = policy;
    }
    Err(Error::PolicyIterationCap {
        iterations: MAX_POLICY_ITERATIONS,
        previous: Box::new(previous),
        last: Box::new(StochasticPolicy::deterministic(na, &actions)?),
    })
}

/// Robust MDP policy with `e(x, a)` from the visit counts at confidence `delta_rob`.
pub fn robust_mdp(
    mle: &FiniteMdp,
    counts: &CountTable,
    delta_rob: f64,
) -> Result<StochasticPolicy> {
    robust_mdp_with_errors(mle, &robust_error_table(counts, delta_rob)?)
}
