use super::BootstrapSet;
use crate::dataset::TransitionDataset;
use crate::error::{Error, Result};
use crate::mdp::{CountTable, ModelSpec, StochasticPolicy};

const TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 100_000;

/// Per visited pair: mean reward and the empirical distribution of
/// non-terminal successors.
struct PairStatistics {
    mean_reward: f64,
    successors: Vec<(usize, f64)>,
}

/// Fixed point of the model-free SPIBB target
///
/// `y = r + gamma * [sum_{a' in B} pi_b(a'|x') Q(x',a') + (sum_{a' not in B} pi_b(a'|x')) max_{a' not in B} Q(x',a')]`
///
/// averaged over the samples of each visited pair, computed with
/// synchronous sweeps. Unvisited pairs stay at `unvisited_value`; states
/// reached by a terminal transition have value 0.
pub fn spibb_q_fixed_point(
    dataset: &TransitionDataset,
    baseline: &StochasticPolicy,
    boot: &BootstrapSet,
    spec: &ModelSpec,
    unvisited_value: f64,
) -> Result<Vec<f64>> {
    let (ns, na) = (spec.n_states, spec.n_actions);
    if !unvisited_value.is_finite() {
        return Err(Error::invalid("unvisited_value", "must be finite"));
    }
    if dataset.is_empty() {
        return Err(Error::invalid(
            "dataset",
            "fixed point needs at least one transition",
        ));
    }
    baseline.check_shape(ns, na)?;
    if boot.n_states() != ns || boot.n_actions() != na {
        return Err(Error::DimensionMismatch {
            what: "bootstrap set",
            expected: ns * na,
            found: boot.n_states() * boot.n_actions(),
        });
    }
    let counts = CountTable::from_dataset(dataset, ns, na)?;

    let mut terminal = vec![false; ns];
    let mut reward_sum = vec![0.0; ns * na];
    let mut next_counts = vec![0u64; ns * na * ns];
    for tr in dataset.transitions() {
        let sa = tr.state * na + tr.action;
        reward_sum[sa] += tr.reward;
        if tr.done {
            terminal[tr.next_state] = true;
        } else {
            next_counts[sa * ns + tr.next_state] += 1;
        }
    }

    let mut stats: Vec<Option<PairStatistics>> = Vec::with_capacity(ns * na);
    for x in 0..ns {
        for a in 0..na {
            let sa = x * na + a;
            let n = counts.get(x, a);
            stats.push((n > 0 && !terminal[x]).then(|| {
                let n = n as f64;
                PairStatistics {
                    mean_reward: reward_sum[sa] / n,
                    successors: (0..ns)
                        .filter(|&y| next_counts[sa * ns + y] > 0 && !terminal[y])
                        .map(|y| (y, next_counts[sa * ns + y] as f64 / n))
                        .collect(),
                }
            }));
        }
    }

    let mut q: Vec<f64> = (0..ns * na)
        .map(|sa| {
            if terminal[sa / na] || stats[sa].is_some() {
                0.0
            } else {
                unvisited_value
            }
        })
        .collect();
    let mut next_q = q.clone();
    let mut backup = vec![0.0; ns];
    let mut change = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        for (x, b) in backup.iter_mut().enumerate() {
            *b = if terminal[x] {
                0.0
            } else {
                bootstrapped_backup(&q[x * na..(x + 1) * na], baseline.row(x), boot.row(x))
            };
        }
        change = 0.0;
        for (sa, pair) in stats.iter().enumerate() {
            if let Some(pair) = pair {
                let value = pair.mean_reward
                    + spec.gamma
                        * pair
                            .successors
                            .iter()
                            .map(|&(y, p)| p * backup[y])
                            .sum::<f64>();
                change = change.max((value - q[sa]).abs());
                next_q[sa] = value;
            }
        }
        std::mem::swap(&mut q, &mut next_q);
        if change < TOLERANCE {
            return Ok(q);
        }
    }
    Err(Error::NotConverged {
        what: "model-free SPIBB fixed point",
        iterations: MAX_SWEEPS,
        residual: change,
    })
}

/// Value of the next state under the SPIBB target: baseline-weighted on
/// bootstrapped actions, greedy with the remaining mass elsewhere.
pub(crate) fn bootstrapped_backup(q_row: &[f64], baseline_row: &[f64], boot_row: &[bool]) -> f64 {
    let mut value = 0.0;
    let mut free_mass = 0.0;
    let mut best = f64::NEG_INFINITY;
    for a in 0..q_row.len() {
        if boot_row[a] {
            value += baseline_row[a] * q_row[a];
        } else {
            free_mass += baseline_row[a];
            best = best.max(q_row[a]);
        }
    }
    if best.is_finite() {
        value += free_mass * best;
    }
    value
}
