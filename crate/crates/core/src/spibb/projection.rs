use crate::error::{Error, Result};
use crate::mdp::check_distribution;

fn check_row(q_row: &[f64], baseline_row: &[f64], boot_row: &[bool]) -> Result<()> {
    if q_row.len() != baseline_row.len() || boot_row.len() != baseline_row.len() {
        return Err(Error::DimensionMismatch {
            what: "projection row",
            expected: baseline_row.len(),
            found: q_row.len().min(boot_row.len()),
        });
    }
    if q_row.iter().any(|q| !q.is_finite()) {
        return Err(Error::invalid("q_row", "values must be finite"));
    }
    check_distribution("baseline", 0, baseline_row)
}

/// Greedy projection on `Pi_b`: bootstrapped actions keep their baseline
/// probability, the remaining mass goes to the best non-bootstrapped action.
pub fn project_pi_b(q_row: &[f64], baseline_row: &[f64], boot_row: &[bool]) -> Result<Vec<f64>> {
    check_row(q_row, baseline_row, boot_row)?;
    let mut out = vec![0.0; q_row.len()];
    let mut free_mass = 0.0;
    let mut best: Option<usize> = None;
    for a in 0..q_row.len() {
        if boot_row[a] {
            out[a] = baseline_row[a];
        } else {
            free_mass += baseline_row[a];
            if best.is_none_or(|b| q_row[a] > q_row[b]) {
                best = Some(a);
            }
        }
    }
    match best {
        Some(b) => out[b] = free_mass,
        None => return Ok(baseline_row.to_vec()),
    }
    Ok(out)
}

/// Greedy projection on `Pi_<=b`: walk actions by decreasing value,
/// capping bootstrapped ones at their baseline probability; the first
/// non-bootstrapped action absorbs whatever mass is left.
pub fn project_pi_leq_b(
    q_row: &[f64],
    baseline_row: &[f64],
    boot_row: &[bool],
) -> Result<Vec<f64>> {
    check_row(q_row, baseline_row, boot_row)?;
    let mut order: Vec<usize> = (0..q_row.len()).collect();
    // Stable: equal values keep index order.
    order.sort_by(|&a, &b| q_row[b].total_cmp(&q_row[a]));

    let mut out = vec![0.0; q_row.len()];
    let mut remaining = 1.0;
    for a in order {
        if boot_row[a] && baseline_row[a] < remaining {
            out[a] = baseline_row[a];
            remaining -= baseline_row[a];
        } else {
            out[a] = remaining;
            break;
        }
    }
    Ok(out)
}
