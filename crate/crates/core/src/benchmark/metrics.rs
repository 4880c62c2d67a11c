use crate::error::{Error, Result};

/// `(rho - rho_b) / (rho* - rho_b)`: 0 at the baseline, 1 at the optimum.
pub fn normalized_perf(rho: f64, rho_b: f64, rho_star: f64) -> Result<f64> {
    if !(rho_star > rho_b) {
        return Err(Error::invalid(
            "rho_star",
            format!("optimal performance {rho_star} must exceed baseline performance {rho_b}"),
        ));
    }
    Ok((rho - rho_b) / (rho_star - rho_b))
}

/// Mean of the `ceil(fraction * n)` smallest values.
pub fn cvar(values: &[f64], fraction: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("values", "CVaR of an empty list"));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid(
            "fraction",
            format!("{fraction} not in (0, 1]"),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Guard against 0.3 * 10 = 3.0000000000000004 rounding up to 4.
    let k = ((fraction * values.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    let k = k.min(values.len());
    Ok(sorted[..k].iter().sum::<f64>() / k as f64)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}
