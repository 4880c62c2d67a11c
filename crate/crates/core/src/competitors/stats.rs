use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Quantile `t_{p, dof}` of Student's t distribution.
pub fn student_t_quantile(p: f64, dof: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("{p} not in (0, 1)")));
    }
    let dist = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::invalid("dof", e.to_string()))?;
    Ok(dist.inverse_cdf(p))
}

/// One-sided lower confidence bound on the mean:
/// `mean - sigma / sqrt(n) * t_{1 - delta, n - 1}`, with Bessel-corrected
/// `sigma`. `delta = 1` asks for no confidence at all and returns the mean.
pub fn t_test_lower_bound(samples: &[f64], delta: f64) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::invalid(
            "samples",
            format!("need at least 2 samples, got {n}"),
        ));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta", format!("{delta} not in (0, 1]")));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    if delta == 1.0 {
        return Ok(mean);
    }
    let variance = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let sigma = variance.sqrt();
    if sigma == 0.0 {
        return Ok(mean);
    }
    Ok(mean - sigma / nf.sqrt() * student_t_quantile(1.0 - delta, nf - 1.0)?)
}
