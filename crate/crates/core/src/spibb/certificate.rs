use crate::error::{Error, Result};

fn log_term(delta: f64, n_states: usize, n_actions: usize) -> f64 {
    // ln(2|X||A| 2^|X| / delta) without forming 2^|X|.
    (2.0 * n_states as f64 * n_actions as f64).ln() + n_states as f64 * std::f64::consts::LN_2
        - delta.ln()
}

/// Concentration radius `sqrt(2/N ln(2|X||A|2^|X|/delta))` of a pair seen
/// `count` times. Zero counts give `+inf`.
pub fn error_epsilon(count: u64, delta: f64, n_states: usize, n_actions: usize) -> f64 {
    if count == 0 {
        return f64::INFINITY;
    }
    (2.0 / count as f64 * log_term(delta, n_states, n_actions)).sqrt()
}

/// High-probability guarantee `rho(pi, M*) >= rho(pi_b, M*) - zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyCertificate {
    pub zeta: f64,
    pub delta: f64,
    pub n_wedge: u64,
    pub rho_spibb_hat: f64,
    pub rho_baseline_hat: f64,
    pub v_max: f64,
    pub gamma: f64,
    pub n_states: usize,
    pub n_actions: usize,
}

impl SafetyCertificate {
    /// Re-evaluates `zeta` from the stored inputs.
    pub fn recompute(&self) -> f64 {
        zeta(
            self.n_wedge,
            self.delta,
            self.v_max,
            self.gamma,
            self.rho_spibb_hat,
            self.rho_baseline_hat,
            self.n_states,
            self.n_actions,
        )
    }

    /// Whether a realised true performance violates the guarantee.
    pub fn is_violated(&self, rho_trained: f64, rho_baseline: f64) -> bool {
        rho_trained < rho_baseline - self.zeta
    }
}

#[allow(clippy::too_many_arguments)]
fn zeta(
    n_wedge: u64,
    delta: f64,
    v_max: f64,
    gamma: f64,
    rho_spibb_hat: f64,
    rho_baseline_hat: f64,
    n_states: usize,
    n_actions: usize,
) -> f64 {
    4.0 * v_max / (1.0 - gamma) * error_epsilon(n_wedge, delta, n_states, n_actions) - rho_spibb_hat
        + rho_baseline_hat
}

#[allow(clippy::too_many_arguments)]
pub fn safety_certificate(
    n_wedge: u64,
    delta: f64,
    v_max: f64,
    gamma: f64,
    rho_spibb_hat: f64,
    rho_baseline_hat: f64,
    n_states: usize,
    n_actions: usize,
) -> Result<SafetyCertificate> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", format!("{delta} not in (0, 1)")));
    }
    if n_wedge == 0 {
        return Err(Error::invalid("n_wedge", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("{gamma} not in [0, 1)")));
    }
    Ok(SafetyCertificate {
        zeta: zeta(
            n_wedge,
            delta,
            v_max,
            gamma,
            rho_spibb_hat,
            rho_baseline_hat,
            n_states,
            n_actions,
        ),
        delta,
        n_wedge,
        rho_spibb_hat,
        rho_baseline_hat,
        v_max,
        gamma,
        n_states,
        n_actions,
    })
}

/// Count threshold at which the certificate's first term equals `zeta`:
/// `32 V_max^2 ln(2|X||A|2^|X|/delta) / (zeta^2 (1-gamma)^2)`.
pub fn n_wedge_for_zeta(
    zeta: f64,
    delta: f64,
    v_max: f64,
    gamma: f64,
    n_states: usize,
    n_actions: usize,
) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", format!("{delta} not in (0, 1)")));
    }
    if !(zeta > 0.0) {
        return Err(Error::invalid("zeta", "must be positive"));
    }
    Ok(32.0 * v_max * v_max * log_term(delta, n_states, n_actions)
        / (zeta * zeta * (1.0 - gamma).powi(2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent arithmetic: forms 2^|X| explicitly.
    fn epsilon_oracle(count: f64, delta: f64, ns: i32, na: f64) -> f64 {
        ((2.0 / count) * ((2.0 * ns as f64 * na * 2f64.powi(ns)) / delta).ln()).sqrt()
    }

    #[test]
    fn zero_count_is_infinite() {
        assert_eq!(error_epsilon(0, 0.1, 25, 4), f64::INFINITY);
    }

    #[test]
    fn vanishes_with_count() {
        assert!(error_epsilon(1_000_000_000_000, 0.1, 25, 4) < 1e-5 * error_epsilon(1, 0.1, 25, 4));
    }

    #[test]
    fn doubling_count_divides_by_sqrt_two() {
        for n in [1u64, 7, 100, 12345] {
            let ratio = error_epsilon(n, 0.1, 25, 4) / error_epsilon(2 * n, 0.1, 25, 4);
            assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_formula() {
        let e = error_epsilon(100, 0.1, 25, 4);
        assert!((e - epsilon_oracle(100.0, 0.1, 25, 4.0)).abs() < 1e-12);
        assert!((e - 0.706_110_2).abs() < 1e-6, "{e}");
    }

    #[test]
    fn certificate_spot_value() {
        let v_max = 1.0 / (1.0 - 0.95);
        let cert = safety_certificate(20, 0.1, v_max, 0.95, 0.0, 0.0, 25, 4).unwrap();
        let expected = 4.0 * v_max / 0.05 * epsilon_oracle(20.0, 0.1, 25, 4.0);
        assert!((cert.zeta - expected).abs() < 1e-9);
        assert!((cert.zeta - cert.recompute()).abs() < 1e-12);
    }

    #[test]
    fn certificate_is_linear_in_rho_terms() {
        let base = safety_certificate(20, 0.1, 20.0, 0.95, 0.5, 0.5, 25, 4).unwrap();
        let better = safety_certificate(20, 0.1, 20.0, 0.95, 0.7, 0.5, 25, 4).unwrap();
        assert!((base.zeta - better.zeta - 0.2).abs() < 1e-9);
        let huge = safety_certificate(u64::MAX, 0.1, 20.0, 0.95, 0.3, 0.3, 25, 4).unwrap();
        assert!(huge.zeta.abs() < 1e-3);
    }

    #[test]
    fn inverse_round_trips() {
        let n = n_wedge_for_zeta(0.5, 0.1, 20.0, 0.95, 25, 4).unwrap();
        let cert = safety_certificate(n.ceil() as u64, 0.1, 20.0, 0.95, 0.0, 0.0, 25, 4).unwrap();
        assert!(cert.zeta <= 0.5 && cert.zeta > 0.49);
    }

    #[test]
    fn invalid_delta() {
        assert!(safety_certificate(20, 0.0, 20.0, 0.95, 0.0, 0.0, 25, 4).is_err());
        assert!(safety_certificate(20, 1.0, 20.0, 0.95, 0.0, 0.0, 25, 4).is_err());
    }
}
