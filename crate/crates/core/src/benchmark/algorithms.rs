use std::fmt;
use std::str::FromStr;

use crate::competitors::{basic_rl, hcpi_with_behavior, ramdp, robust_mdp, Estimator, HcpiConfig};
use crate::dataset::TransitionDataset;
use crate::error::{Error, Result};
use crate::mdp::{build_mle_mdp, performance, ModelSpec, StochasticPolicy};
use crate::spibb::{
    build_spibb_model, compute_bootstrap_set, safety_certificate, spibb_policy_iteration,
    SpibbVariant,
};

/// Algorithms of the finite-MDP benchmark, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    /// Returns the baseline unchanged.
    Baseline,
    BasicRl,
    PiBSpibb,
    PiLeqBSpibb,
    RaMdp,
    RobustMdp,
    Hcpi,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Baseline,
        Algorithm::BasicRl,
        Algorithm::PiBSpibb,
        Algorithm::PiLeqBSpibb,
        Algorithm::RaMdp,
        Algorithm::RobustMdp,
        Algorithm::Hcpi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::BasicRl => "basic_rl",
            Algorithm::PiBSpibb => "pi_b_spibb",
            Algorithm::PiLeqBSpibb => "pi_leq_b_spibb",
            Algorithm::RaMdp => "ramdp",
            Algorithm::RobustMdp => "robust_mdp",
            Algorithm::Hcpi => "hcpi",
        }
    }

    /// Name of the swept hyper-parameter, if any.
    pub fn hyperparam_name(self) -> Option<&'static str> {
        match self {
            Algorithm::Baseline | Algorithm::BasicRl => None,
            Algorithm::PiBSpibb | Algorithm::PiLeqBSpibb => Some("n_wedge"),
            Algorithm::RaMdp => Some("kappa"),
            Algorithm::RobustMdp => Some("delta_rob"),
            Algorithm::Hcpi => Some("delta_hcpi"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "baseline-passthrough" {
            return Ok(Algorithm::Baseline);
        }
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s || a.name().replace('_', "-") == s)
            .ok_or_else(|| Error::invalid("algorithm", format!("unknown algorithm {s:?}")))
    }
}

/// Hyper-parameter grids of the benchmark algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperGrid {
    pub n_wedges: Vec<u64>,
    pub kappas: Vec<f64>,
    pub delta_robs: Vec<f64>,
    pub delta_hcpis: Vec<f64>,
    pub hcpi_estimator: Estimator,
    /// Confidence of the SPIBB safety certificates recorded as `zeta`.
    pub certificate_delta: f64,
}

impl Default for HyperGrid {
    fn default() -> Self {
        Self {
            n_wedges: vec![20],
            kappas: vec![crate::competitors::DEFAULT_KAPPA],
            delta_robs: vec![crate::competitors::DEFAULT_DELTA_ROB],
            delta_hcpis: vec![crate::competitors::DEFAULT_DELTA_HCPI],
            hcpi_estimator: Estimator::default(),
            certificate_delta: 0.1,
        }
    }
}

impl HyperGrid {
    /// Values swept for `algorithm`; a single `None` when it has no hyper-parameter.
    pub fn values(&self, algorithm: Algorithm) -> Vec<Option<f64>> {
        match algorithm {
            Algorithm::Baseline | Algorithm::BasicRl => vec![None],
            Algorithm::PiBSpibb | Algorithm::PiLeqBSpibb => {
                self.n_wedges.iter().map(|&n| Some(n as f64)).collect()
            }
            Algorithm::RaMdp => self.kappas.iter().copied().map(Some).collect(),
            Algorithm::RobustMdp => self.delta_robs.iter().copied().map(Some).collect(),
            Algorithm::Hcpi => self.delta_hcpis.iter().copied().map(Some).collect(),
        }
    }
}

/// A trained policy and, for SPIBB, the `zeta` of its safety certificate.
#[derive(Debug, Clone)]
pub struct Trained {
    pub policy: StochasticPolicy,
    pub zeta: Option<f64>,
}

/// Trains `algorithm` with hyper-parameter `value` on `dataset`. SPIBB
/// plans in [`build_spibb_model`]; the other model-based algorithms in the
/// pessimistic [`build_mle_mdp`].
pub fn train(
    algorithm: Algorithm,
    value: Option<f64>,
    dataset: &TransitionDataset,
    baseline: &StochasticPolicy,
    behavior: &StochasticPolicy,
    spec: &ModelSpec,
    grid: &HyperGrid,
) -> Result<Trained> {
    let need = |name: &'static str| {
        value.ok_or_else(|| Error::invalid(name, "missing hyper-parameter value"))
    };
    let plain = |policy| Trained { policy, zeta: None };
    match algorithm {
        Algorithm::Baseline => Ok(plain(baseline.clone())),
        Algorithm::BasicRl => Ok(plain(basic_rl(&build_mle_mdp(dataset, spec)?.0)?)),
        Algorithm::PiBSpibb | Algorithm::PiLeqBSpibb => {
            let n_wedge = need("n_wedge")?;
            if !(n_wedge >= 0.0 && n_wedge.fract() == 0.0) {
                return Err(Error::invalid(
                    "n_wedge",
                    format!("{n_wedge} is not a count"),
                ));
            }
            let variant = if algorithm == Algorithm::PiBSpibb {
                SpibbVariant::PiB
            } else {
                SpibbVariant::PiLeqB
            };
            let (mle, counts) = build_spibb_model(dataset, spec)?;
            let boot = compute_bootstrap_set(&counts, n_wedge as u64);
            let policy = spibb_policy_iteration(&mle, baseline, &boot, variant)?;
            let zeta = if n_wedge >= 1.0 {
                let cert = safety_certificate(
                    n_wedge as u64,
                    grid.certificate_delta,
                    spec.v_max(),
                    spec.gamma,
                    performance(&mle, &policy)?,
                    performance(&mle, baseline)?,
                    spec.n_states,
                    spec.n_actions,
                )?;
                Some(cert.zeta)
            } else {
                None
            };
            Ok(Trained { policy, zeta })
        }
        Algorithm::RaMdp => {
            let (mle, counts) = build_mle_mdp(dataset, spec)?;
            Ok(plain(ramdp(&mle, &counts, need("kappa")?)?))
        }
        Algorithm::RobustMdp => {
            let (mle, counts) = build_mle_mdp(dataset, spec)?;
            Ok(plain(robust_mdp(&mle, &counts, need("delta_rob")?)?))
        }
        Algorithm::Hcpi => {
            let config = HcpiConfig {
                delta_hcpi: need("delta_hcpi")?,
                estimator: grid.hcpi_estimator,
                ..HcpiConfig::default()
            };
            Ok(plain(hcpi_with_behavior(
                dataset, baseline, behavior, &config, spec,
            )?))
        }
    }
}
