use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algorithms::{train, Algorithm, HyperGrid};
use super::metrics::normalized_perf;
use super::seeds::{derive_seed, stream};
use crate::envgen::{
    baseline_for_target, generate_baseline, generate_dataset, generate_random_mdp, make_gridworld,
    GenerationConfig, DEFAULT_EPISODE_CAP,
};
use crate::error::{Error, Result};
use crate::mdp::{performance, solve_optimal, FiniteMdp, ModelSpec, StochasticPolicy};

/// Performance of the fixed gridworld baseline.
pub const GRIDWORLD_BASELINE_TARGET: f64 = 0.4;
/// Seed of the randomization step that builds the fixed gridworld baseline.
pub const GRIDWORLD_BASELINE_SEED: u64 = 0;

/// One trained policy's evaluation. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub run_id: u64,
    pub env_seed: u64,
    pub dataset_seed: u64,
    pub eta: Option<f64>,
    pub dataset_size: usize,
    pub algorithm: String,
    pub hyperparam_name: String,
    pub hyperparam_value: Option<f64>,
    pub perf_raw: Option<f64>,
    pub perf_normalized: Option<f64>,
    pub zeta: Option<f64>,
    pub failed: bool,
}

/// Who collects the gridworld datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Behavior {
    #[default]
    Baseline,
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub runs: u64,
    pub master_seed: u64,
    /// Dataset sizes in trajectories.
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub grid: HyperGrid,
    /// Baseline qualities, used by the random-MDP benchmark only.
    pub etas: Vec<f64>,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub behavior: Behavior,
    pub episode_cap: usize,
    /// Shape of the random MDPs; its `eta` and `seed` are ignored.
    pub random_mdp: GenerationConfig,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            runs: 1000,
            master_seed: 0,
            sizes: vec![10, 20, 50, 100, 200, 500, 1000, 2000],
            algorithms: Algorithm::ALL.to_vec(),
            grid: HyperGrid::default(),
            etas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            workers: 0,
            behavior: Behavior::Baseline,
            episode_cap: DEFAULT_EPISODE_CAP,
            random_mdp: GenerationConfig::default(),
        }
    }
}

impl BenchmarkConfig {
    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::invalid(
                "sizes",
                "need at least one positive dataset size",
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("algorithms", "need at least one algorithm"));
        }
        Ok(())
    }

    /// `(algorithm, hyper-parameter)` pairs in record order.
    fn trainers(&self) -> Vec<(Algorithm, Option<f64>)> {
        let mut algorithms = self.algorithms.clone();
        algorithms.sort();
        algorithms.dedup();
        algorithms
            .into_iter()
            .flat_map(|a| self.grid.values(a).into_iter().map(move |v| (a, v)))
            .collect()
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))
    }
}

/// The true environment of a run, with its baseline and anchors.
struct Instance<'a> {
    mdp: &'a FiniteMdp,
    baseline: &'a StochasticPolicy,
    behavior: &'a StochasticPolicy,
    rho_b: f64,
    rho_star: f64,
}

struct RecordKey {
    run_id: u64,
    env_seed: u64,
    dataset_seed: u64,
    eta: Option<f64>,
    dataset_size: usize,
}

fn record(key: &RecordKey, algorithm: Algorithm, value: Option<f64>) -> BenchmarkRecord {
    BenchmarkRecord {
        run_id: key.run_id,
        env_seed: key.env_seed,
        dataset_seed: key.dataset_seed,
        eta: key.eta,
        dataset_size: key.dataset_size,
        algorithm: algorithm.name().to_string(),
        hyperparam_name: algorithm.hyperparam_name().unwrap_or("").to_string(),
        hyperparam_value: value,
        perf_raw: None,
        perf_normalized: None,
        zeta: None,
        failed: true,
    }
}

fn evaluate_all(
    config: &BenchmarkConfig,
    key: &RecordKey,
    instance: Option<&Instance>,
    out: &mut Vec<BenchmarkRecord>,
) {
    let trainers = config.trainers();
    let Some(inst) = instance else {
        out.extend(trainers.iter().map(|&(a, v)| record(key, a, v)));
        return;
    };
    let dataset = generate_dataset(
        inst.mdp,
        inst.behavior,
        key.dataset_size,
        key.dataset_seed,
        config.episode_cap,
    );
    let spec = ModelSpec::of(inst.mdp);
    for (algorithm, value) in trainers {
        let mut rec = record(key, algorithm, value);
        let outcome = dataset.as_ref().map_err(|e| e.to_string()).and_then(|d| {
            let trained = train(
                algorithm,
                value,
                d,
                inst.baseline,
                inst.behavior,
                &spec,
                &config.grid,
            )
            .map_err(|e| e.to_string())?;
            let rho = performance(inst.mdp, &trained.policy).map_err(|e| e.to_string())?;
            Ok((trained, rho))
        });
        if let Ok((trained, rho)) = outcome {
            rec.perf_raw = Some(rho);
            rec.perf_normalized = normalized_perf(rho, inst.rho_b, inst.rho_star).ok();
            rec.zeta = trained.zeta;
            rec.failed = rec.perf_normalized.is_none();
        }
        out.push(rec);
    }
}

/// Sorts by run, eta, size, algorithm, and hyper-parameter.
pub fn sort_records(records: &mut [BenchmarkRecord]) {
    let order = |name: &str| {
        name.parse::<Algorithm>()
            .map(|a| a as usize)
            .unwrap_or(usize::MAX)
    };
    records.sort_by(|a, b| {
        a.run_id
            .cmp(&b.run_id)
            .then(a.eta.unwrap_or(-1.0).total_cmp(&b.eta.unwrap_or(-1.0)))
            .then(a.dataset_size.cmp(&b.dataset_size))
            .then(order(&a.algorithm).cmp(&order(&b.algorithm)))
            .then(a.algorithm.cmp(&b.algorithm))
            .then(
                a.hyperparam_value
                    .unwrap_or(-1.0)
                    .total_cmp(&b.hyperparam_value.unwrap_or(-1.0)),
            )
    });
}

/// Gridworld protocol: a fixed environment and baseline, fresh datasets
/// for every run and size, exact evaluation on the true gridworld.
pub fn run_gridworld_benchmark(config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>> {
    config.validate()?;
    let mdp = make_gridworld();
    let baseline = baseline_for_target(&mdp, GRIDWORLD_BASELINE_TARGET, GRIDWORLD_BASELINE_SEED)?;
    let uniform = StochasticPolicy::uniform(mdp.n_states(), mdp.n_actions());
    let behavior = match config.behavior {
        Behavior::Baseline => &baseline,
        Behavior::UniformRandom => &uniform,
    };
    let (optimal, _) = solve_optimal(&mdp)?;
    let instance = Instance {
        mdp: &mdp,
        baseline: &baseline,
        behavior,
        rho_b: performance(&mdp, &baseline)?,
        rho_star: performance(&mdp, &optimal)?,
    };
    let run = |run_id: u64| {
        let mut out = Vec::new();
        for (size_index, &size) in config.sizes.iter().enumerate() {
            let key = RecordKey {
                run_id,
                env_seed: 0,
                dataset_seed: derive_seed(
                    config.master_seed,
                    &[run_id, stream::DATASET, size_index as u64],
                ),
                eta: None,
                dataset_size: size,
            };
            evaluate_all(config, &key, Some(&instance), &mut out);
        }
        out
    };
    let mut records: Vec<BenchmarkRecord> = config.pool()?.install(|| {
        (0..config.runs)
            .into_par_iter()
            .flat_map_iter(run)
            .collect()
    });
    sort_records(&mut records);
    Ok(records)
}

/// Random-MDP protocol: a new MDP per run, a baseline per `eta`, and a
/// dataset per size, normalized with that run's own anchors.
pub fn run_random_mdps_benchmark(config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>> {
    config.validate()?;
    if config.etas.is_empty() {
        return Err(Error::invalid("etas", "need at least one baseline quality"));
    }
    let run = |run_id: u64| {
        let mut out = Vec::new();
        let env_seed = derive_seed(config.master_seed, &[run_id, stream::ENVIRONMENT]);
        let env = generate_random_mdp(&GenerationConfig {
            seed: env_seed,
            ..config.random_mdp
        })
        .and_then(|mdp| {
            let (optimal, _) = solve_optimal(&mdp)?;
            let rho_star = performance(&mdp, &optimal)?;
            Ok((mdp, rho_star))
        });
        for (eta_index, &eta) in config.etas.iter().enumerate() {
            let baseline_seed = derive_seed(
                config.master_seed,
                &[run_id, stream::BASELINE, eta_index as u64],
            );
            let setup = env.as_ref().ok().and_then(|(mdp, rho_star)| {
                let baseline = generate_baseline(mdp, eta, baseline_seed).ok()?;
                let rho_b = performance(mdp, &baseline).ok()?;
                Some((mdp, *rho_star, baseline, rho_b))
            });
            for (size_index, &size) in config.sizes.iter().enumerate() {
                let key = RecordKey {
                    run_id,
                    env_seed,
                    dataset_seed: derive_seed(
                        config.master_seed,
                        &[run_id, stream::DATASET, eta_index as u64, size_index as u64],
                    ),
                    eta: Some(eta),
                    dataset_size: size,
                };
                let instance = setup
                    .as_ref()
                    .map(|(mdp, rho_star, baseline, rho_b)| Instance {
                        mdp,
                        baseline,
                        behavior: baseline,
                        rho_b: *rho_b,
                        rho_star: *rho_star,
                    });
                evaluate_all(config, &key, instance.as_ref(), &mut out);
            }
        }
        out
    };
    let mut records: Vec<BenchmarkRecord> = config.pool()?.install(|| {
        (0..config.runs)
            .into_par_iter()
            .flat_map_iter(run)
            .collect()
    });
    sort_records(&mut records);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchmarkConfig {
        BenchmarkConfig {
            runs: 3,
            master_seed: 5,
            sizes: vec![10, 20],
            algorithms: vec![
                Algorithm::Baseline,
                Algorithm::BasicRl,
                Algorithm::PiLeqBSpibb,
            ],
            workers: 2,
            ..BenchmarkConfig::default()
        }
    }

    #[test]
    fn baseline_passthrough_is_zero() {
        let records = run_gridworld_benchmark(&small()).unwrap();
        assert_eq!(records.len(), 3 * 2 * 3);
        for r in records.iter().filter(|r| r.algorithm == "baseline") {
            assert_eq!(r.perf_normalized, Some(0.0));
        }
        assert!(records
            .iter()
            .all(|r| !r.failed && r.perf_normalized.unwrap() <= 1.0 + 1e-9));
    }

    #[test]
    fn random_mdp_record_count() {
        let config = BenchmarkConfig {
            runs: 2,
            etas: vec![0.1, 0.9],
            sizes: vec![10],
            algorithms: vec![Algorithm::BasicRl, Algorithm::PiBSpibb],
            grid: HyperGrid {
                n_wedges: vec![5, 10],
                ..HyperGrid::default()
            },
            ..small()
        };
        let records = run_random_mdps_benchmark(&config).unwrap();
        assert_eq!(records.len(), 2 * 2 * 3);
        assert!(records.iter().all(|r| r.eta.is_some()));
    }
}
