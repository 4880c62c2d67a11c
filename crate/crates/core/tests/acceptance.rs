//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spibb_core::benchmark::{
    cvar, run_gridworld_benchmark, run_random_mdps_benchmark, write_records, Algorithm, Behavior,
    BenchmarkConfig, BenchmarkRecord, HyperGrid, GRIDWORLD_BASELINE_SEED,
    GRIDWORLD_BASELINE_TARGET,
};
use spibb_core::competitors::{discounted_return, is_estimates, Estimator};
use spibb_core::envgen::{
    baseline_for_target, generate_dataset, generate_random_mdp, make_gridworld, GenerationConfig,
};
use spibb_core::helicopter::{
    heli_step, landing_reward, spibb_targets, HeliAction, HeliState, Sample, TabularQ, TAU,
};
use spibb_core::mdp::{
    build_mle_mdp_with, performance, policy_evaluation, solve_optimal, CountTable, MdpParts,
    ModelSpec,
};
use spibb_core::spibb::{
    build_spibb_model, compute_bootstrap_set, project_pi_b, project_pi_leq_b, spibb_q_fixed_point,
    spibb_solve, SpibbVariant, DEFAULT_MAX_ITERATIONS, UNVISITED_PAIR_VALUE,
};
use spibb_core::{FiniteMdp, StochasticPolicy};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    check(
        elapsed < limit,
        format!("{detail}; {:.2?} (limit {:.0?})", elapsed, limit),
    )
}

fn c1_gridworld_anchors() -> Outcome {
    let start = Instant::now();
    let mdp = make_gridworld();
    let (optimal, _) = solve_optimal(&mdp).map_err(|e| e.to_string())?;
    let rho_star = performance(&mdp, &optimal).map_err(|e| e.to_string())?;
    let baseline = baseline_for_target(&mdp, GRIDWORLD_BASELINE_TARGET, GRIDWORLD_BASELINE_SEED)
        .map_err(|e| e.to_string())?;
    let rho_b = performance(&mdp, &baseline).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!("rho* = {rho_star:.5}, rho_b = {rho_b:.5}");
    if !(0.55..=0.65).contains(&rho_star) || !(0.38..=0.40).contains(&rho_b) {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(1), detail)
}

fn c2_fixed_point_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let inst = common::small_instance(1000 + seed, 10, 3, 30);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_wedge = rng.random_range(1..=10u64);
        let spec = ModelSpec::of(&inst.mdp);
        // Both unvisited-pair conventions in use: SPIBB's and Basic RL's.
        for unvisited in [UNVISITED_PAIR_VALUE, -spec.v_max()] {
            let (mle, counts) =
                build_mle_mdp_with(&inst.dataset, &spec, unvisited).map_err(|e| e.to_string())?;
            let boot = compute_bootstrap_set(&counts, n_wedge);
            let model_based = spibb_solve(
                &mle,
                &inst.baseline,
                &boot,
                SpibbVariant::PiB,
                DEFAULT_MAX_ITERATIONS,
            )
            .map_err(|e| e.to_string())?;
            let model_free =
                spibb_q_fixed_point(&inst.dataset, &inst.baseline, &boot, &spec, unvisited)
                    .map_err(|e| e.to_string())?;
            for (a, b) in model_free.iter().zip(&model_based.values.q) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!("max |Q_free - Q_model| = {worst:.2e} over 100 instances x 2 conventions");
    if worst >= 1e-6 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(30), detail)
}

/// Maximum of `q . pi` over `{sum pi = 1, lo <= pi <= hi}` by enumerating
/// basic solutions: every variable but one sits at a bound, the last one
/// closes the sum.
fn box_simplex_optimum(q: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let n = q.len();
    let mut best = f64::NEG_INFINITY;
    for free in 0..n {
        let others: Vec<usize> = (0..n).filter(|&a| a != free).collect();
        for mask in 0u32..(1 << others.len()) {
            let mut pi = vec![0.0; n];
            let mut feasible = true;
            for (bit, &a) in others.iter().enumerate() {
                let at_upper = mask & (1 << bit) != 0;
                if at_upper && !hi[a].is_finite() {
                    feasible = false;
                    break;
                }
                pi[a] = if at_upper { hi[a] } else { lo[a] };
            }
            if !feasible {
                continue;
            }
            pi[free] = 1.0 - pi.iter().sum::<f64>();
            if pi[free] < lo[free] - 1e-12 || pi[free] > hi[free] + 1e-12 {
                continue;
            }
            best = best.max(q.iter().zip(&pi).map(|(a, b)| a * b).sum());
        }
    }
    best
}

fn c3_projection_optimality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let na = rng.random_range(1..=6);
        let q: Vec<f64> = (0..na).map(|_| rng.random_range(-5.0..5.0)).collect();
        let baseline = common::random_policy(1, na, &mut rng);
        let pb = baseline.row(0);
        let boot: Vec<bool> = (0..na).map(|_| rng.random_bool(0.5)).collect();
        let value = |pi: &[f64]| q.iter().zip(pi).map(|(a, b)| a * b).sum::<f64>();

        let pi_b = project_pi_b(&q, pb, &boot).map_err(|e| e.to_string())?;
        let lo: Vec<f64> = (0..na).map(|a| if boot[a] { pb[a] } else { 0.0 }).collect();
        let hi: Vec<f64> = (0..na)
            .map(|a| if boot[a] { pb[a] } else { f64::INFINITY })
            .collect();
        worst = worst.max((value(&pi_b) - box_simplex_optimum(&q, &lo, &hi)).abs());

        let pi_leq = project_pi_leq_b(&q, pb, &boot).map_err(|e| e.to_string())?;
        let lo = vec![0.0; na];
        let hi: Vec<f64> = (0..na)
            .map(|a| if boot[a] { pb[a] } else { f64::INFINITY })
            .collect();
        worst = worst.max((value(&pi_leq) - box_simplex_optimum(&q, &lo, &hi)).abs());
    }
    let elapsed = start.elapsed();
    let detail = format!("max objective gap {worst:.2e} over 1000 instances");
    if worst >= 1e-10 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(5), detail)
}

fn c4_constraint_membership() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut violations = 0;
    for seed in 0..100 {
        let inst = common::small_instance(5000 + seed, 10, 4, 60);
        let spec = ModelSpec::of(&inst.mdp);
        let (mle, counts) = build_spibb_model(&inst.dataset, &spec).map_err(|e| e.to_string())?;
        let n_wedge = 1 + seed % 10;
        let boot = compute_bootstrap_set(&counts, n_wedge);
        for variant in [SpibbVariant::PiB, SpibbVariant::PiLeqB] {
            let solution =
                spibb_solve(&mle, &inst.baseline, &boot, variant, DEFAULT_MAX_ITERATIONS)
                    .map_err(|e| e.to_string())?;
            checked += 1;
            let mut ok = solution
                .performance_trace
                .windows(2)
                .all(|w| w[1] >= w[0] - 1e-9);
            for x in 0..spec.n_states {
                for a in (0..spec.n_actions).filter(|&a| boot.contains(x, a)) {
                    let (p, b) = (solution.policy.prob(x, a), inst.baseline.prob(x, a));
                    ok &= match variant {
                        SpibbVariant::PiB => (p - b).abs() <= 1e-12,
                        SpibbVariant::PiLeqB => p <= b + 1e-12,
                    };
                }
            }
            if !ok {
                violations += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let detail =
        format!("{violations}/{checked} trained policies violate their class or monotonicity");
    if violations > 0 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(10), detail)
}

fn cvar_of(
    records: &[BenchmarkRecord],
    algorithm: Algorithm,
    size: usize,
    fraction: f64,
) -> Result<f64, String> {
    let values: Vec<f64> = records
        .iter()
        .filter(|r| r.algorithm == algorithm.name() && r.dataset_size == size)
        .map(|r| {
            r.perf_normalized
                .ok_or_else(|| format!("failed run {} for {algorithm}", r.run_id))
        })
        .collect::<Result<_, _>>()?;
    cvar(&values, fraction).map_err(|e| e.to_string())
}

const SAFETY_SIZES: [usize; 4] = [10, 50, 200, 1000];

fn safety_runs() -> Result<(Vec<BenchmarkRecord>, Duration), String> {
    let start = Instant::now();
    let config = BenchmarkConfig {
        runs: 1000,
        master_seed: 5,
        sizes: SAFETY_SIZES.to_vec(),
        algorithms: vec![
            Algorithm::BasicRl,
            Algorithm::PiBSpibb,
            Algorithm::PiLeqBSpibb,
        ],
        grid: HyperGrid {
            n_wedges: vec![20],
            ..HyperGrid::default()
        },
        ..BenchmarkConfig::default()
    };
    let records = run_gridworld_benchmark(&config).map_err(|e| e.to_string())?;
    Ok((records, start.elapsed()))
}

fn c5_gridworld_safety(records: &[BenchmarkRecord], elapsed: Duration) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for size in SAFETY_SIZES {
        let c = cvar_of(records, Algorithm::PiLeqBSpibb, size, 0.01)?;
        ok &= c >= -0.05;
        parts.push(format!("{size}: {c:.3}"));
    }
    let basic = cvar_of(records, Algorithm::BasicRl, 10, 0.01)?;
    ok &= basic <= -0.5;
    let detail = format!(
        "Pi_<=b 1%-CVaR by size [{}], Basic RL 1%-CVaR at 10 = {basic:.3}",
        parts.join(", ")
    );
    if !ok {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(600), detail)
}

fn c6_random_mdps_hard_regime() -> Outcome {
    let start = Instant::now();
    let sizes = [10, 100, 1000];
    let config = BenchmarkConfig {
        runs: 1000,
        master_seed: 6,
        sizes: sizes.to_vec(),
        etas: vec![0.9],
        algorithms: vec![Algorithm::PiLeqBSpibb, Algorithm::RaMdp],
        grid: HyperGrid {
            n_wedges: vec![10],
            kappas: vec![0.003],
            ..HyperGrid::default()
        },
        ..BenchmarkConfig::default()
    };
    let records = run_random_mdps_benchmark(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut ok = true;
    let mut parts = Vec::new();
    for size in sizes {
        let c = cvar_of(&records, Algorithm::PiLeqBSpibb, size, 0.01)?;
        ok &= c >= -0.6;
        parts.push(format!("{size}: {c:.3}"));
    }
    let spibb_10 = cvar_of(&records, Algorithm::PiLeqBSpibb, 10, 0.01)?;
    let ramdp_10 = cvar_of(&records, Algorithm::RaMdp, 10, 0.01)?;
    ok &= spibb_10 > ramdp_10;
    let detail = format!(
        "Pi_<=b 1%-CVaR by size [{}], RaMDP 1%-CVaR at 10 = {ramdp_10:.3}",
        parts.join(", ")
    );
    if !ok {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(1200), detail)
}

fn c7_certificate_validity(records: &[BenchmarkRecord]) -> Outcome {
    let mdp = make_gridworld();
    let baseline = baseline_for_target(&mdp, GRIDWORLD_BASELINE_TARGET, GRIDWORLD_BASELINE_SEED)
        .map_err(|e| e.to_string())?;
    let rho_b = performance(&mdp, &baseline).map_err(|e| e.to_string())?;
    let mut total = 0usize;
    let mut violations = 0usize;
    for r in records.iter().filter(|r| r.zeta.is_some()) {
        let (Some(rho), Some(zeta)) = (r.perf_raw, r.zeta) else {
            continue;
        };
        total += 1;
        if rho < rho_b - zeta {
            violations += 1;
        }
    }
    if total == 0 {
        return Err("no certified runs".into());
    }
    let fraction = violations as f64 / total as f64;
    check(
        fraction <= 0.1,
        format!("{violations}/{total} certified runs violate rho >= rho_b - zeta ({fraction:.4})"),
    )
}

fn c8_estimators() -> Outcome {
    let start = Instant::now();
    // Ordinary importance sampling on a seeded 5-state random MDP.
    let mdp = generate_random_mdp(&GenerationConfig {
        n_states: 5,
        n_actions: 3,
        connectivity: 3,
        seed: 8,
        ..GenerationConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let behavior = StochasticPolicy::uniform(5, 3);
    let (optimal, _) = solve_optimal(&mdp).map_err(|e| e.to_string())?;
    let candidate = behavior.mixture(&optimal, 0.1).map_err(|e| e.to_string())?;
    let truth = performance(&mdp, &candidate).map_err(|e| e.to_string())?;
    let data = generate_dataset(&mdp, &behavior, 100_000, 88, 1000).map_err(|e| e.to_string())?;
    let est = is_estimates(
        &data.trajectories,
        &candidate,
        &behavior,
        mdp.gamma(),
        Estimator::ImportanceSampling,
        None,
    )
    .map_err(|e| e.to_string())?;
    let n = est.len() as f64;
    let mean = est.iter().sum::<f64>() / n;
    let se = (est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    let is_ok = (mean - truth).abs() <= 3.0 * se;

    // Doubly robust with the exact Q on a deterministic chain.
    let chain = deterministic_chain();
    let behavior = StochasticPolicy::new(3, 2, vec![0.5, 0.5, 0.3, 0.7, 0.5, 0.5])
        .map_err(|e| e.to_string())?;
    let candidate = StochasticPolicy::new(3, 2, vec![0.9, 0.1, 0.2, 0.8, 0.5, 0.5])
        .map_err(|e| e.to_string())?;
    let exact = policy_evaluation(&chain, &candidate).map_err(|e| e.to_string())?;
    let data = generate_dataset(&chain, &behavior, 2000, 7, 1000).map_err(|e| e.to_string())?;
    let dr = is_estimates(
        &data.trajectories,
        &candidate,
        &behavior,
        chain.gamma(),
        Estimator::DoublyRobust,
        Some(&exact.q),
    )
    .map_err(|e| e.to_string())?;
    let target = exact.v[chain.initial_state()];
    let spread = dr.iter().map(|e| (e - target).abs()).fold(0.0, f64::max);
    let returns_vary = data.trajectories.iter().any(|t| {
        (discounted_return(t, chain.gamma())
            - discounted_return(&data.trajectories[0], chain.gamma()))
        .abs()
            > 1e-3
    });
    let dr_ok = spread < 1e-9 && returns_vary;

    let elapsed = start.elapsed();
    let detail = format!(
        "IS mean {mean:.5} vs true {truth:.5} (3 SE = {:.5}); DR max deviation {spread:.2e}",
        3.0 * se
    );
    if !(is_ok && dr_ok) {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(60), detail)
}

/// `0 -a0-> 1 -a0-> 2 (goal)`, action 1 loops in place; each move pays its own reward.
fn deterministic_chain() -> FiniteMdp {
    FiniteMdp::from_parts(MdpParts {
        n_states: 3,
        n_actions: 2,
        transition: vec![
            0.0, 1.0, 0.0, /**/ 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, /**/ 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, /**/ 0.0, 0.0, 0.0,
        ],
        reward: vec![0.2, -0.1, 1.0, 0.05, 0.0, 0.0],
        outcome_reward: None,
        gamma: 0.9,
        initial_state: 0,
        terminal: vec![false, false, true],
        r_max: 1.0,
    })
    .expect("valid chain")
}

fn c9_helicopter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut kin_err: f64 = 0.0;
    for _ in 0..200 {
        let s = HeliState::new(
            rng.random_range(0.1..0.9),
            rng.random_range(0.1..0.9),
            rng.random_range(-0.9..0.9),
            rng.random_range(-0.9..0.9),
        );
        let action = HeliAction::from_index(rng.random_range(0..9)).map_err(|e| e.to_string())?;
        let (next, _, _) = heli_step(&s, action, 0.0, &mut rng).map_err(|e| e.to_string())?;
        let (ax, ay) = (f64::from(action.a_x), f64::from(action.a_y));
        let expected = [
            s.s_x + s.v_x * TAU + 0.5 * ax * TAU * TAU,
            s.s_y + s.v_y * TAU + 0.5 * ay * TAU * TAU,
            s.v_x + ax * TAU,
            s.v_y + ay * TAU,
        ];
        for (a, b) in next.as_array().iter().zip(expected) {
            kin_err = kin_err.max((a - b).abs());
        }
    }

    // 1/d - 4 at the two clamp boundaries, between them, and past both ends.
    let hand = [
        ((1.0 + 1.0 / 14.0, 1.0), 10.0),
        ((1.0, 1.0 + 1.0 / 3.0), -1.0),
        ((1.2, 1.0), 1.0),
        ((1.0, 1.25), 0.0),
        ((2.0, 1.0), -1.0),
    ];
    let reward_err = hand
        .iter()
        .map(|((x, y), r)| (landing_reward(*x, *y) - r).abs())
        .fold(0.0, f64::max);

    // Tabular targets iterated to their fixed point.
    let mut fp_err: f64 = 0.0;
    for seed in 0..20 {
        let inst = common::small_instance(9000 + seed, 10, 3, 30);
        let n_wedge = 1 + seed % 10;
        let spec = ModelSpec::of(&inst.mdp);
        let counts = CountTable::from_dataset(&inst.dataset, spec.n_states, spec.n_actions)
            .map_err(|e| e.to_string())?;
        let boot = compute_bootstrap_set(&counts, n_wedge);
        let reference = spibb_q_fixed_point(
            &inst.dataset,
            &inst.baseline,
            &boot,
            &spec,
            UNVISITED_PAIR_VALUE,
        )
        .map_err(|e| e.to_string())?;
        let iterated = iterate_targets(
            &inst.dataset.trajectories,
            &inst.baseline,
            &counts,
            n_wedge as f64,
            &spec,
        )?;
        for (a, b) in iterated.iter().zip(&reference) {
            fp_err = fp_err.max((a - b).abs());
        }
    }
    check(
        kin_err < 1e-12 && reward_err < 1e-12 && fp_err < 1e-6,
        format!("kinematics error {kin_err:.1e}, landing reward error {reward_err:.1e}, target fixed point error {fp_err:.1e}"),
    )
}

/// Repeated regression of a table onto `spibb_targets`: each visited pair
/// takes the mean target of its samples.
fn iterate_targets(
    trajectories: &[Vec<spibb_core::Transition>],
    baseline: &StochasticPolicy,
    counts: &CountTable,
    n_wedge: f64,
    spec: &ModelSpec,
) -> Result<Vec<f64>, String> {
    let na = spec.n_actions;
    let batch: Vec<Sample<usize>> = trajectories.iter().flatten().map(Sample::from).collect();
    let mut terminal = vec![false; spec.n_states];
    for s in batch.iter().filter(|s| s.done) {
        terminal[s.next_state] = true;
    }
    let mut q: Vec<f64> = (0..spec.n_states * na)
        .map(|sa| {
            if terminal[sa / na] || counts.as_slice()[sa] > 0 {
                0.0
            } else {
                UNVISITED_PAIR_VALUE
            }
        })
        .collect();
    for _ in 0..100_000 {
        let y = spibb_targets(
            &batch,
            na,
            &TabularQ {
                values: &q,
                n_actions: na,
            },
            baseline,
            counts,
            n_wedge,
            spec.gamma,
        );
        let mut sum = vec![0.0; q.len()];
        for (s, t) in batch.iter().zip(&y) {
            sum[s.state * na + s.action] += t;
        }
        let mut change: f64 = 0.0;
        for sa in (0..q.len()).filter(|&sa| counts.as_slice()[sa] > 0 && !terminal[sa / na]) {
            let value = sum[sa] / counts.as_slice()[sa] as f64;
            change = change.max((value - q[sa]).abs());
            q[sa] = value;
        }
        if change < 1e-12 {
            return Ok(q);
        }
    }
    Err("tabular target iteration did not converge".into())
}

fn csv_bytes(records: &[BenchmarkRecord]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    write_records(&mut out, records).map_err(|e| e.to_string())?;
    Ok(out)
}

fn c10_determinism() -> Outcome {
    let base = BenchmarkConfig {
        runs: 12,
        master_seed: 10,
        sizes: vec![10, 50],
        etas: vec![0.5, 0.9],
        grid: HyperGrid {
            n_wedges: vec![5, 20],
            ..HyperGrid::default()
        },
        ..BenchmarkConfig::default()
    };
    type Runner = fn(&BenchmarkConfig) -> spibb_core::Result<Vec<BenchmarkRecord>>;
    let subcommands: [(&str, Behavior, Runner); 3] = [
        ("gridworld", Behavior::Baseline, run_gridworld_benchmark),
        (
            "gridworld-random-behavior",
            Behavior::UniformRandom,
            run_gridworld_benchmark,
        ),
        ("random-mdps", Behavior::Baseline, run_random_mdps_benchmark),
    ];
    let mut rows = 0;
    for (name, behavior, run) in subcommands {
        let outputs = [1usize, 8]
            .into_iter()
            .map(|workers| {
                let config = BenchmarkConfig {
                    workers,
                    behavior,
                    ..base.clone()
                };
                run(&config)
                    .map_err(|e| e.to_string())
                    .and_then(|r| csv_bytes(&r))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if outputs[0] != outputs[1] {
            return Err(format!("{name}: CSV differs between 1 and 8 workers"));
        }
        rows += outputs[0].iter().filter(|&&b| b == b'\n').count() - 1;
    }
    Ok(format!(
        "3 subcommands, {rows} rows, identical bytes for 1 and 8 workers"
    ))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| match &outcome {
        Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("criterion {id:>2} FAIL  {name}: {detail}");
        }
    };
    report(1, "gridworld anchors", c1_gridworld_anchors());
    report(
        2,
        "model-free fixed point equals model-based Pi_b",
        c2_fixed_point_equivalence(),
    );
    report(3, "projection optimality", c3_projection_optimality());
    report(4, "policy class membership", c4_constraint_membership());
    let (c5, c7) = match safety_runs() {
        Ok((records, elapsed)) => (
            c5_gridworld_safety(&records, elapsed),
            c7_certificate_validity(&records),
        ),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    report(5, "gridworld safety", c5);
    report(6, "random MDPs hard regime", c6_random_mdps_hard_regime());
    report(7, "certificate validity", c7);
    report(8, "estimator sanity", c8_estimators());
    report(9, "helicopter kinematics and targets", c9_helicopter());
    report(10, "determinism", c10_determinism());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
