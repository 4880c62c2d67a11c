use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::mdp::{performance, solve_optimal, FiniteMdp, MdpParts};

/// Parameters of the random-MDP generator and of baseline quality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationConfig {
    pub n_states: usize,
    pub n_actions: usize,
    /// Number of distinct successors of every state-action pair.
    pub connectivity: usize,
    /// Baseline quality: its target performance is `eta rho* + (1 - eta) rho_uniform`.
    pub eta: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            n_states: 25,
            n_actions: 4,
            connectivity: 4,
            eta: 0.5,
            gamma: 0.95,
            seed: 0,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_states < 2 {
            return Err(Error::invalid("n_states", "need at least 2 states"));
        }
        if self.n_actions == 0 {
            return Err(Error::invalid("n_actions", "must be positive"));
        }
        if self.connectivity == 0 || self.connectivity > self.n_states {
            return Err(Error::invalid(
                "connectivity",
                format!("{} not in [1, {}]", self.connectivity, self.n_states),
            ));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::invalid("eta", format!("{} not in (0, 1)", self.eta)));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("{} not in [0, 1)", self.gamma),
            ));
        }
        Ok(())
    }
}

/// The random MDP's dynamics with `goal` made terminal and paying 1 on entry.
pub fn with_goal(
    dynamics: &[f64],
    n_states: usize,
    n_actions: usize,
    gamma: f64,
    initial: usize,
    goal: usize,
) -> Result<FiniteMdp> {
    let ns = n_states;
    let mut transition = dynamics.to_vec();
    transition[goal * n_actions * ns..(goal + 1) * n_actions * ns].fill(0.0);
    let mut outcome = vec![0.0; ns * n_actions * ns];
    let mut reward = vec![0.0; ns * n_actions];
    for sa in (0..ns * n_actions).filter(|sa| sa / n_actions != goal) {
        outcome[sa * ns + goal] = 1.0;
        reward[sa] = transition[sa * ns + goal];
    }
    let mut terminal = vec![false; ns];
    terminal[goal] = true;
    FiniteMdp::from_parts(MdpParts {
        n_states: ns,
        n_actions,
        transition,
        reward,
        outcome_reward: Some(outcome),
        gamma,
        initial_state: initial,
        terminal,
        r_max: 1.0,
    })
}

/// Random transition tables: each pair gets `connectivity` distinct
/// successors with flat-Dirichlet probabilities.
pub fn random_dynamics(config: &GenerationConfig, rng: &mut impl Rng) -> Vec<f64> {
    let (ns, na) = (config.n_states, config.n_actions);
    let mut transition = vec![0.0; ns * na * ns];
    for sa in 0..ns * na {
        let successors = index::sample(rng, ns, config.connectivity);
        let weights: Vec<f64> = (0..config.connectivity).map(|_| rng.sample(Exp1)).collect();
        let total: f64 = weights.iter().sum();
        let row = &mut transition[sa * ns..(sa + 1) * ns];
        for (y, w) in successors.iter().zip(&weights) {
            row[y] = w / total;
        }
        // Absorb the rounding error so the row sums to 1 to machine precision.
        let drift = 1.0 - row.iter().sum::<f64>();
        row[successors.index(0)] += drift;
    }
    transition
}

/// Random MDP with start state 0. The terminal goal is the state, among
/// all others, for which the optimal performance is smallest.
pub fn generate_random_mdp(config: &GenerationConfig) -> Result<FiniteMdp> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dynamics = random_dynamics(config, &mut rng);
    let initial = 0;
    let mut best: Option<(f64, FiniteMdp)> = None;
    for goal in (0..config.n_states).filter(|&g| g != initial) {
        let mdp = with_goal(
            &dynamics,
            config.n_states,
            config.n_actions,
            config.gamma,
            initial,
            goal,
        )?;
        let (policy, _) = solve_optimal(&mdp)?;
        let rho = performance(&mdp, &policy)?;
        if best.as_ref().is_none_or(|(b, _)| rho < *b) {
            best = Some((rho, mdp));
        }
    }
    Ok(best.expect("at least one candidate goal").1)
}
