use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::env::{heli_initial_state, heli_step, HeliAction, HeliState, N_HELI_ACTIONS};
use super::targets::{ActionPolicy, Sample};
use crate::dataset::{parse_err, parse_field};
use crate::envgen::sample_index;
use crate::error::{Error, Result};

const MAGIC: &str = "# spibb-heli-dataset";
const COLUMNS: &str = "t,s_x,s_y,v_x,v_y,a_x,a_y,r,s'_x,s'_y,v'_x,v'_y,done";

pub type HeliTransition = Sample<HeliState>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HeliDataset {
    pub trajectories: Vec<Vec<HeliTransition>>,
    pub noise_factor: f64,
    pub seed: u64,
}

impl HeliDataset {
    pub fn transitions(&self) -> impl Iterator<Item = &HeliTransition> {
        self.trajectories.iter().flatten()
    }

    pub fn n_transitions(&self) -> usize {
        self.trajectories.iter().map(Vec::len).sum()
    }
}

/// Uniform distribution over the nine thrusts.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformHeliPolicy;

impl ActionPolicy<HeliState> for UniformHeliPolicy {
    fn prob(&self, _state: &HeliState, _action: usize) -> f64 {
        1.0 / N_HELI_ACTIONS as f64
    }
}

/// Samples episodes of `policy` from random initial states until the
/// helicopter leaves its domain or `episode_cap` steps have passed.
pub fn generate_heli_dataset<P: ActionPolicy<HeliState> + ?Sized>(
    policy: &P,
    n_trajectories: usize,
    noise_factor: f64,
    seed: u64,
    episode_cap: usize,
) -> Result<HeliDataset> {
    if episode_cap == 0 {
        return Err(Error::invalid("episode_cap", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probs = [0.0; N_HELI_ACTIONS];
    let mut trajectories = Vec::with_capacity(n_trajectories);
    for _ in 0..n_trajectories {
        let mut state = heli_initial_state(&mut rng);
        let mut episode = Vec::new();
        for _ in 0..episode_cap {
            for (a, p) in probs.iter_mut().enumerate() {
                *p = policy.prob(&state, a);
            }
            let action = sample_index(&probs, &mut rng);
            let (next, reward, done) = heli_step(
                &state,
                HeliAction::from_index(action)?,
                noise_factor,
                &mut rng,
            )?;
            episode.push(Sample {
                state,
                action,
                reward,
                next_state: next,
                done,
            });
            if done {
                break;
            }
            state = next;
        }
        trajectories.push(episode);
    }
    Ok(HeliDataset {
        trajectories,
        noise_factor,
        seed,
    })
}

pub fn write_heli_dataset<W: Write>(mut out: W, dataset: &HeliDataset) -> Result<()> {
    writeln!(
        out,
        "{MAGIC} noise_factor={} seed={}",
        dataset.noise_factor, dataset.seed
    )?;
    writeln!(out, "{COLUMNS}")?;
    for episode in &dataset.trajectories {
        for (t, tr) in episode.iter().enumerate() {
            let a = HeliAction::from_index(tr.action)?;
            let (s, n) = (tr.state, tr.next_state);
            writeln!(
                out,
                "{t},{},{},{},{},{},{},{},{},{},{},{},{}",
                s.s_x,
                s.s_y,
                s.v_x,
                s.v_y,
                a.a_x,
                a.a_y,
                tr.reward,
                n.s_x,
                n.s_y,
                n.v_x,
                n.v_y,
                tr.done
            )?;
        }
    }
    Ok(())
}

/// Reads the text format back; episodes start wherever `t` resets to 0.
pub fn read_heli_dataset<R: BufRead>(input: R) -> Result<HeliDataset> {
    let mut lines = input.lines().enumerate();
    let (noise_factor, seed) = match lines.next() {
        Some((_, line)) => parse_header(&line?)?,
        None => return Err(parse_err(1, "missing header")),
    };
    match lines.next() {
        Some((_, line)) if line.as_deref().map(str::trim).ok() == Some(COLUMNS) => {}
        _ => return Err(parse_err(2, "missing column line")),
    }
    let mut trajectories: Vec<Vec<HeliTransition>> = Vec::new();
    for (index, line) in lines {
        let line = line?;
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 13 {
            return Err(parse_err(
                line_no,
                format!("expected 13 fields, got {}", fields.len()),
            ));
        }
        let real = |i: usize| parse_field::<f64>(fields[i], line_no);
        let t: usize = parse_field(fields[0], line_no)?;
        let action = HeliAction::new(
            parse_field(fields[5], line_no)?,
            parse_field(fields[6], line_no)?,
        )
        .map_err(|e| parse_err(line_no, e.to_string()))?;
        let tr = Sample {
            state: HeliState::new(real(1)?, real(2)?, real(3)?, real(4)?),
            action: action.index(),
            reward: real(7)?,
            next_state: HeliState::new(real(8)?, real(9)?, real(10)?, real(11)?),
            done: parse_field(fields[12], line_no)?,
        };
        if t == 0 {
            trajectories.push(Vec::new());
        }
        match trajectories.last_mut() {
            Some(episode) if episode.len() == t => episode.push(tr),
            _ => return Err(parse_err(line_no, format!("unexpected step index t={t}"))),
        }
    }
    Ok(HeliDataset {
        trajectories,
        noise_factor,
        seed,
    })
}

fn parse_header(line: &str) -> Result<(f64, u64)> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| parse_err(1, format!("header must start with '{MAGIC}'")))?;
    let (mut noise, mut seed) = (None, None);
    for token in rest.split_whitespace() {
        match token.split_once('=') {
            Some(("noise_factor", v)) => noise = Some(parse_field(v, 1)?),
            Some(("seed", v)) => seed = Some(parse_field(v, 1)?),
            _ => return Err(parse_err(1, format!("unknown header field '{token}'"))),
        }
    }
    match (noise, seed) {
        (Some(noise), Some(seed)) => Ok((noise, seed)),
        _ => Err(parse_err(1, "header needs noise_factor and seed")),
    }
}
