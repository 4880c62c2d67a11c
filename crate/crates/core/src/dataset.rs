//! Batches of recorded episodes and their line-oriented text encoding.
//!
//! ```text
//! # spibb-dataset n_states=25 n_actions=4 gamma=0.95 seed=7
//! episode_id,t,x,a,r,x',done
//! 0,0,0,2,0,5,false
//! ```
//!
//! Reals are written with the shortest representation that parses back to
//! the same bits, so a write/read cycle is lossless.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
    pub done: bool,
}

/// Episodes in collection order. Each episode ends with `done = true` or
/// at the sampler's episode cap.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionDataset {
    pub trajectories: Vec<Vec<Transition>>,
    pub source_seed: u64,
}

impl TransitionDataset {
    pub fn new(trajectories: Vec<Vec<Transition>>, source_seed: u64) -> Self {
        Self {
            trajectories,
            source_seed,
        }
    }

    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.trajectories.iter().flatten()
    }

    pub fn n_transitions(&self) -> usize {
        self.trajectories.iter().map(Vec::len).sum()
    }

    pub fn n_trajectories(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_transitions() == 0
    }

    /// Splits by trajectory: the first `n_first` episodes and the rest.
    pub fn split_at(&self, n_first: usize) -> (TransitionDataset, TransitionDataset) {
        let n_first = n_first.min(self.trajectories.len());
        let (a, b) = self.trajectories.split_at(n_first);
        (
            TransitionDataset::new(a.to_vec(), self.source_seed),
            TransitionDataset::new(b.to_vec(), self.source_seed),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetHeader {
    pub n_states: usize,
    pub n_actions: usize,
    pub gamma: f64,
    pub seed: u64,
}

const MAGIC: &str = "# spibb-dataset";
const COLUMNS: &str = "episode_id,t,x,a,r,x',done";

pub fn write_dataset<W: Write>(
    mut out: W,
    dataset: &TransitionDataset,
    n_states: usize,
    n_actions: usize,
    gamma: f64,
) -> Result<()> {
    writeln!(
        out,
        "{MAGIC} n_states={n_states} n_actions={n_actions} gamma={gamma} seed={}",
        dataset.source_seed
    )?;
    writeln!(out, "{COLUMNS}")?;
    for (episode, trajectory) in dataset.trajectories.iter().enumerate() {
        for (t, tr) in trajectory.iter().enumerate() {
            writeln!(
                out,
                "{episode},{t},{},{},{},{},{}",
                tr.state, tr.action, tr.reward, tr.next_state, tr.done
            )?;
        }
    }
    Ok(())
}

pub fn read_dataset<R: BufRead>(input: R) -> Result<(DatasetHeader, TransitionDataset)> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => parse_header(&line?)?,
        None => return Err(parse_err(1, "missing header")),
    };
    match lines.next() {
        Some((_, line)) if line.as_deref().map(str::trim).ok() == Some(COLUMNS) => {}
        _ => return Err(parse_err(2, "missing column line")),
    }

    let mut trajectories: Vec<Vec<Transition>> = Vec::new();
    let mut current_episode = None;
    for (index, line) in lines {
        let line = line?;
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(parse_err(
                line_no,
                format!("expected 7 fields, got {}", fields.len()),
            ));
        }
        let episode: usize = parse_field(fields[0], line_no)?;
        let t: usize = parse_field(fields[1], line_no)?;
        let tr = Transition {
            state: parse_field(fields[2], line_no)?,
            action: parse_field(fields[3], line_no)?,
            reward: parse_field(fields[4], line_no)?,
            next_state: parse_field(fields[5], line_no)?,
            done: parse_field(fields[6], line_no)?,
        };
        if tr.state >= header.n_states
            || tr.next_state >= header.n_states
            || tr.action >= header.n_actions
        {
            return Err(parse_err(line_no, "index out of range for header shape"));
        }
        if current_episode != Some(episode) {
            if t != 0 {
                return Err(parse_err(line_no, "episode does not start at t=0"));
            }
            current_episode = Some(episode);
            trajectories.push(Vec::new());
        }
        let trajectory = trajectories.last_mut().expect("episode pushed above");
        if t != trajectory.len() {
            return Err(parse_err(
                line_no,
                format!("expected t={}, got {t}", trajectory.len()),
            ));
        }
        trajectory.push(tr);
    }
    Ok((header, TransitionDataset::new(trajectories, header.seed)))
}

fn parse_header(line: &str) -> Result<DatasetHeader> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| parse_err(1, "header must start with '# spibb-dataset'"))?;
    let mut n_states = None;
    let mut n_actions = None;
    let mut gamma = None;
    let mut seed = None;
    for token in rest.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("malformed header field '{token}'")))?;
        match key {
            "n_states" => n_states = Some(parse_field(value, 1)?),
            "n_actions" => n_actions = Some(parse_field(value, 1)?),
            "gamma" => gamma = Some(parse_field(value, 1)?),
            "seed" => seed = Some(parse_field(value, 1)?),
            _ => return Err(parse_err(1, format!("unknown header field '{key}'"))),
        }
    }
    match (n_states, n_actions, gamma, seed) {
        (Some(n_states), Some(n_actions), Some(gamma), Some(seed)) => Ok(DatasetHeader {
            n_states,
            n_actions,
            gamma,
            seed,
        }),
        _ => Err(parse_err(
            1,
            "header needs n_states, n_actions, gamma and seed",
        )),
    }
}

pub(crate) fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("cannot parse '{field}'")))
}

pub(crate) fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}
