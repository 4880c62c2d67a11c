use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Time step.
pub const TAU: f64 = 0.1;
/// Position noise standard deviation at noise factor 1.
pub const SIGMA_S: f64 = 0.025;
/// Velocity noise standard deviation at noise factor 1.
pub const SIGMA_V: f64 = 0.05;
pub const N_HELI_ACTIONS: usize = 9;
/// Reward when a velocity leaves `(-1, 1)`.
pub const CRASH_REWARD: f64 = -1.0;
pub const MAX_LANDING_REWARD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeliState {
    pub s_x: f64,
    pub s_y: f64,
    pub v_x: f64,
    pub v_y: f64,
}

impl HeliState {
    pub fn new(s_x: f64, s_y: f64, v_x: f64, v_y: f64) -> Self {
        Self { s_x, s_y, v_x, v_y }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.s_x, self.s_y, self.v_x, self.v_y]
    }

    fn velocity_in_range(&self) -> bool {
        self.v_x.abs() < 1.0 && self.v_y.abs() < 1.0
    }

    fn position_in_range(&self) -> bool {
        self.s_x > 0.0 && self.s_x < 1.0 && self.s_y > 0.0 && self.s_y < 1.0
    }

    /// True when all four coordinates are inside their open ranges.
    pub fn is_in_bounds(&self) -> bool {
        self.velocity_in_range() && self.position_in_range()
    }

    /// Euclidean distance over all four coordinates.
    pub fn distance(&self, other: &HeliState) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Thrust pair, each component in `{-1, 0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeliAction {
    pub a_x: i8,
    pub a_y: i8,
}

impl HeliAction {
    pub fn new(a_x: i8, a_y: i8) -> Result<Self> {
        if !(-1..=1).contains(&a_x) || !(-1..=1).contains(&a_y) {
            return Err(Error::invalid(
                "thrust",
                format!("({a_x}, {a_y}) outside {{-1, 0, 1}}^2"),
            ));
        }
        Ok(Self { a_x, a_y })
    }

    /// Action `index = 3 (a_x + 1) + (a_y + 1)`.
    pub fn from_index(index: usize) -> Result<Self> {
        if index >= N_HELI_ACTIONS {
            return Err(Error::invalid(
                "action",
                format!("index {index} not below {N_HELI_ACTIONS}"),
            ));
        }
        Ok(Self {
            a_x: (index / 3) as i8 - 1,
            a_y: (index % 3) as i8 - 1,
        })
    }

    pub fn index(&self) -> usize {
        3 * (self.a_x + 1) as usize + (self.a_y + 1) as usize
    }

    pub fn all() -> impl Iterator<Item = HeliAction> {
        (0..N_HELI_ACTIONS).map(|i| HeliAction::from_index(i).expect("index in range"))
    }
}

/// `min(10, max(-1, 1/d - 4))` with `d` the distance from the exit point to `(1, 1)`.
pub fn landing_reward(s_x: f64, s_y: f64) -> f64 {
    let d = ((s_x - 1.0).powi(2) + (s_y - 1.0).powi(2)).sqrt();
    (1.0 / d - 4.0).clamp(CRASH_REWARD, MAX_LANDING_REWARD)
}

/// One step of the helicopter dynamics.
///
/// Positions move by `v tau + a tau^2 / 2` and velocities by `a tau`, plus
/// Gaussian noise with standard deviations `noise_factor * (0.025, 0.05)`.
/// Leaving the velocity range ends the episode with reward -1; otherwise
/// leaving the unit square ends it with the landing reward.
pub fn heli_step(
    state: &HeliState,
    action: HeliAction,
    noise_factor: f64,
    rng: &mut impl Rng,
) -> Result<(HeliState, f64, bool)> {
    if !state.is_in_bounds() {
        return Err(Error::TerminalState(format!("{state:?}")));
    }
    if !(noise_factor >= 0.0 && noise_factor.is_finite()) {
        return Err(Error::invalid(
            "noise_factor",
            format!("{noise_factor} must be a nonnegative real"),
        ));
    }
    let mut noise = [0.0; 4];
    for n in &mut noise {
        *n = StandardNormal.sample(rng);
    }
    let (a_x, a_y) = (f64::from(action.a_x), f64::from(action.a_y));
    let (sigma_s, sigma_v) = (noise_factor * SIGMA_S, noise_factor * SIGMA_V);
    let next = HeliState {
        s_x: state.s_x + state.v_x * TAU + 0.5 * a_x * TAU * TAU + sigma_s * noise[0],
        s_y: state.s_y + state.v_y * TAU + 0.5 * a_y * TAU * TAU + sigma_s * noise[1],
        v_x: state.v_x + a_x * TAU + sigma_v * noise[2],
        v_y: state.v_y + a_y * TAU + sigma_v * noise[3],
    };
    if !next.velocity_in_range() {
        return Ok((next, CRASH_REWARD, true));
    }
    if !next.position_in_range() {
        return Ok((next, landing_reward(next.s_x, next.s_y), true));
    }
    Ok((next, 0.0, false))
}

/// Uniform draw from `(0, 1/3)^2 x (-1, 1)^2`.
pub fn heli_initial_state(rng: &mut impl Rng) -> HeliState {
    let mut open = |lo: f64, hi: f64| loop {
        let u = rng.random_range(lo..hi);
        if u != lo {
            return u;
        }
    };
    HeliState {
        s_x: open(0.0, 1.0 / 3.0),
        s_y: open(0.0, 1.0 / 3.0),
        v_x: open(-1.0, 1.0),
        v_y: open(-1.0, 1.0),
    }
}
